#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mintime/errors.hpp"
#include "mintime/oracle.hpp"
#include "mintime/report.hpp"
#include "mintime/system.hpp"

namespace mintime {

using Json = nlohmann::json;

struct RunOptions {
  double tolerance = 1e-9;
  OracleOptions oracle;
};

/// A parsed spec file. Scalars are kept as rationals; `mode` says which backend
/// the pipeline should run on.
struct SpecFile {
  NumericMode mode = NumericMode::exact;
  SystemSpec<Rational> spec;
  RunOptions options;
};

namespace detail {

struct ScalarReader {
  bool saw_float = false;

  Rational operator()(const Json& v, const std::string& where) {
    if (v.is_number_integer()) {
      return v.is_number_unsigned() ? Rational(v.get<std::uint64_t>()) : Rational(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
      saw_float = true;
      // Shortest round-trip decimal, so 0.1 reads as 1/10.
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, v.get<double>());
      return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
    }
    if (v.is_string()) {
      try {
        return parse_rational(v.get<std::string>());
      } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, where + ": " + e.what());
      }
    }
    throw Error(ErrorKind::ParseError, where + ": expected a number or a rational string");
  }

  Poly<Rational> poly(const Json& v, const std::string& where) {
    if (!v.is_array()) return Poly<Rational>::constant((*this)(v, where));
    std::vector<Rational> c;
    for (std::size_t i = 0; i < v.size(); ++i) c.push_back((*this)(v[i], where + "[" + std::to_string(i) + "]"));
    return Poly<Rational>(std::move(c));
  }
};

inline const Json& require(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing key '") + key + "'");
  return doc.at(key);
}

inline int require_int(const Json& doc, const char* key) {
  const Json& v = require(doc, key);
  if (!v.is_number_integer()) throw Error(ErrorKind::ParseError, std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

inline void line_column(std::string_view text, std::size_t byte, int& line, int& column) {
  line = 1;
  column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

}  // namespace detail

inline SpecFile parse_spec(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    int line = 0, column = 0;
    detail::line_column(text, e.byte, line, column);
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "top level must be an object");

  SpecFile out;
  detail::ScalarReader read;
  SystemSpec<Rational>& s = out.spec;
  s.m = detail::require_int(doc, "m");
  s.p = detail::require_int(doc, "p");
  if (s.m < 1 || s.p < 1) throw Error(ErrorKind::EmptySide, "m and p must be at least 1");

  const Json& lam = detail::require(doc, "lambda");
  if (!lam.is_array()) throw Error(ErrorKind::ParseError, "'lambda' must be an array");
  for (std::size_t i = 0; i < lam.size(); ++i) s.lambda.push_back(read.poly(lam[i], "lambda[" + std::to_string(i) + "]"));

  const Json& M = detail::require(doc, "M");
  if (!M.is_array()) throw Error(ErrorKind::ParseError, "'M' must be an array of rows");
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (!M[i].is_array()) throw Error(ErrorKind::ParseError, "M[" + std::to_string(i) + "] must be an array");
    std::vector<Poly<Rational>> row;
    for (std::size_t j = 0; j < M[i].size(); ++j)
      row.push_back(read.poly(M[i][j], "M[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    s.M.push_back(std::move(row));
  }

  const Json& Q = detail::require(doc, "Q");
  if (!Q.is_array()) throw Error(ErrorKind::ParseError, "'Q' must be an array of rows");
  s.Q = Matrix<Rational>(static_cast<int>(Q.size()), Q.empty() ? 0 : static_cast<int>(Q[0].size()));
  for (std::size_t i = 0; i < Q.size(); ++i) {
    if (!Q[i].is_array() || static_cast<int>(Q[i].size()) != s.Q.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "rows of Q must all have the same length");
    }
    for (std::size_t j = 0; j < Q[i].size(); ++j)
      s.Q(static_cast<int>(i), static_cast<int>(j)) = read(Q[i][j], "Q[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }

  if (doc.contains("r") && !doc.at("r").is_null()) s.r = detail::require_int(doc, "r");

  if (doc.contains("options")) {
    const Json& opt = doc.at("options");
    if (!opt.is_object()) throw Error(ErrorKind::ParseError, "'options' must be an object");
    out.options.tolerance = opt.value("tolerance", out.options.tolerance);
    OracleOptions& o = out.options.oracle;
    if (opt.contains("oracle")) {
      const Json& g = opt.at("oracle");
      o.grid.Nt = g.value("Nt", o.grid.Nt);
      o.grid.Nx = g.value("Nx", o.grid.Nx);
      o.delta = g.value("delta", o.delta);
      o.seed = g.value("seed", o.seed);
    }
    if (opt.contains("scan")) {
      const Json& r = opt.at("scan");
      if (!r.is_array() || r.size() != 2) throw Error(ErrorKind::ParseError, "'scan' must be [lo, hi]");
      o.lo = r[0].get<double>();
      o.hi = r[1].get<double>();
    }
  }
  s.eps = out.options.tolerance;

  out.mode = read.saw_float ? NumericMode::floating : NumericMode::exact;
  if (doc.contains("mode")) {
    const std::string mode = doc.at("mode").is_string() ? doc.at("mode").get<std::string>() : "";
    if (mode == "exact") {
      out.mode = NumericMode::exact;
    } else if (mode == "float") {
      out.mode = NumericMode::floating;
    } else {
      throw Error(ErrorKind::ParseError, "'mode' must be \"exact\" or \"float\"");
    }
  }
  return out;
}

namespace detail {

template <typename S>
Json scalar_json(const S& v) {
  return to_string(v);
}

template <typename S>
Json time_json(const TimeValue<S>& t) {
  return to_string(t);
}

template <typename S>
Json vector_json(const std::vector<S>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_json(x));
  return out;
}

}  // namespace detail

template <typename S>
Json report_json(const TimeReport<S>& rep) {
  Json out;
  out["mode"] = scalar_traits<S>::exact ? "exact" : "float";
  out["status"] = rep.exact() ? "exact" : "bounded";
  Json times = Json::array();
  for (const auto& t : rep.T) times.push_back(detail::time_json(t));
  out["T"] = times;
  out["T_inf"] = rep.exact() ? detail::time_json(rep.lower) : Json(nullptr);
  out["lower"] = detail::time_json(rep.lower);
  out["upper"] = detail::time_json(rep.upper);
  Json pivots = Json::array();
  for (const Pivot& pv : rep.pivots) pivots.push_back({pv.row + 1, pv.col + 1});
  out["pivots"] = pivots;

  Json b;
  b["russell"] = detail::time_json(rep.bounds.russell);
  b["max_M"] = detail::time_json(rep.bounds.max_m);
  b["m_zero"] = detail::time_json(rep.bounds.m_zero);
  b["t_cn"] = rep.bounds.t_cn ? detail::time_json(*rep.bounds.t_cn) : Json(nullptr);
  b["rank_p"] = rep.bounds.rank_p ? detail::time_json(*rep.bounds.rank_p) : Json(nullptr);
  b["early_stop"] = rep.early_stop ? detail::time_json(*rep.early_stop) : Json(nullptr);
  out["bounds"] = b;

  Json trace = Json::array();
  for (const auto& step : rep.reduction.trace) {
    Json st;
    st["row"] = step.row + 1;
    st["outcome"] = std::string(to_string(step.outcome));
    st["s"] = step.s;
    st["budget_used"] = step.budget_used;
    Json a = Json::array();
    for (const auto& v : step.a) a.push_back(detail::vector_json(v));
    st["a"] = a;
    Json w = Json::array();
    for (const auto& v : step.omegas) w.push_back(detail::vector_json(v));
    st["omega"] = w;
    trace.push_back(st);
  }
  out["trace"] = trace;
  out["completed_rows"] = rep.reduction.completed_rows;
  out["diagnostics"] = rep.diagnostics;
  return out;
}

inline Json bracket_json(const TransitionBracket& b) {
  Json out;
  out["lo"] = b.lo;
  out["hi"] = b.hi;
  out["threshold"] = b.threshold;
  return out;
}

}  // namespace mintime
