// mintime: minimal null control time of a 1D hyperbolic system from a JSON spec.

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mintime/mintime.hpp"

namespace {

using namespace mintime;

enum Exit { kExact = 0, kBounded = 1, kInvalid = 2, kInternal = 3 };

struct CliArgs {
  std::string file;
  std::string json_path;
  std::string csv_path;
  bool oracle = false;
  bool trace = false;
  int max_order = -1;
};

bool is_spec_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::EmptySide:
    case ErrorKind::SpeedOrderViolation:
    case ErrorKind::DegenerateSpeeds:
      return true;
    default:
      return false;
  }
}

template <typename S>
std::string row_string(const std::vector<S>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

template <typename S>
void print_report(std::ostream& os, const ValidatedSpec<S>& spec, const TimeReport<S>& rep, bool trace) {
  const int m = spec->m;
  os << "system: m = " << m << ", p = " << spec->p << ", " << (scalar_traits<S>::exact ? "exact" : "float")
     << " arithmetic\n";
  os << "transport times:\n";
  for (std::size_t i = 0; i < rep.T.size(); ++i) {
    os << "  T" << i + 1 << " = " << to_string(rep.T[i]) << (rep.T[i].rational ? "" : " (approx.)") << "\n";
  }

  const auto& b = rep.bounds;
  os << "bounds:\n";
  os << "  Russell time T" << m + 1 << " + T" << m << ": " << to_string(b.russell) << "\n";
  os << "  largest time over all M (rho0 = " << rep.source_form.rho0 << "): " << to_string(b.max_m) << "\n";
  os << "  time without internal coupling (lower bound): " << to_string(b.m_zero) << "\n";
  os << "  leading-minor condition time: " << (b.t_cn ? to_string(*b.t_cn) : "not applicable") << "\n";
  os << "  full row rank formula: " << (b.rank_p ? to_string(*b.rank_p) : "not applicable") << "\n";
  if (rep.early_stop) os << "  early-stop bound: " << to_string(*rep.early_stop) << "\n";

  os << "reduction:\n";
  for (const auto& step : rep.reduction.trace) {
    os << "  row " << step.row + 1 << ": " << to_string(step.outcome);
    if (step.outcome != StepOutcome::untouched) os << ", s = " << step.s << ", budget used " << step.budget_used;
    os << "\n";
    if (!trace) continue;
    for (std::size_t l = 0; l < step.a.size(); ++l) os << "    a^" << l << " = " << row_string(step.a[l]) << "\n";
    for (std::size_t l = 0; l < step.omegas.size(); ++l)
      os << "    omega^" << l << " = " << row_string(step.omegas[l]) << "\n";
  }
  if (!rep.reduction.complete) os << "  stopped with " << rep.reduction.completed_rows << " completed row(s)\n";
  for (const auto& d : rep.diagnostics) os << "diagnostic: " << d << "\n";

  os << "pivots:";
  for (const Pivot& pv : rep.pivots) os << " (" << pv.row + 1 << "," << pv.col + 1 << ")";
  os << "\n";
  if (rep.exact()) {
    os << "T_inf = " << to_string(rep.lower) << "\n";
  } else {
    os << "T_inf in [" << to_string(rep.lower) << ", " << to_string(rep.upper) << "]\n";
  }
}

template <typename S>
int run(const ValidatedSpec<S>& spec, const SpecFile& file, const CliArgs& args) {
  const TimeReport<S> rep = analyze(spec, AnalyzeOptions{args.max_order});
  print_report(std::cout, spec, rep, args.trace);
  Json doc = report_json(rep);

  if (args.oracle) {
    try {
      const TransitionBracket br = bracket_transition(spec, file.options.oracle);
      std::cout << "oracle bracket: [" << br.lo << ", " << br.hi << "] (threshold " << br.threshold << ")\n";
      doc["oracle"] = bracket_json(br);
      if (!args.csv_path.empty()) {
        std::ofstream csv(args.csv_path);
        if (!csv) throw std::runtime_error("cannot write " + args.csv_path);
        write_csv(csv, br.scan);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoTransition) throw;
      std::cout << "oracle: " << e.what() << "\n";
      doc["oracle"] = Json(nullptr);
    }
  }

  if (!args.json_path.empty()) {
    std::ofstream out(args.json_path);
    if (!out) throw std::runtime_error("cannot write " + args.json_path);
    out << doc.dump(2) << "\n";
  }
  return rep.exact() ? kExact : kBounded;
}

}  // namespace

int main(int argc, char** argv) {
  // `compute` is the only command and may be omitted.
  std::vector<char*> args_v(argv, argv + argc);
  if (argc > 1 && std::strcmp(argv[1], "compute") == 0) args_v.erase(args_v.begin() + 1);

  CLI::App app{"Minimal null control time of 1D first-order hyperbolic systems"};
  CliArgs args;
  app.add_option("file", args.file, "system specification (JSON)")->required();
  app.add_option("--json", args.json_path, "write the machine-readable report here");
  app.add_flag("--oracle", args.oracle, "bracket the transition with the discrete oracle");
  app.add_flag("--trace", args.trace, "print every reduction step");
  app.add_option("--max-order", args.max_order, "cap on the jet order used by the reduction");
  app.add_option("--csv", args.csv_path, "with --oracle, write the residual scan as CSV");
  try {
    app.parse(static_cast<int>(args_v.size()), args_v.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInvalid;
  }

  std::string text;
  {
    std::ifstream in(args.file);
    if (!in) {
      std::cerr << "error: cannot read " << args.file << "\n";
      return kInternal;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  try {
    const SpecFile file = parse_spec(text);
    if (file.mode == NumericMode::exact) return run(validate_spec(file.spec), file, args);
    return run(validate_spec(file.spec.cast<double>()), file, args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_spec_error(e.kind()) ? kInvalid : kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
