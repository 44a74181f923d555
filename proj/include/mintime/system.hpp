#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mintime/errors.hpp"
#include "mintime/matrix.hpp"
#include "mintime/poly.hpp"
#include "mintime/scalar.hpp"

namespace mintime {

/// y_t + Lambda(x) y_x = M(x) y on (0,1), y_-(t,1) = u(t), y_+(t,0) = Q y_-(t,0).
///
/// Components 0..m-1 carry the negative speeds, m..n-1 the positive ones.
template <typename S>
struct SystemSpec {
  int m = 0;
  int p = 0;
  std::vector<Poly<S>> lambda;             // n diagonal speeds
  std::vector<std::vector<Poly<S>>> M;     // n x n internal coupling
  Matrix<S> Q;                             // p x m boundary coupling
  int r = -1;                              // regularity order; -1 selects the default
  double eps = 1e-9;                       // comparison tolerance, floating backend only

  int n() const { return m + p; }
  int nmin() const { return std::min(m, p); }

  /// Largest polynomial degree among the speeds and couplings, plus four.
  int default_regularity() const {
    int deg = 0;
    for (const auto& l : lambda) deg = std::max(deg, l.degree());
    for (const auto& row : M)
      for (const auto& e : row) deg = std::max(deg, e.degree());
    return deg + 4;
  }

  int regularity() const { return r >= 0 ? r : default_regularity(); }

  template <typename T>
  SystemSpec<T> cast() const {
    SystemSpec<T> out;
    out.m = m;
    out.p = p;
    out.r = r;
    out.eps = eps;
    for (const auto& l : lambda) out.lambda.push_back(l.template cast<T>());
    out.M.resize(M.size());
    for (std::size_t i = 0; i < M.size(); ++i)
      for (const auto& e : M[i]) out.M[i].push_back(e.template cast<T>());
    out.Q = Q.template cast<T>();
    return out;
  }
};

template <typename S>
class ValidatedSpec;

template <typename S>
ValidatedSpec<S> validate_spec(SystemSpec<S> spec);

/// A spec that passed validate_spec. Immutable.
template <typename S>
class ValidatedSpec {
 public:
  const SystemSpec<S>& operator*() const { return spec_; }
  const SystemSpec<S>* operator->() const { return &spec_; }
  const SystemSpec<S>& get() const { return spec_; }

  /// Speed and its value at x = 0, by component index.
  const Poly<S>& speed(int i) const { return spec_.lambda[i]; }
  S speed_at_zero(int i) const { return spec_.lambda[i].coeff(0); }

 private:
  explicit ValidatedSpec(SystemSpec<S> spec) : spec_(std::move(spec)) {}
  friend ValidatedSpec validate_spec<S>(SystemSpec<S> spec);

  SystemSpec<S> spec_;
};

namespace detail {

template <typename S>
int sign_of(const S& v) {
  return v > S(0) ? 1 : (v < S(0) ? -1 : 0);
}

template <typename S>
std::vector<Poly<S>> sturm_chain(const Poly<S>& p) {
  std::vector<Poly<S>> chain{p, p.derivative()};
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    Poly<S> rem = poly_rem(chain[chain.size() - 2], chain.back());
    if (rem.is_zero()) break;
    chain.push_back(-rem);
  }
  if (chain.back().is_zero()) chain.pop_back();
  return chain;
}

template <typename S>
int sign_changes(const std::vector<Poly<S>>& chain, const S& x) {
  int changes = 0;
  int last = 0;
  for (const auto& q : chain) {
    const int s = sign_of(q(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// True when p > 0 on all of [0, 1]. Exact certificate via Sturm root counting
/// for rationals; a 1025-point grid for doubles.
template <typename S>
bool positive_on_unit_interval(const Poly<S>& p) {
  if constexpr (scalar_traits<S>::exact) {
    if (p(S(0)) <= S(0) || p(S(1)) <= S(0)) return false;
    if (p.degree() <= 1) return true;
    const auto chain = sturm_chain(p);
    return sign_changes(chain, S(0)) - sign_changes(chain, S(1)) == 0;
  } else {
    constexpr int kGrid = 1024;
    for (int i = 0; i <= kGrid; ++i) {
      if (!(p(S(i) / S(kGrid)) > S(0))) return false;
    }
    return true;
  }
}

}  // namespace detail

template <typename S>
ValidatedSpec<S> validate_spec(SystemSpec<S> spec) {
  if (spec.m < 1 || spec.p < 1) {
    throw Error(ErrorKind::EmptySide, "need at least one negative and one positive speed (m = " +
                                          std::to_string(spec.m) + ", p = " + std::to_string(spec.p) + ")");
  }
  const int n = spec.n();
  if (static_cast<int>(spec.lambda.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(n) + " speeds, got " + std::to_string(spec.lambda.size()));
  }
  if (static_cast<int>(spec.M.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "M must have " + std::to_string(n) + " rows");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(spec.M[i].size()) != n) {
      throw Error(ErrorKind::DimensionMismatch, "row " + std::to_string(i + 1) + " of M must have " +
                                                    std::to_string(n) + " entries");
    }
  }
  if (spec.Q.rows() != spec.p || spec.Q.cols() != spec.m) {
    throw Error(ErrorKind::DimensionMismatch, "Q must be " + std::to_string(spec.p) + " x " + std::to_string(spec.m));
  }
  if (!(spec.eps > 0.0)) throw Error(ErrorKind::DimensionMismatch, "tolerance must be positive");

  const int m = spec.m;
  if (!detail::positive_on_unit_interval(-spec.lambda[m - 1])) {
    throw Error(ErrorKind::SpeedOrderViolation, "speed " + std::to_string(m) + " must be negative on [0,1]");
  }
  if (!detail::positive_on_unit_interval(spec.lambda[m])) {
    throw Error(ErrorKind::SpeedOrderViolation, "speed " + std::to_string(m + 1) + " must be positive on [0,1]");
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (i == m - 1) continue;
    if (!detail::positive_on_unit_interval(spec.lambda[i + 1] - spec.lambda[i])) {
      throw Error(ErrorKind::SpeedOrderViolation, "speeds " + std::to_string(i + 1) + " and " +
                                                      std::to_string(i + 2) + " are not strictly ordered on [0,1]");
    }
  }
  if (spec.r < 0) spec.r = spec.default_regularity();
  return ValidatedSpec<S>(std::move(spec));
}

}  // namespace mintime
