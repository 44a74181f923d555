#pragma once

#include <algorithm>
#include <vector>

#include "mintime/jet.hpp"
#include "mintime/scalar.hpp"

namespace mintime {

/// Univariate polynomial, coefficients in ascending powers of x.
template <typename S>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Poly constant(const S& c) { return Poly(std::vector<S>{c}); }

  const std::vector<S>& coeffs() const { return coeffs_; }

  /// Degree of the zero polynomial is -1.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return degree() <= 0; }

  S coeff(int l) const { return l >= 0 && l <= degree() ? coeffs_[l] : S(0); }
  S leading() const { return coeffs_.empty() ? S(0) : coeffs_.back(); }

  template <typename X>
  X eval(const X& x) const {
    X acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

  S operator()(const S& x) const { return eval(x); }

  Poly derivative() const {
    if (degree() <= 0) return Poly();
    std::vector<S> d(coeffs_.size() - 1);
    for (std::size_t l = 1; l < coeffs_.size(); ++l) d[l - 1] = coeffs_[l] * S(static_cast<long>(l));
    return Poly(std::move(d));
  }

  /// For a polynomial the Taylor coefficients at 0 are the coefficients themselves.
  Jet<S> jet(int order) const {
    Jet<S> out = Jet<S>::zero(order);
    for (int l = 0; l <= std::min(order, degree()); ++l) out[l] = coeffs_[l];
    return out;
  }

  template <typename T>
  Poly<T> cast() const {
    std::vector<T> c;
    c.reserve(coeffs_.size());
    for (const auto& v : coeffs_) {
      if constexpr (std::is_same_v<S, Rational> && !std::is_same_v<T, Rational>) {
        c.push_back(v.template convert_to<T>());
      } else {
        c.push_back(T(v));
      }
    }
    return Poly<T>(std::move(c));
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<S> c(std::max(a.coeffs_.size(), b.coeffs_.size()), S(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return Poly(std::move(c));
  }

  friend Poly operator-(const Poly& a) {
    std::vector<S> c = a.coeffs_;
    for (auto& v : c) v = -v;
    return Poly(std::move(c));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<S> c(a.coeffs_.size() + b.coeffs_.size() - 1, S(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Poly(std::move(c));
  }

  friend Poly operator*(const S& s, const Poly& a) { return Poly::constant(s) * a; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == S(0)) coeffs_.pop_back();
  }

  std::vector<S> coeffs_;
};

/// Remainder of polynomial division a mod b (b nonzero).
template <typename S>
Poly<S> poly_rem(const Poly<S>& a, const Poly<S>& b) {
  std::vector<S> r = a.coeffs();
  const int db = b.degree();
  const S lead = b.leading();
  for (int top = static_cast<int>(r.size()) - 1; top >= db; --top) {
    const S factor = r[top] / lead;
    if (factor == S(0)) continue;
    for (int i = 0; i <= db; ++i) r[top - db + i] -= factor * b.coeffs()[i];
  }
  r.resize(static_cast<std::size_t>(std::max(db, 0)));
  return Poly<S>(std::move(r));
}

}  // namespace mintime
