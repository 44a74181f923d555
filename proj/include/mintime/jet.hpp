#pragma once

#include <algorithm>
#include <cassert>
#include <string>
#include <vector>

#include "mintime/errors.hpp"
#include "mintime/scalar.hpp"

namespace mintime {

/// Truncated Taylor expansion at x = 0.
///
/// Coefficient l holds f^{(l)}(0) / l!, so products and compositions are plain
/// truncated convolutions. A jet of order K carries K + 1 coefficients.
template <typename S>
class Jet {
 public:
  Jet() : coeffs_(1, S(0)) {}

  explicit Jet(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(S(0));
  }

  static Jet zero(int order) { return Jet(std::vector<S>(static_cast<std::size_t>(order) + 1, S(0))); }

  static Jet constant(const S& value, int order) {
    Jet out = zero(order);
    out.coeffs_[0] = value;
    return out;
  }

  /// The jet of f(x) = x.
  static Jet identity(int order) {
    Jet out = zero(order);
    if (order >= 1) out.coeffs_[1] = S(1);
    return out;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }

  const S& operator[](std::size_t l) const { return coeffs_[l]; }
  S& operator[](std::size_t l) { return coeffs_[l]; }
  const std::vector<S>& coeffs() const { return coeffs_; }

  S value() const { return coeffs_[0]; }

  /// f^{(l)}(0), recovered from the stored Taylor coefficient.
  S derivative_at_zero(int l) const { return coeffs_[static_cast<std::size_t>(l)] * factorial<S>(l); }

  Jet truncate(int order) const {
    assert(order <= this->order());
    return Jet(std::vector<S>(coeffs_.begin(), coeffs_.begin() + order + 1));
  }

  bool is_zero(double tol = 0.0) const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [tol](const S& c) { return scalar_traits<S>::is_zero(c, tol); });
  }

  friend bool operator==(const Jet& a, const Jet& b) { return a.coeffs_ == b.coeffs_; }

  Jet& operator+=(const Jet& other) {
    const int k = std::min(order(), other.order());
    coeffs_.resize(static_cast<std::size_t>(k) + 1);
    for (int l = 0; l <= k; ++l) coeffs_[l] += other.coeffs_[l];
    return *this;
  }

  Jet& operator-=(const Jet& other) {
    const int k = std::min(order(), other.order());
    coeffs_.resize(static_cast<std::size_t>(k) + 1);
    for (int l = 0; l <= k; ++l) coeffs_[l] -= other.coeffs_[l];
    return *this;
  }

  Jet& operator*=(const S& c) {
    for (auto& v : coeffs_) v *= c;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const S& c) { return a *= c; }
  friend Jet operator*(const S& c, Jet a) { return a *= c; }
  friend Jet operator-(Jet a) {
    for (auto& v : a.coeffs_) v = -v;
    return a;
  }

 private:
  std::vector<S> coeffs_;
};

template <typename S>
Jet<S> jet_mul(const Jet<S>& a, const Jet<S>& b) {
  const int k = std::min(a.order(), b.order());
  Jet<S> out = Jet<S>::zero(k);
  for (int i = 0; i <= k; ++i) {
    if (a[i] == S(0)) continue;
    for (int j = 0; i + j <= k; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

template <typename S>
Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
  return jet_mul(a, b);
}

template <typename S>
Jet<S> jet_div(const Jet<S>& a, const Jet<S>& b) {
  if (b[0] == S(0)) throw Error(ErrorKind::DivisionByZeroConstantTerm, "jet divisor vanishes at 0");
  const int k = std::min(a.order(), b.order());
  Jet<S> q = Jet<S>::zero(k);
  for (int l = 0; l <= k; ++l) {
    S acc = a[l];
    for (int j = 1; j <= l; ++j) acc -= b[j] * q[l - j];
    q[l] = acc / b[0];
  }
  return q;
}

/// f(g(x)) for g(0) = 0, by Horner's rule on truncated series.
template <typename S>
Jet<S> jet_compose(const Jet<S>& f, const Jet<S>& g) {
  if (g[0] != S(0)) throw Error(ErrorKind::CompositionConstantTermNonzero, "inner jet must vanish at 0");
  const int k = std::min(f.order(), g.order());
  const Jet<S> inner = g.truncate(k);
  Jet<S> acc = Jet<S>::constant(f[k], k);
  for (int l = k - 1; l >= 0; --l) {
    acc = jet_mul(acc, inner);
    acc[0] += f[l];
  }
  return acc;
}

/// Derivative; the result loses one order. Order-0 input gives the zero jet of order 0.
template <typename S>
Jet<S> jet_derive(const Jet<S>& a) {
  if (a.order() == 0) return Jet<S>::zero(0);
  Jet<S> out = Jet<S>::zero(a.order() - 1);
  for (int l = 0; l < a.order(); ++l) out[l] = a[l + 1] * S(l + 1);
  return out;
}

/// Antiderivative vanishing at 0; the result gains one order.
template <typename S>
Jet<S> jet_integrate(const Jet<S>& a) {
  Jet<S> out = Jet<S>::zero(a.order() + 1);
  for (int l = 0; l <= a.order(); ++l) out[l + 1] = a[l] / S(l + 1);
  return out;
}

/// exp(a) for a(0) = 0, via e' = a' e.
template <typename S>
Jet<S> jet_exp(const Jet<S>& a) {
  if (a[0] != S(0)) throw Error(ErrorKind::CompositionConstantTermNonzero, "jet_exp needs a(0) = 0");
  const int k = a.order();
  Jet<S> e = Jet<S>::zero(k);
  e[0] = S(1);
  for (int l = 1; l <= k; ++l) {
    S acc(0);
    for (int j = 1; j <= l; ++j) acc += S(j) * a[j] * e[l - j];
    e[l] = acc / S(l);
  }
  return e;
}

template <typename S>
std::string to_string(const Jet<S>& j) {
  std::string out = "(";
  for (int l = 0; l <= j.order(); ++l) {
    if (l) out += ", ";
    out += to_string(j[l]);
  }
  return out + ")";
}

}  // namespace mintime
