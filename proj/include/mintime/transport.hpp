#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mintime/errors.hpp"
#include "mintime/jet.hpp"
#include "mintime/system.hpp"

namespace mintime {

/// A time that is either known in closed rational form or only approximately
/// (log closed forms, quadrature). Sums and maxima keep the weaker flag.
template <typename S>
struct TimeValue {
  S value{0};
  bool rational = true;

  friend TimeValue operator+(const TimeValue& a, const TimeValue& b) {
    return {a.value + b.value, a.rational && b.rational};
  }
  friend bool operator<(const TimeValue& a, const TimeValue& b) { return a.value < b.value; }
  friend bool operator==(const TimeValue& a, const TimeValue& b) { return a.value == b.value; }

  double to_double() const { return mintime::to_double(value); }
};

template <typename S>
TimeValue<S> max_time(const TimeValue<S>& a, const TimeValue<S>& b) {
  return a.value < b.value ? b : a;
}

template <typename S>
TimeValue<S> min_time(const TimeValue<S>& a, const TimeValue<S>& b) {
  return b.value < a.value ? b : a;
}

template <typename S>
std::string to_string(const TimeValue<S>& t) {
  if (t.rational && scalar_traits<S>::exact) return to_string(t.value);
  return scalar_traits<double>::to_string(t.to_double());
}

template <typename S>
using TimeVector = std::vector<TimeValue<S>>;

/// T_i = int_0^1 dxi / |lambda_i(xi)|, zero-based component index.
template <typename S>
TimeValue<S> transport_time(const ValidatedSpec<S>& spec, int i) {
  const Poly<S>& lam = spec.speed(i);
  if (lam.degree() == 0) {
    return {S(1) / scalar_traits<S>::abs(lam.coeff(0)), scalar_traits<S>::exact};
  }
  double value = 0.0;
  if (lam.degree() == 1) {
    const double a = to_double(lam.coeff(0));
    const double b = to_double(lam.coeff(1));
    value = std::abs(std::log1p(b / a) / b);
  } else {
    const Poly<double> lam_d = lam.template cast<double>();
    auto integrand = [&lam_d](double x) { return 1.0 / std::abs(lam_d(x)); };
    double err = 0.0;
    value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, 0.0, 1.0, 20, 1e-13, &err);
    if (!(err <= 1e-12 * std::abs(value))) {
      throw Error(ErrorKind::QuadratureFailure,
                  "transport time " + std::to_string(i + 1) + " reached error estimate " + std::to_string(err));
    }
  }
  if constexpr (scalar_traits<S>::exact) {
    return {Rational(value), false};
  } else {
    return {value, false};
  }
}

template <typename S>
TimeVector<S> transport_times(const ValidatedSpec<S>& spec) {
  TimeVector<S> out;
  for (int i = 0; i < spec->n(); ++i) out.push_back(transport_time(spec, i));
  return out;
}

/// Taylor jet at 0 of zeta solving zeta' = lambda_{m+k}(zeta) / lambda_{m+j}(x),
/// zeta(0) = 0. Indices j, k are zero-based positive-row indices.
template <typename S>
Jet<S> zeta_jet(const ValidatedSpec<S>& spec, int j, int k, int order) {
  const int m = spec->m;
  const Jet<S> lam_k = spec.speed(m + k).jet(order);
  const Jet<S> lam_j = spec.speed(m + j).jet(order);
  Jet<S> z = Jet<S>::zero(order);
  for (int l = 0; l < order; ++l) {
    const Jet<S> composed = jet_compose(lam_k.truncate(l), z.truncate(l));
    const Jet<S> rhs = jet_div(composed, lam_j.truncate(l));
    z[l + 1] = rhs[l] / S(l + 1);
  }
  return z;
}

/// A traced characteristic s -> chi_i(s; t, x), sampled on a uniform step with
/// cubic Hermite interpolation between samples (slopes are lambda_i(chi)).
struct Characteristic {
  int index = 0;
  double t = 0.0;
  double x = 0.0;
  double step = 0.0;
  std::vector<double> s;
  std::vector<double> chi;
  std::vector<double> slope;

  double s_begin() const { return s.front(); }
  double s_end() const { return s.back(); }
  bool contains(double at) const { return at >= s_begin() - 1e-14 && at <= s_end() + 1e-14; }

  double value(double at) const {
    if (s.size() == 1) return chi.front();
    at = std::clamp(at, s_begin(), s_end());
    std::size_t i = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), at) - s.begin());
    i = std::clamp<std::size_t>(i, 1, s.size() - 1);
    const double h = s[i] - s[i - 1];
    const double u = (at - s[i - 1]) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * chi[i - 1] + h10 * h * slope[i - 1] + h01 * chi[i] + h11 * h * slope[i];
  }
};

namespace detail {

// One direction of an RK4 trace starting from (t, x); direction = +1 or -1.
// Stops after leaving [0, 1], keeping the exit sample interpolated onto the boundary.
inline void trace_direction(const Poly<double>& lam, double t, double x, double s_stop, double h,
                            std::vector<double>& s_out, std::vector<double>& chi_out) {
  const double direction = s_stop >= t ? 1.0 : -1.0;
  double s = t;
  double y = x;
  while (direction * (s_stop - s) > 1e-15) {
    const double dt = direction * std::min(h, direction * (s_stop - s));
    const double k1 = lam(y);
    const double k2 = lam(y + 0.5 * dt * k1);
    const double k3 = lam(y + 0.5 * dt * k2);
    const double k4 = lam(y + dt * k3);
    const double y_next = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    const double s_next = s + dt;
    if (y_next < 0.0 || y_next > 1.0) {
      const double edge = y_next < 0.0 ? 0.0 : 1.0;
      const double frac = (edge - y) / (y_next - y);
      s_out.push_back(s + frac * dt);
      chi_out.push_back(edge);
      return;
    }
    s = s_next;
    y = y_next;
    s_out.push_back(s);
    chi_out.push_back(y);
  }
}

}  // namespace detail

/// Traces chi_i(.; t, x) over [s_begin, s_end] with fixed-step RK4, clipped where
/// the curve leaves [0, 1]. The step keeps |lambda| * h below 1e-3.
template <typename S>
Characteristic trace_characteristic(const ValidatedSpec<S>& spec, int i, double t, double x, double s_begin,
                                    double s_end) {
  const Poly<double> lam = spec.speed(i).template cast<double>();
  double speed_bound = 0.0;
  for (int g = 0; g <= 256; ++g) speed_bound = std::max(speed_bound, std::abs(lam(g / 256.0)));
  const double h = 1e-3 / std::max(1.0, speed_bound);
  if (!(h > 1e-12)) throw Error(ErrorKind::StepSizeUnderflow, "speed too large for the characteristic step");

  std::vector<double> back_s, back_chi, fwd_s, fwd_chi;
  if (s_begin < t) detail::trace_direction(lam, t, x, s_begin, h, back_s, back_chi);
  if (s_end > t) detail::trace_direction(lam, t, x, s_end, h, fwd_s, fwd_chi);

  Characteristic out;
  out.index = i;
  out.t = t;
  out.x = x;
  out.step = h;
  for (std::size_t q = back_s.size(); q-- > 0;) {
    out.s.push_back(back_s[q]);
    out.chi.push_back(back_chi[q]);
  }
  out.s.push_back(t);
  out.chi.push_back(x);
  out.s.insert(out.s.end(), fwd_s.begin(), fwd_s.end());
  out.chi.insert(out.chi.end(), fwd_chi.begin(), fwd_chi.end());
  out.slope.reserve(out.chi.size());
  for (double c : out.chi) out.slope.push_back(lam(c));
  return out;
}

/// Time at which chi_i(.; t, x) crosses the inflow boundary (x = 0 for positive
/// speeds, x = 1 for negative ones), looking backward from t.
template <typename S>
double entry_time(const ValidatedSpec<S>& spec, int i, double t, double x) {
  const TimeValue<S> Ti = transport_time(spec, i);
  const Characteristic c = trace_characteristic(spec, i, t, x, t - 1.5 * Ti.to_double() - 1.0, t);
  return c.s_begin();
}

}  // namespace mintime
