#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mintime/errors.hpp"
#include "mintime/system.hpp"
#include "mintime/transport.hpp"

namespace mintime {

/// Nt time steps across the Russell horizon T_{m+1} + T_m; Nx samples of the
/// initial data on [0, 1].
struct DiscreteGrid {
  int Nt = 200;
  int Nx = 200;
  double T = 0.0;
};

struct ResidualScan {
  std::vector<double> horizons;
  std::vector<double> residuals;
};

/// Initial data: n rows of Nx + 1 samples on the uniform grid of [0, 1].
using InitialData = std::vector<std::vector<double>>;

inline InitialData random_initial_data(int n, int Nx, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  InitialData y0(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(Nx) + 1));
  for (auto& row : y0)
    for (auto& v : row) v = dist(gen);
  return y0;
}

/// Discrete null-reachability test for the original system. Every component lives
/// on nodes spaced one time step apart along its own characteristics, so transport
/// is an exact shift; the coupling M y is integrated along each characteristic
/// with Heun's method, reading other components by linear interpolation.
///
/// The control takes one value per step and component. Coefficients do not
/// depend on t, so the final state's response to a control value depends only on
/// the elapsed time; one impulse run per control component serves every horizon.
class NullReachOracle {
 public:
  template <typename S>
  NullReachOracle(const ValidatedSpec<S>& spec, DiscreteGrid grid, double max_horizon)
      : NullReachOracle(validate_spec(spec->template cast<double>()), grid, max_horizon, 0) {}

  double step() const { return dt_; }
  int max_steps() const { return max_steps_; }
  int node_count() const { return static_cast<int>(x_.size()); }

  /// min_u |y(T)| / |y0| in the node-weighted L2 norm, T rounded to whole steps.
  double residual(double T, const InitialData& y0) const {
    return residual_steps(std::clamp(static_cast<int>(std::lround(T / dt_)), 0, max_steps_), y0);
  }

  /// The control minimizes |y(T)|^2 + ridge |u|^2 (discrete L2 norms), solved as
  /// the stacked least-squares problem by Householder QR.
  double residual_steps(int steps, const InitialData& y0) const {
    if (static_cast<int>(y0.size()) != n_) throw Error(ErrorKind::DimensionMismatch, "initial data needs n rows");
    for (const auto& row : y0)
      if (row.size() < 2) throw Error(ErrorKind::GridTooCoarse, "initial data needs at least two samples");
    const Eigen::VectorXd start = sample(y0);
    const double norm0 = weighted_norm(start);
    if (norm0 == 0.0) return 0.0;
    Eigen::VectorXd free = start;
    for (int s = 0; s < steps; ++s) free = step_state(free, nullptr);
    if (steps == 0) return weighted_norm(free) / norm0;

    const int total = node_count();
    const int unknowns = steps * m_;
    const Eigen::VectorXd sw = weights_.cwiseSqrt();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(total + unknowns, unknowns);
    // The control applied at step j (1-based) has acted for steps - j + 1 steps at T.
    for (int j = 0; j < steps; ++j)
      for (int c = 0; c < m_; ++c) a.block(0, j * m_ + c, total, 1) = sw.cwiseProduct(response_[c].col(steps - 1 - j));
    a.bottomRows(unknowns).diagonal().setConstant(std::sqrt(kRidge * dt_));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(total + unknowns);
    b.head(total) = -sw.cwiseProduct(free);
    const Eigen::VectorXd u = a.householderQr().solve(b);
    return (a.topRows(total) * u - b.head(total)).norm() / norm0;
  }

 private:
  static constexpr double kRidge = 1e-12;

  NullReachOracle(ValidatedSpec<double> spec, DiscreteGrid grid, double max_horizon, int)
      : spec_(std::move(spec)), n_(spec_->n()), m_(spec_->m) {
    if (grid.Nt < 8 || grid.Nx < 8) throw Error(ErrorKind::GridTooCoarse, "Nt and Nx must be at least 8");
    const TimeVector<double> T = transport_times(spec_);
    dt_ = (T[m_].value + T[m_ - 1].value) / grid.Nt;
    max_steps_ = static_cast<int>(std::ceil(max_horizon / dt_ - 1e-9));
    build_nodes(T);
    build_responses();
  }

  void build_nodes(const TimeVector<double>& T) {
    offset_.push_back(0);
    for (int i = 0; i < n_; ++i) {
      const int last = static_cast<int>(std::ceil(T[i].value / dt_ - 1e-9));
      if (last < 2) throw Error(ErrorKind::GridTooCoarse, "component " + std::to_string(i + 1) + " has too few nodes");
      // Node j reaches x = 0 after j steps (negative speeds) or left x = 0 j steps ago.
      const bool negative = i < m_;
      const double sign = negative ? -1.0 : 1.0;
      const Characteristic c = trace_characteristic(spec_, i, 0.0, 0.0, negative ? -T[i].value - dt_ : 0.0,
                                                    negative ? 0.0 : T[i].value + dt_);
      for (int j = 0; j <= last; ++j) {
        const double at = sign * j * dt_;
        x_.push_back(j == last || !c.contains(at) ? 1.0 : std::clamp(c.value(at), 0.0, 1.0));
        comp_.push_back(i);
      }
      offset_.push_back(static_cast<int>(x_.size()));
    }
    const int total = static_cast<int>(x_.size());
    weights_ = Eigen::VectorXd::Zero(total);
    for (int i = 0; i < n_; ++i) {
      for (int g = offset_[i]; g + 1 < offset_[i + 1]; ++g) {
        const double h = x_[g + 1] - x_[g];
        weights_(g) += 0.5 * h;
        weights_(g + 1) += 0.5 * h;
      }
    }
    // Coupling at each node: coefficient M_ik(x) and the interpolation stencil of y_k.
    coupling_.assign(static_cast<std::size_t>(total), {});
    for (int g = 0; g < total; ++g) {
      const int i = comp_[g];
      for (int k = 0; k < n_; ++k) {
        const double coeff = spec_->M[i][k](x_[g]);
        if (coeff == 0.0) continue;
        const auto [lo, w] = locate(k, x_[g]);
        coupling_[g].push_back({lo, w, coeff});
      }
    }
  }

  struct Stencil {
    int lo;
    double w;
    double coeff;
  };

  std::pair<int, double> locate(int k, double x) const {
    const int begin = offset_[k];
    const int end = offset_[k + 1];
    auto it = std::upper_bound(x_.begin() + begin, x_.begin() + end, x);
    int hi = static_cast<int>(it - x_.begin());
    hi = std::clamp(hi, begin + 1, end - 1);
    const int lo = hi - 1;
    const double span = x_[hi] - x_[lo];
    const double w = span > 0 ? std::clamp((x - x_[lo]) / span, 0.0, 1.0) : 0.0;
    return {lo, w};
  }

  double source(const Eigen::VectorXd& y, int g) const {
    double acc = 0.0;
    for (const Stencil& s : coupling_[g]) acc += s.coeff * ((1 - s.w) * y(s.lo) + s.w * y(s.lo + 1));
    return acc;
  }

  // Node g's value moves to target(g); -1 when it leaves the domain.
  int target(int g) const {
    const int i = comp_[g];
    if (i < m_) return g == offset_[i] ? -1 : g - 1;
    return g + 1 == offset_[i + 1] ? -1 : g + 1;
  }

  void apply_boundary(Eigen::VectorXd& y, const double* control) const {
    for (int i = 0; i < m_; ++i) y(offset_[i + 1] - 1) = control ? control[i] : 0.0;
    for (int j = 0; j < spec_->p; ++j) {
      double v = 0.0;
      for (int c = 0; c < m_; ++c) v += spec_->Q(j, c) * y(offset_[c]);
      y(offset_[m_ + j]) = v;
    }
  }

  Eigen::VectorXd step_state(const Eigen::VectorXd& y, const double* control) const {
    const int total = static_cast<int>(y.size());
    Eigen::VectorXd f_old(total);
    for (int g = 0; g < total; ++g) f_old(g) = source(y, g);
    Eigen::VectorXd pred = Eigen::VectorXd::Zero(total);
    for (int g = 0; g < total; ++g)
      if (const int t = target(g); t >= 0) pred(t) = y(g) + dt_ * f_old(g);
    apply_boundary(pred, control);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(total);
    for (int g = 0; g < total; ++g)
      if (const int t = target(g); t >= 0) out(t) = y(g) + 0.5 * dt_ * (f_old(g) + source(pred, t));
    apply_boundary(out, control);
    return out;
  }

  void build_responses() {
    const int total = node_count();
    response_.assign(static_cast<std::size_t>(m_), Eigen::MatrixXd::Zero(total, std::max(1, max_steps_)));
    std::vector<double> impulse(static_cast<std::size_t>(m_), 0.0);
    for (int c = 0; c < m_; ++c) {
      impulse.assign(static_cast<std::size_t>(m_), 0.0);
      impulse[c] = 1.0;
      Eigen::VectorXd y = step_state(Eigen::VectorXd::Zero(total), impulse.data());
      for (int d = 0; d < max_steps_; ++d) {
        response_[c].col(d) = y;
        if (d + 1 < max_steps_) y = step_state(y, nullptr);
      }
    }
  }

  Eigen::VectorXd sample(const InitialData& y0) const {
    Eigen::VectorXd out(node_count());
    for (int g = 0; g < node_count(); ++g) {
      const auto& row = y0[comp_[g]];
      const double pos = x_[g] * (static_cast<double>(row.size()) - 1);
      const std::size_t lo = std::min(static_cast<std::size_t>(pos), row.size() - 2);
      const double w = pos - static_cast<double>(lo);
      out(g) = (1 - w) * row[lo] + w * row[lo + 1];
    }
    return out;
  }

  double weighted_norm(const Eigen::VectorXd& y) const { return std::sqrt(y.dot(weights_.cwiseProduct(y))); }

  ValidatedSpec<double> spec_;
  int n_;
  int m_;
  double dt_ = 0.0;
  int max_steps_ = 0;
  std::vector<double> x_;
  std::vector<int> comp_;
  std::vector<int> offset_;
  Eigen::VectorXd weights_;
  std::vector<std::vector<Stencil>> coupling_;
  std::vector<Eigen::MatrixXd> response_;  // column d: state d + 1 steps after a unit control
};

/// One-shot residual for a single horizon.
template <typename S>
double null_reach_residual(const ValidatedSpec<S>& spec, double T, const DiscreteGrid& grid, const InitialData& y0) {
  const NullReachOracle oracle(spec, grid, T);
  return oracle.residual(T, y0);
}

struct OracleOptions {
  DiscreteGrid grid;
  double lo = -1.0;  // scan range; defaults to (0.25, 1.1) x Russell time
  double hi = -1.0;
  double delta = 0.1;
  unsigned seed = 20240611;
  double threshold_floor = 1e-9;
};

struct TransitionBracket {
  double lo = 0.0;
  double hi = 0.0;
  double threshold = 0.0;
  ResidualScan scan;  // every horizon evaluated, in evaluation order
};

/// Bisection on the crossing of the calibrated threshold: 10x the residual at
/// 1.1 x the Russell time. Throws NoTransition when both ends agree.
template <typename S>
TransitionBracket bracket_transition(const ValidatedSpec<S>& spec, const OracleOptions& options) {
  const TimeVector<S> T = transport_times(spec);
  const double russell = T[spec->m].to_double() + T[spec->m - 1].to_double();
  const double calib = 1.1 * russell;
  const double lo_t = options.lo > 0 ? options.lo : 0.25 * russell;
  const double hi_t = options.hi > 0 ? options.hi : calib;
  const NullReachOracle oracle(spec, options.grid, std::max(calib, hi_t));
  const InitialData y0 = random_initial_data(spec->n(), options.grid.Nx, options.seed);

  TransitionBracket out;
  const double dt = oracle.step();
  auto eval = [&](int steps) {
    const double r = oracle.residual_steps(steps, y0);
    out.scan.horizons.push_back(steps * dt);
    out.scan.residuals.push_back(r);
    return r;
  };
  out.threshold = std::max(10.0 * eval(static_cast<int>(std::lround(calib / dt))), options.threshold_floor);
  int lo = static_cast<int>(std::floor(lo_t / dt));
  int hi = static_cast<int>(std::ceil(hi_t / dt));
  hi = std::min(hi, oracle.max_steps());
  if (!(eval(lo) > out.threshold) || eval(hi) > out.threshold) {
    throw Error(ErrorKind::NoTransition, "residual stays on one side of " + std::to_string(out.threshold) +
                                             " over [" + std::to_string(lo * dt) + ", " + std::to_string(hi * dt) +
                                             "]");
  }
  const int width = std::max(1, static_cast<int>(std::floor(options.delta / dt)));
  while (hi - lo > width) {
    const int mid = lo + (hi - lo) / 2;
    if (eval(mid) > out.threshold) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.lo = lo * dt;
  out.hi = hi * dt;
  return out;
}

/// Residuals on a ladder of horizons sharing one discretization.
template <typename S>
ResidualScan residual_scan(const ValidatedSpec<S>& spec, const std::vector<double>& horizons, const DiscreteGrid& grid,
                           const InitialData& y0) {
  double top = 0.0;
  for (double h : horizons) top = std::max(top, h);
  const NullReachOracle oracle(spec, grid, top);
  ResidualScan out;
  for (double h : horizons) {
    out.horizons.push_back(h);
    out.residuals.push_back(oracle.residual(h, y0));
  }
  return out;
}

inline void write_csv(std::ostream& os, const ResidualScan& scan) {
  os << "T,residual\n";
  os.precision(12);
  for (std::size_t i = 0; i < scan.horizons.size(); ++i) os << scan.horizons[i] << ',' << scan.residuals[i] << '\n';
}

}  // namespace mintime
