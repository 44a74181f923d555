#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mintime/errors.hpp"
#include "mintime/jet.hpp"
#include "mintime/kernel.hpp"
#include "mintime/matrix.hpp"
#include "mintime/system.hpp"
#include "mintime/transport.hpp"

namespace mintime {

/// lambda_{m+k} d/dx acting on a row of jets.
template <typename S>
struct DkOperator {
  int k = 0;
  Jet<S> speed;
};

template <typename S>
DkOperator<S> make_dk(const ValidatedSpec<S>& spec, int k, int order) {
  return {k, spec.speed(spec->m + k).jet(order)};
}

template <typename S>
std::vector<Jet<S>> apply_dk(const DkOperator<S>& op, const std::vector<Jet<S>>& row) {
  std::vector<Jet<S>> out;
  out.reserve(row.size());
  for (const auto& entry : row) {
    if (entry.order() < 1) {
      throw Error(ErrorKind::BudgetExhausted, "row " + std::to_string(op.k + 1) + " has no derivative left");
    }
    const Jet<S> d = jet_derive(entry);
    out.push_back(jet_mul(op.speed.truncate(std::min(op.speed.order(), d.order())), d));
  }
  return out;
}

enum class StepOutcome { untouched, independent, exhausted };

constexpr std::string_view to_string(StepOutcome o) {
  switch (o) {
    case StepOutcome::untouched: return "untouched";
    case StepOutcome::independent: return "independent";
    case StepOutcome::exhausted: return "exhausted";
  }
  return "unknown";
}

/// One row of the reduction. For a replaced row, a[l] solves
/// omegas[l] + a[l] Q_{1:k-1} = 0 for l <= s and omegas[s+1] is the new row.
template <typename S>
struct ReductionStep {
  int row = 0;
  int s = -1;
  std::vector<std::vector<S>> a;
  std::vector<std::vector<S>> omegas;
  StepOutcome outcome = StepOutcome::untouched;
  int budget_used = 0;
};

template <typename S>
struct ReductionState {
  int k = 0;                                  // next row to process (zero-based)
  Matrix<S> Q;                                // current boundary rows
  std::vector<std::vector<Jet<S>>> G;         // current G rows, p x m jets; empty when spent
  std::vector<int> budget;                    // remaining jet order per row, -1 when spent
  std::vector<ReductionStep<S>> trace;
  double eps = 0.0;
  double scale = 1.0;
};

template <typename S>
struct ReductionResult {
  Matrix<S> Q;
  std::vector<ReductionStep<S>> trace;
  bool complete = false;
  int completed_rows = 0;  // k0: rows 1..k0 of Q are final and independent
  bool decoupled_component = false;
  std::vector<int> budget;
};

namespace detail {

template <typename S>
int row_order(const std::vector<Jet<S>>& row) {
  if (row.empty()) return -1;
  int k = row.front().order();
  for (const auto& j : row) k = std::min(k, j.order());
  return k;
}

template <typename S>
bool independent_of(const Matrix<S>& prev, const std::vector<S>& row, double eps, double scale) {
  return rank(stack_row(prev, row), eps, scale) == prev.rows() + 1;
}

template <typename S>
std::vector<S> values_at_zero(const std::vector<Jet<S>>& row) {
  std::vector<S> out;
  for (const auto& j : row) out.push_back(j[0]);
  return out;
}

// a * rows for a row vector of scalars and rows of jets.
template <typename S>
std::vector<Jet<S>> combine(const std::vector<S>& a, const std::vector<std::vector<Jet<S>>>& rows, int width,
                            int order) {
  std::vector<Jet<S>> out(width, Jet<S>::zero(order));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == S(0)) continue;
    for (int c = 0; c < width; ++c) out[c] += rows[i][c] * a[i];
  }
  return out;
}

template <typename S>
std::vector<Jet<S>> add_rows(const std::vector<Jet<S>>& x, const std::vector<Jet<S>>& y) {
  std::vector<Jet<S>> out;
  for (std::size_t c = 0; c < x.size(); ++c) out.push_back(x[c] + y[c]);
  return out;
}

}  // namespace detail

template <typename S>
ReductionState<S> initial_state(const ValidatedSpec<S>& spec, const GRowJets<S>& g) {
  ReductionState<S> state;
  state.Q = spec->Q;
  state.G = g.rows;
  for (const auto& row : state.G) state.budget.push_back(detail::row_order(row));
  state.eps = spec->eps;
  double scale = std::max(1.0, spec->Q.max_abs());
  for (const auto& row : g.rows)
    for (const auto& e : row) scale = std::max(scale, std::abs(to_double(e[0])));
  state.scale = scale;
  return state;
}

/// G^zeta_{1:k}: rows i < k of the current G composed with zeta_{k,i}.
template <typename S>
std::vector<std::vector<Jet<S>>> composed_rows(const ValidatedSpec<S>& spec, const ReductionState<S>& state, int k,
                                               int order) {
  std::vector<std::vector<Jet<S>>> out;
  for (int i = 0; i < k; ++i) {
    const int row_ord = state.budget[i];
    if (row_ord < 0) throw Error(ErrorKind::BudgetExhausted, "row " + std::to_string(i + 1) + " is spent");
    const int ord = std::min(order, row_ord);
    const Jet<S> zeta = zeta_jet(spec, k, i, ord);
    std::vector<Jet<S>> row;
    for (const auto& e : state.G[i]) row.push_back(jet_compose(e.truncate(ord), zeta));
    out.push_back(std::move(row));
  }
  return out;
}

/// omega^l for row k, given a^0..a^{l-1}: the value at 0 of
/// D_k^{l-1} G_k + sum_i a^i D_k^{l-1-i} G^zeta_{1:k-1} (gamma^l when k = 0).
template <typename S>
std::vector<S> omega_next(const ValidatedSpec<S>& spec, const ReductionState<S>& state, int k,
                          const std::vector<std::vector<S>>& a, int l) {
  const int m = spec->m;
  if (l == 0) return state.Q.row(k);
  if (state.budget[k] < 0) throw Error(ErrorKind::BudgetExhausted, "row " + std::to_string(k + 1) + " is spent");
  const int order = state.budget[k];
  const auto gz = composed_rows(spec, state, k, order);
  const DkOperator<S> dk = make_dk(spec, k, order);
  std::vector<Jet<S>> bar = state.G[k];
  bar = detail::add_rows(bar, detail::combine(a[0], gz, m, order));
  for (int level = 1; level < l; ++level) {
    bar = detail::add_rows(apply_dk(dk, bar), detail::combine(a[level], gz, m, order));
  }
  return detail::values_at_zero(bar);
}

/// Processes row state.k: keeps it when independent of the rows above, otherwise
/// alternates elimination and D_k differentiation until a new independent row
/// appears or the jet budget runs out.
template <typename S>
ReductionState<S> reduce_row(const ValidatedSpec<S>& spec, ReductionState<S> state) {
  const int k = state.k;
  const int m = spec->m;
  const Matrix<S> prev = state.Q.top_rows(k);
  ReductionStep<S> step;
  step.row = k;
  std::vector<S> omega = state.Q.row(k);
  step.omegas.push_back(omega);
  if (detail::independent_of(prev, omega, state.eps, state.scale)) {
    state.trace.push_back(step);
    ++state.k;
    return state;
  }

  auto exhaust = [&]() {
    step.outcome = StepOutcome::exhausted;
    step.budget_used = step.s + 1;
    state.trace.push_back(step);
    return state;
  };

  if (state.budget[k] < 0) return exhaust();
  const int order = state.budget[k];
  std::vector<std::vector<Jet<S>>> gz;
  try {
    gz = composed_rows(spec, state, k, order);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExhausted) throw;
    return exhaust();
  }
  const DkOperator<S> dk = make_dk(spec, k, order);

  std::vector<Jet<S>> bar;
  for (int l = 0;; ++l) {
    auto a = solve_row_combination(prev, omega, state.eps * state.scale);
    if (!a) throw Error(ErrorKind::NotApplicable, "dependent row has no combination coefficients");
    for (auto& v : *a) v = -v;
    step.a.push_back(*a);
    step.s = l;  // tentatively: omega^0..omega^l vanish against the rows above

    if (l == 0) {
      bar = detail::add_rows(state.G[k], detail::combine(*a, gz, m, order));
    } else {
      if (detail::row_order(bar) < 1) {
        step.s = l - 1;
        step.a.pop_back();
        return exhaust();
      }
      bar = detail::add_rows(apply_dk(dk, bar), detail::combine(*a, gz, m, std::max(0, detail::row_order(bar) - 1)));
    }
    omega = detail::values_at_zero(bar);
    step.omegas.push_back(omega);
    if (detail::independent_of(prev, omega, state.eps, state.scale)) {
      state.Q.set_row(k, omega);
      if (detail::row_order(bar) >= 1) {
        state.G[k] = apply_dk(dk, bar);
        state.budget[k] = detail::row_order(state.G[k]);
      } else {
        state.G[k].clear();
        state.budget[k] = -1;
      }
      step.outcome = StepOutcome::independent;
      step.budget_used = step.s + 1;
      state.trace.push_back(step);
      ++state.k;
      return state;
    }
  }
}

template <typename S>
bool negative_coupling_row_vanishes(const ValidatedSpec<S>& spec, int k) {
  for (int c = 0; c < spec->m; ++c)
    if (!spec->M[spec->m + k][c].is_zero()) return false;
  return true;
}

struct ReductionOptions {
  int max_order = -1;  // cap on the jet order; -1 means r + 1
};

/// Kernel jets, G rows and the row-by-row reduction for k = 1..min(p, m).
template <typename S>
ReductionResult<S> run_reduction(const ValidatedSpec<S>& spec, ReductionOptions options = {},
                                 const std::vector<Jet<S>>& fdiag = {}) {
  int order = spec->regularity() + 1;
  if (options.max_order >= 0) order = std::min(order, options.max_order);
  const MZeroJets<S> m0 = diagonal_removal(spec, order);
  const KernelOriginJets<S> kjets = kernel_origin_jets(spec, m0, fdiag, order);
  const GRowJets<S> g = g_row_jets(spec, kjets);

  ReductionState<S> state = initial_state(spec, g);
  ReductionResult<S> result;
  const int nmin = spec->nmin();
  while (state.k < nmin) {
    state = reduce_row(spec, std::move(state));
    if (state.trace.back().outcome == StepOutcome::exhausted) {
      result.decoupled_component = negative_coupling_row_vanishes(spec, state.k);
      break;
    }
  }
  result.Q = state.Q;
  result.trace = state.trace;
  result.completed_rows = state.k;
  result.complete = state.k == nmin;
  result.budget = state.budget;
  return result;
}

}  // namespace mintime
