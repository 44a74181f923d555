#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mintime/canonical.hpp"
#include "mintime/errors.hpp"
#include "mintime/reduction.hpp"
#include "mintime/system.hpp"
#include "mintime/transport.hpp"

namespace mintime {

enum class TimeStatus { exact, bounded };

template <typename S>
struct TimeReport {
  TimeVector<S> T;
  TimeStatus status = TimeStatus::bounded;
  TimeValue<S> lower;
  TimeValue<S> upper;
  std::vector<Pivot> pivots;        // pivots of the final (or partial) boundary matrix
  CanonicalForm<S> source_form;     // canonical form of the input Q
  Bounds<S> bounds;
  std::optional<TimeValue<S>> early_stop;
  ReductionResult<S> reduction;
  std::vector<std::string> diagnostics;

  bool exact() const { return status == TimeStatus::exact; }
  const TimeValue<S>& tinf() const { return lower; }
};

struct AnalyzeOptions {
  int max_order = -1;
};

namespace detail {

template <typename S>
void check_report(const ValidatedSpec<S>& spec, const TimeReport<S>& rep) {
  const int m = spec->m;
  const TimeValue<S> floor = max_time(rep.T[m - 1], rep.T[m]);
  auto fail = [](const std::string& what) { throw std::logic_error("report sanity check failed: " + what); };
  if (rep.upper < rep.lower) fail("lower bound exceeds upper bound");
  if (rep.lower.to_double() < floor.to_double() * (1 - 1e-12)) fail("T_inf below max(T_m, T_{m+1})");
  if (rep.exact()) {
    const double tol = 1e-12 * rep.upper.to_double();
    if (rep.lower.to_double() < rep.bounds.m_zero.to_double() - tol) fail("exact time below the M = 0 bound");
    if (rep.lower.to_double() > rep.bounds.max_m.to_double() + tol) fail("exact time above the max_M bound");
  }
}

}  // namespace detail

/// Transport times, reduction and bounds; T_inf exactly when the reduction
/// finalizes all nmin rows, an interval otherwise.
template <typename S>
TimeReport<S> analyze(const ValidatedSpec<S>& spec, AnalyzeOptions options = {}) {
  const int m = spec->m;
  TimeReport<S> rep;
  rep.T = transport_times(spec);
  rep.source_form = canonical_form(spec->Q, spec->eps);
  rep.bounds = bounds_suite(spec, rep.T, rep.source_form);
  rep.reduction = run_reduction(spec, ReductionOptions{options.max_order});

  const ReductionResult<S>& red = rep.reduction;
  if (red.complete) {
    const CanonicalForm<S> cf = canonical_form(red.Q.top_rows(spec->nmin()), spec->eps);
    rep.pivots = cf.pivots;
    rep.lower = rep.upper = minimal_time_full_rank(rep.T, cf.pivots, m);
    rep.status = TimeStatus::exact;
  } else {
    const int k0 = red.completed_rows;
    const CanonicalForm<S> cf = canonical_form(red.Q.top_rows(k0), spec->eps);
    rep.pivots = cf.pivots;
    rep.early_stop = early_stop_bound(rep.T, cf.pivots, k0, m);
    TimeValue<S> upper = min_time(rep.bounds.russell, rep.bounds.max_m);
    upper = min_time(upper, *rep.early_stop);
    if (rep.bounds.t_cn) upper = min_time(upper, *rep.bounds.t_cn);
    rep.lower = rep.bounds.m_zero;
    rep.upper = upper;
    rep.status = TimeStatus::bounded;
    if (red.decoupled_component) {
      rep.diagnostics.push_back("decoupled component: row " + std::to_string(m + k0 + 1) +
                                " of M vanishes on the negative block");
      if (spec->p == 1 && boundary_is_zero(spec)) {
        // Analytic data with M_{m+1,-} = 0: the positive component is a pure source.
        rep.lower = rep.upper = closed_form_p1(spec, rep.T);
        rep.status = TimeStatus::exact;
      }
    }
  }
  detail::check_report(spec, rep);
  return rep;
}

}  // namespace mintime
