#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mintime/errors.hpp"
#include "mintime/matrix.hpp"
#include "mintime/system.hpp"
#include "mintime/transport.hpp"

namespace mintime {

/// Zero-based position of a 1 in the canonical form.
struct Pivot {
  int row = 0;
  int col = 0;
  friend bool operator==(const Pivot&, const Pivot&) = default;
};

/// L Q U = Q0 with L lower unitriangular, U invertible upper triangular and Q0
/// holding at most one 1 per row and column.
template <typename S>
struct CanonicalForm {
  Matrix<S> Q0;
  Matrix<S> L;
  Matrix<S> U;
  std::vector<Pivot> pivots;  // increasing rows
  int rho = 0;
  int rho0 = 0;  // largest i with the first i rows of Q of rank i
};

template <typename S>
CanonicalForm<S> canonical_form(const Matrix<S>& Q, double eps = 0.0) {
  const int p = Q.rows();
  const int m = Q.cols();
  const double tol = eps * std::max(1.0, Q.max_abs());
  auto zero = [tol](const S& v) { return scalar_traits<S>::is_zero(v, tol); };

  CanonicalForm<S> cf;
  cf.L = Matrix<S>::identity(p);
  cf.U = Matrix<S>::identity(m);
  Matrix<S> W = Q;  // running L Q U

  for (int r = 0; r < p; ++r) {
    for (const Pivot& pv : cf.pivots) {
      const S f = W(r, pv.col);
      if (zero(f)) continue;
      for (int j = 0; j < m; ++j) W(r, j) -= f * W(pv.row, j);
      for (int j = 0; j < p; ++j) cf.L(r, j) -= f * cf.L(pv.row, j);
    }
    int c = -1;
    for (int j = 0; j < m; ++j) {
      if (zero(W(r, j))) {
        W(r, j) = S(0);
        continue;
      }
      c = j;
      break;
    }
    if (c < 0) continue;
    const S piv = W(r, c);
    for (int j = c + 1; j < m; ++j) {
      const S f = W(r, j) / piv;
      if (f == S(0)) continue;
      for (int i = 0; i < p; ++i) W(i, j) -= f * W(i, c);
      for (int i = 0; i < m; ++i) cf.U(i, j) -= f * cf.U(i, c);
      W(r, j) = S(0);
    }
    const S inv = S(1) / piv;
    for (int i = 0; i < p; ++i) W(i, c) *= inv;
    for (int i = 0; i < m; ++i) cf.U(i, c) *= inv;
    cf.pivots.push_back({r, c});
  }
  // In floating mode, rounding leaves dust outside the pivots.
  cf.Q0 = Matrix<S>(p, m);
  for (const Pivot& pv : cf.pivots) cf.Q0(pv.row, pv.col) = S(1);
  cf.rho = static_cast<int>(cf.pivots.size());
  cf.rho0 = 0;
  while (cf.rho0 < static_cast<int>(cf.pivots.size()) && cf.pivots[cf.rho0].row == cf.rho0) ++cf.rho0;
  return cf;
}

namespace detail {

// T_i for a zero-based index, with T_n = 0 past the end.
template <typename S>
TimeValue<S> time_at(const TimeVector<S>& T, int i) {
  if (i >= static_cast<int>(T.size())) return {S(0), true};
  return T[i];
}

}  // namespace detail

/// max_k {T_{m+r_k} + T_{c_k}} joined with T_m (and T_{m+1} when requested).
template <typename S>
TimeValue<S> pivot_time(const TimeVector<S>& T, const std::vector<Pivot>& pivots, int m, bool with_first_positive) {
  TimeValue<S> out = T[m - 1];
  if (with_first_positive) out = max_time(out, T[m]);
  for (const Pivot& pv : pivots) out = max_time(out, T[m + pv.row] + T[pv.col]);
  return out;
}

/// Minimal time for a boundary matrix whose first nmin rows are independent.
template <typename S>
TimeValue<S> minimal_time_full_rank(const TimeVector<S>& T, const std::vector<Pivot>& pivots, int m) {
  const int p = static_cast<int>(T.size()) - m;
  const int nmin = std::min(m, p);
  std::vector<Pivot> used;
  for (int k = 0; k < nmin; ++k) {
    auto it = std::find_if(pivots.begin(), pivots.end(), [k](const Pivot& pv) { return pv.row == k; });
    if (it == pivots.end()) {
      throw Error(ErrorKind::IncompletePivots, "row " + std::to_string(k + 1) + " has no pivot");
    }
    used.push_back(*it);
  }
  return pivot_time(T, used, m, false);
}

template <typename S>
struct Bounds {
  TimeValue<S> russell;
  TimeValue<S> max_m;
  TimeValue<S> m_zero;  // lower bound for every M
  std::optional<TimeValue<S>> t_cn;
  std::optional<TimeValue<S>> rank_p;
};

/// Leading minors Q(i), i <= min(p, m - 1), all invertible.
template <typename S>
bool in_cn_class(const Matrix<S>& Q, double eps = 0.0) {
  const int top = std::min(Q.rows(), Q.cols() - 1);
  for (int i = 1; i <= top; ++i)
    if (rank(Q.block(0, 0, i, i), eps, std::max(1.0, Q.max_abs())) < i) return false;
  return true;
}

template <typename S>
Bounds<S> bounds_suite(const ValidatedSpec<S>& spec, const TimeVector<S>& T, const CanonicalForm<S>& cf) {
  const int m = spec->m;
  const int p = spec->p;
  Bounds<S> b;
  b.russell = T[m] + T[m - 1];
  b.m_zero = pivot_time(T, cf.pivots, m, true);

  bool first_row_zero = true;
  for (int c = 0; c < m; ++c)
    if (!scalar_traits<S>::is_zero(spec->Q(0, c), spec->eps)) first_row_zero = false;
  if (first_row_zero) {
    b.max_m = b.russell;
  } else {
    TimeValue<S> v = detail::time_at(T, m + cf.rho0) + T[m - 1];
    for (int k = 0; k < cf.rho0; ++k) v = max_time(v, T[m + k] + T[cf.pivots[k].col]);
    b.max_m = v;
  }

  if (in_cn_class(spec->Q, spec->eps)) {
    TimeValue<S> v = T[m - 1];
    for (int k = 0; k < std::min(m, p); ++k) v = max_time(v, T[m + k] + T[k]);
    b.t_cn = v;
  }
  if (cf.rho == p) b.rank_p = pivot_time(T, cf.pivots, m, false);
  return b;
}

/// Upper bound when the reduction finalized rows 1..k0 only.
template <typename S>
TimeValue<S> early_stop_bound(const TimeVector<S>& T, const std::vector<Pivot>& partial_pivots, int k0, int m) {
  TimeValue<S> v = detail::time_at(T, m + k0) + T[m - 1];
  for (const Pivot& pv : partial_pivots)
    if (pv.row < k0) v = max_time(v, T[m + pv.row] + T[pv.col]);
  return v;
}

template <typename S>
bool boundary_is_zero(const ValidatedSpec<S>& spec) {
  return spec->Q.is_zero(spec->eps);
}

/// p = 1 and Q = 0: the first nonzero Taylor order r0 of M_{m+1,-} at 0 and its
/// first nonzero column c give max{T_{m+1} + T_c, T_m}; a zero row gives max{T_m, T_{m+1}}.
template <typename S>
TimeValue<S> closed_form_p1(const ValidatedSpec<S>& spec, const TimeVector<S>& T) {
  const int m = spec->m;
  if (spec->p != 1) throw Error(ErrorKind::NotApplicable, "closed form needs p = 1");
  if (!boundary_is_zero(spec)) throw Error(ErrorKind::NotApplicable, "closed form needs Q = 0");
  int max_deg = -1;
  for (int c = 0; c < m; ++c) max_deg = std::max(max_deg, spec->M[m][c].degree());
  for (int r0 = 0; r0 <= max_deg; ++r0)
    for (int c = 0; c < m; ++c)
      if (!scalar_traits<S>::is_zero(spec->M[m][c].coeff(r0), spec->eps)) {
        return max_time(T[m] + T[c], T[m - 1]);
      }
  return max_time(T[m - 1], T[m]);
}

/// Q' = (m_ab(0) / (lambda_a(0) - lambda_b(0))) for positive a, negative b.
template <typename S>
Matrix<S> q_prime(const ValidatedSpec<S>& spec) {
  const int m = spec->m;
  Matrix<S> out(spec->p, m);
  for (int a = 0; a < spec->p; ++a)
    for (int b = 0; b < m; ++b)
      out(a, b) = spec->M[m + a][b].coeff(0) / (spec.speed_at_zero(m + a) - spec.speed_at_zero(b));
  return out;
}

/// Q = 0 with the first nmin rows of Q' independent.
template <typename S>
TimeValue<S> q_zero_closed_form(const ValidatedSpec<S>& spec, const TimeVector<S>& T) {
  if (!boundary_is_zero(spec)) throw Error(ErrorKind::NotApplicable, "closed form needs Q = 0");
  const Matrix<S> qp = q_prime(spec);
  const int nmin = spec->nmin();
  if (rank(qp.top_rows(nmin), spec->eps, std::max(1.0, qp.max_abs())) < nmin) {
    throw Error(ErrorKind::NotApplicable, "the first rows of Q' are dependent");
  }
  return minimal_time_full_rank(T, canonical_form(qp, spec->eps).pivots, spec->m);
}

}  // namespace mintime
