#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mintime/errors.hpp"
#include "mintime/jet.hpp"
#include "mintime/matrix.hpp"
#include "mintime/system.hpp"

namespace mintime {

/// Jets at 0 of the diagonal gauge D(x) and of the transformed coupling
/// M0 = (D M + Lambda D') D^{-1}, whose diagonal vanishes identically.
template <typename S>
struct MZeroJets {
  std::vector<Jet<S>> gauge;                 // D_k(x) = exp(-int_0^x m_kk / lambda_k)
  std::vector<std::vector<Jet<S>>> entries;  // n x n
  int order = 0;
};

template <typename S>
MZeroJets<S> diagonal_removal(const ValidatedSpec<S>& spec, int order) {
  const int n = spec->n();
  MZeroJets<S> out;
  out.order = order;
  for (int k = 0; k < n; ++k) {
    const Jet<S> rate = jet_div(spec->M[k][k].jet(order), spec.speed(k).jet(order));
    out.gauge.push_back(jet_exp(-jet_integrate(rate).truncate(order)));
  }
  out.entries.assign(n, std::vector<Jet<S>>(n, Jet<S>::zero(order)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;  // m_aa + lambda_a D_a'/D_a cancels exactly
      out.entries[a][b] = jet_div(jet_mul(out.gauge[a], spec->M[a][b].jet(order)), out.gauge[b]);
    }
  return out;
}

/// The (N+1) x (N+1) matrix of the level-N jet system: a bidiagonal band
/// (lambda_a, lambda_b) over either a binomial row (distinct indices) or e_1
/// (same index).
template <typename S>
Matrix<S> j_matrix(int N, const S& lam_a, const S& lam_b, bool same) {
  if (!same && lam_a == lam_b) throw Error(ErrorKind::DegenerateSpeeds, "J matrix needs distinct speeds");
  const S right = same ? lam_a : lam_b;
  Matrix<S> J(N + 1, N + 1);
  for (int i = 0; i < N; ++i) {
    J(i, i) = lam_a;
    J(i, i + 1) = right;
  }
  if (same) {
    J(N, 0) = S(1);
  } else {
    for (int j = 0; j <= N; ++j) J(N, j) = binomial<S>(N, j);
  }
  return J;
}

/// Closed-form inverse of j_matrix: explicit first row, then
/// row_l = e_{l-1} / lambda_b - (lambda_a / lambda_b) row_{l-1}.
/// J is badly conditioned for close speeds, so the floating backend evaluates the
/// same formula on the exact rational values of its inputs and rounds once.
template <typename S>
Matrix<S> j_matrix_inverse(int N, const S& lam_a, const S& lam_b_in, bool same) {
  if (!same && lam_a == lam_b_in) throw Error(ErrorKind::DegenerateSpeeds, "J matrix needs distinct speeds");
  if constexpr (!scalar_traits<S>::exact) {
    return j_matrix_inverse(N, Rational(lam_a), Rational(lam_b_in), same).template cast<S>();
  }
  const S lam_b = same ? lam_a : lam_b_in;
  const S ratio = lam_a / lam_b;
  Matrix<S> inv(N + 1, N + 1);
  if (same) {
    inv(0, N) = S(1);
  } else {
    S base = S(1) - ratio;
    S last(1);
    for (int i = 0; i < N; ++i) last /= base;
    inv(0, N) = last;
    for (int i = 1; i <= N; ++i) {
      S sum(0);
      S power(1);
      for (int j = 0; j <= N - i; ++j) {
        sum += binomial<S>(N, i + j) * power;
        power *= -ratio;
      }
      inv(0, i - 1) = -last * sum / lam_b;
    }
  }
  for (int l = 1; l <= N; ++l) {
    for (int c = 0; c <= N; ++c) inv(l, c) = -ratio * inv(l - 1, c);
    inv(l, l - 1) += S(1) / lam_b;
  }
  return inv;
}

/// Binomial diagonals and selector matrices assembling the right-hand side of the
/// level-N system. Row index i of the N rows corresponds to the PDE differentiated
/// N-1-i times in x and i times in xi.
namespace selectors {

/// diag(C(i, sigma)) for i = sigma..N-1.
template <typename S>
Matrix<S> E(int N, int sigma) {
  Matrix<S> out(N - sigma, N - sigma);
  for (int i = sigma; i < N; ++i) out(i - sigma, i - sigma) = binomial<S>(i, sigma);
  return out;
}

/// diag(C(N - i, sigma)) for i = 1..N-sigma.
template <typename S>
Matrix<S> E_check(int N, int sigma) {
  Matrix<S> out(N - sigma, N - sigma);
  for (int i = 1; i <= N - sigma; ++i) out(i - 1, i - 1) = binomial<S>(N - i, sigma);
  return out;
}

/// N x (N - sigma): E_sigma below sigma zero rows (R_0 = E_0).
template <typename S>
Matrix<S> R(int N, int sigma) {
  const Matrix<S> e = E<S>(N, sigma);
  Matrix<S> out(N, N - sigma);
  for (int i = 0; i < N - sigma; ++i) out(sigma + i, i) = e(i, i);
  return out;
}

/// N x (N - sigma + 1): E_check in the top-left corner.
template <typename S>
Matrix<S> S_check(int N, int sigma) {
  const Matrix<S> e = E_check<S>(N, sigma);
  Matrix<S> out(N, N - sigma + 1);
  for (int i = 0; i < N - sigma; ++i) out(i, i) = e(i, i);
  return out;
}

/// N x (N - sigma + 1): E_sigma in the bottom-right corner.
template <typename S>
Matrix<S> S_shift(int N, int sigma) {
  const Matrix<S> e = E<S>(N, sigma);
  Matrix<S> out(N, N - sigma + 1);
  for (int i = 0; i < N - sigma; ++i) out(sigma + i, 1 + i) = e(i, i);
  return out;
}

}  // namespace selectors

/// Boundary data of the kernel equations: f_ab = m0_ab / (lambda_a - lambda_b)
/// off the diagonal and user-chosen k_aa(x, 0) jets on it.
template <typename S>
struct FData {
  std::vector<std::vector<Jet<S>>> f;
};

template <typename S>
FData<S> boundary_data(const ValidatedSpec<S>& spec, const MZeroJets<S>& m0, const std::vector<Jet<S>>& fdiag) {
  const int n = spec->n();
  const int order = m0.order;
  FData<S> out;
  out.f.assign(n, std::vector<Jet<S>>(n, Jet<S>::zero(order)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) {
        if (a < static_cast<int>(fdiag.size())) {
          Jet<S> d = fdiag[a];
          if (d.order() < order) {
            Jet<S> padded = Jet<S>::zero(order);
            for (int l = 0; l <= d.order(); ++l) padded[l] = d[l];
            d = padded;
          }
          out.f[a][a] = d.truncate(order);
        }
        continue;
      }
      const Jet<S> gap = (spec.speed(a) - spec.speed(b)).jet(order);
      out.f[a][b] = jet_div(m0.entries[a][b], gap);
    }
  return out;
}

/// Origin jets of one kernel row: levels[N] is the (N+1) x n matrix whose row l
/// holds d^N k_{alpha,.} / dx^{N-l} dxi^l at (0, 0).
template <typename S>
struct KernelRowJets {
  int alpha = 0;
  std::vector<Matrix<S>> levels;

  int max_order() const { return static_cast<int>(levels.size()) - 1; }
};

template <typename S>
struct KernelOriginJets {
  std::vector<KernelRowJets<S>> rows;

  const KernelRowJets<S>& row(int alpha) const {
    for (const auto& r : rows)
      if (r.alpha == alpha) return r;
    throw Error(ErrorKind::NotApplicable, "kernel row " + std::to_string(alpha + 1) + " was not computed");
  }
};

/// Everything the level-N recursion reads at x = 0.
template <typename S>
struct KernelCoefficients {
  std::vector<Matrix<S>> A;              // A^{(sigma)}(0), A = Lambda' + M0
  std::vector<std::vector<S>> lambda;    // lambda^{(sigma)}(0) per component
  FData<S> f;
};

template <typename S>
KernelCoefficients<S> kernel_coefficients(const ValidatedSpec<S>& spec, const MZeroJets<S>& m0,
                                          const std::vector<Jet<S>>& fdiag) {
  const int n = spec->n();
  const int order = m0.order;
  KernelCoefficients<S> out;
  out.f = boundary_data(spec, m0, fdiag);
  out.lambda.assign(n, std::vector<S>(static_cast<std::size_t>(order) + 1, S(0)));
  for (int i = 0; i < n; ++i)
    for (int s = 0; s <= order; ++s) out.lambda[i][s] = spec.speed(i).coeff(s) * factorial<S>(s);
  for (int s = 0; s <= order; ++s) {
    Matrix<S> a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        S coeff = r == c ? spec.speed(r).derivative().coeff(s) : m0.entries[r][c][s];
        a(r, c) = coeff * factorial<S>(s);
      }
    out.A.push_back(std::move(a));
  }
  return out;
}

/// Right-hand side of the level-N system for row alpha, given levels 0..N-1.
template <typename S>
Matrix<S> kernel_rhs(const KernelCoefficients<S>& coef, int alpha, int N, const std::vector<Matrix<S>>& levels) {
  const int n = static_cast<int>(coef.lambda.size());
  Matrix<S> phi_bar(N, n);
  for (int sigma = 0; sigma <= N - 1; ++sigma) {
    phi_bar = phi_bar - selectors::R<S>(N, sigma) * levels[N - 1 - sigma] * coef.A[sigma];
  }
  for (int sigma = 1; sigma <= N - 1; ++sigma) {
    phi_bar = phi_bar - coef.lambda[alpha][sigma] * (selectors::S_check<S>(N, sigma) * levels[N - sigma]);
    Matrix<S> lam_diag(n, n);
    for (int b = 0; b < n; ++b) lam_diag(b, b) = coef.lambda[b][sigma];
    phi_bar = phi_bar - selectors::S_shift<S>(N, sigma) * levels[N - sigma] * lam_diag;
  }
  Matrix<S> phi(N + 1, n);
  for (int i = 0; i < N; ++i)
    for (int b = 0; b < n; ++b) phi(i, b) = phi_bar(i, b);
  for (int b = 0; b < n; ++b) phi(N, b) = coef.f.f[alpha][b][N] * factorial<S>(N);
  return phi;
}

template <typename S>
KernelRowJets<S> kernel_row_jets(const ValidatedSpec<S>& spec, const KernelCoefficients<S>& coef, int alpha,
                                 int max_order) {
  const int n = spec->n();
  KernelRowJets<S> out;
  out.alpha = alpha;
  Matrix<S> level0(1, n);
  for (int b = 0; b < n; ++b) level0(0, b) = coef.f.f[alpha][b][0];
  out.levels.push_back(level0);
  const S lam_a = spec.speed_at_zero(alpha);
  for (int N = 1; N <= max_order; ++N) {
    const Matrix<S> phi = kernel_rhs(coef, alpha, N, out.levels);
    Matrix<S> level(N + 1, n);
    for (int b = 0; b < n; ++b) {
      const Matrix<S> inv = j_matrix_inverse(N, lam_a, spec.speed_at_zero(b), b == alpha);
      level.set_col(b, inv * phi.col(b));
    }
    out.levels.push_back(std::move(level));
  }
  return out;
}

/// Origin jets of the kernel rows listed in `alphas` (default: the positive rows
/// m..n-1, the only ones the boundary traces G_{+-} depend on).
template <typename S>
KernelOriginJets<S> kernel_origin_jets(const ValidatedSpec<S>& spec, const MZeroJets<S>& m0,
                                       const std::vector<Jet<S>>& fdiag, int max_order,
                                       std::vector<int> alphas = {}) {
  if (max_order > spec->regularity() + 1) {
    throw Error(ErrorKind::OrderExceeded, "requested kernel order " + std::to_string(max_order) +
                                              " exceeds r + 1 = " + std::to_string(spec->regularity() + 1));
  }
  if (max_order > m0.order) throw Error(ErrorKind::OrderExceeded, "M0 jets are too short");
  if (alphas.empty())
    for (int a = spec->m; a < spec->n(); ++a) alphas.push_back(a);
  const KernelCoefficients<S> coef = kernel_coefficients(spec, m0, fdiag);
  KernelOriginJets<S> out;
  for (int a : alphas) out.rows.push_back(kernel_row_jets(spec, coef, a, max_order));
  return out;
}

/// Same recursion with Lambda and M0 constant and zero diagonal boundary data:
/// levels[N] = J^{-1} (-E_0 levels[N-1] M0 ; 0).
template <typename S>
KernelRowJets<S> kernel_row_jets_constant(const ValidatedSpec<S>& spec, const MZeroJets<S>& m0, int alpha,
                                          int max_order) {
  const int n = spec->n();
  for (int i = 0; i < n; ++i)
    if (!spec.speed(i).is_constant()) throw Error(ErrorKind::NotApplicable, "speeds are not constant");
  Matrix<S> m0_const(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int l = 1; l <= m0.entries[a][b].order(); ++l)
        if (m0.entries[a][b][l] != S(0)) throw Error(ErrorKind::NotApplicable, "M0 is not constant");
      m0_const(a, b) = m0.entries[a][b][0];
    }
  KernelRowJets<S> out;
  out.alpha = alpha;
  Matrix<S> level0(1, n);
  const S lam_a = spec.speed_at_zero(alpha);
  for (int b = 0; b < n; ++b)
    if (b != alpha) level0(0, b) = m0_const(alpha, b) / (lam_a - spec.speed_at_zero(b));
  out.levels.push_back(level0);
  for (int N = 1; N <= max_order; ++N) {
    const Matrix<S> top = S(-1) * (selectors::E<S>(N, 0) * out.levels[N - 1] * m0_const);
    Matrix<S> level(N + 1, n);
    for (int b = 0; b < n; ++b) {
      std::vector<S> rhs = top.col(b);
      rhs.push_back(S(0));
      level.set_col(b, j_matrix_inverse(N, lam_a, spec.speed_at_zero(b), b == alpha) * rhs);
    }
    out.levels.push_back(std::move(level));
  }
  return out;
}

/// Jets at 0 of the rows G_j of G_{+-}: coefficient N of entry (j, c) is
/// (d^N K_{m+j} / dx^N)(0, 0) B e_c / N!, with B = -Lambda(0) (Id_m ; Q).
template <typename S>
struct GRowJets {
  std::vector<std::vector<Jet<S>>> rows;  // p x m
  Matrix<S> B;
};

template <typename S>
Matrix<S> trace_matrix_B(const ValidatedSpec<S>& spec) {
  const int m = spec->m;
  const int n = spec->n();
  Matrix<S> B(n, m);
  for (int i = 0; i < m; ++i) B(i, i) = -spec.speed_at_zero(i);
  for (int j = 0; j < spec->p; ++j)
    for (int c = 0; c < m; ++c) B(m + j, c) = -spec.speed_at_zero(m + j) * spec->Q(j, c);
  return B;
}

template <typename S>
GRowJets<S> g_row_jets(const ValidatedSpec<S>& spec, const KernelOriginJets<S>& kjets) {
  const int m = spec->m;
  GRowJets<S> out;
  out.B = trace_matrix_B(spec);
  for (int j = 0; j < spec->p; ++j) {
    const KernelRowJets<S>& krow = kjets.row(m + j);
    const int order = krow.max_order();
    std::vector<Jet<S>> row(m, Jet<S>::zero(order));
    for (int N = 0; N <= order; ++N) {
      const std::vector<S> dx = row_times(krow.levels[N].row(0), out.B);
      const S scale = S(1) / factorial<S>(N);
      for (int c = 0; c < m; ++c) row[c][N] = dx[c] * scale;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace mintime
