// The SL2 Poisson bracket on Ext^1(xi0, xi0^*) computed two independent ways:
// through the bivector composition on series representatives and through the
// closed double sum, plus exact quadratic-coefficient extraction for the
// Jacobiator.
//
// The closed form implemented here is the constant term of
// theta_{-n} (theta_{-m} x - 2a) x, i.e.
//
//   sum_{u != 0} (q^u+1)/(q^u-1) A_m(u) A_n(-u),
//   A_m(u) = sum_l q^{-ml} q^{k l(l-1)} eta^{2kl} x_{m+u-2kl},
//
// which also equals the kernel-contraction of the pairings
// <theta_{-m}, [x z^{-u}]> <theta_{-n}, [x z^{u}]>.
//
// The bracket is extended to all x by this formula; its geometric meaning as
// <B#(d theta_{-m}), d theta_{-n}> requires x_m = x_n = 0 (the admissible
// locus). The series route below enforces that precondition.
#pragma once

#include <vector>

#include "qell/qdiff.hpp"

namespace qell {

// Gaussian truncation bound for the double sums, from ctx.window and decay.
int bracket_steps(int k, const NumericContext& ctx);

// B#(d theta_{-m}) as a class in H^1 of LineBundle(eta^{-2k}, -2k):
//   b' = theta_{-m},  beta = b' x,  a = sum_{l != 0} beta_l/(1-q^l) z^l,
//   result = [ (b' x - 2a) x ].
// Requires x_m ~ 0 (the constant term of b'x must vanish).
H1Class bivector_apply_series(const ExtensionClass& x, int m, const NumericContext& ctx);

// Closed-form entry <B#(d theta_{-m}), d theta_{-n}>, defined for all integer
// m, n and all x.
cx bracket_entry_closed(const ExtensionClass& x, int m, int n, const NumericContext& ctx);

struct BracketMatrix {
  int k = 1;
  cx eta;
  std::vector<cx> x;        // the point, size 2k
  std::vector<cx> entries;  // 2k x 2k, row-major
  double skew_residual = 0;
  int truncation = 0;  // Gaussian bound L used

  cx at(int m, int n) const { return entries[m * 2 * k + n]; }
  double max_abs() const;
};

// Assembles all entries and runs the skew residual check
// ||Pi + Pi^T||_max < tol * max(1, ||Pi||_max); failure is an
// internal_inconsistency error.
BracketMatrix bracket_matrix(const ExtensionClass& x, const NumericContext& ctx);

// Numerical rank of Pi at cutoff tol * sigma_max.
int pi_rank(const BracketMatrix& bm, double tol);

// K[m][n][j][s]: coefficient of x_j x_s in Pi[m][n], symmetrized in (j, s),
// extracted by evaluating the closed form on basis vectors and polarizing.
struct BracketTensor {
  int k = 1;
  cx eta;
  std::vector<cx> data;  // (2k)^4

  cx at(int m, int n, int j, int s) const;
  cx& at(int m, int n, int j, int s);
  // Pi[m][n](x) by contraction.
  cx entry(const std::vector<cx>& x, int m, int n) const;
  // d Pi[m][n] / d x_p (x) -- exact, no finite differences.
  cx entry_derivative(const std::vector<cx>& x, int m, int n, int p) const;
};

BracketTensor bracket_tensor(int k, cx eta, const NumericContext& ctx);

// sum_p [ Pi^{pm} d_p Pi^{ns} + Pi^{pn} d_p Pi^{sm} + Pi^{ps} d_p Pi^{mn} ](x).
// `admissible` variant enforces x_m = x_n = x_s ~ 0 (invalid_covector
// otherwise); the unrestricted variant is a diagnostic -- off the admissible
// locus the quadratic extension of Pi is observed NOT to satisfy Jacobi.
cx jacobiator(const ExtensionClass& x, int m, int n, int s, const NumericContext& ctx,
              const BracketTensor* tensor = nullptr);
cx jacobiator_unrestricted(const ExtensionClass& x, int m, int n, int s,
                           const NumericContext& ctx, const BracketTensor* tensor = nullptr);
// Scale ||Pi||_max * ||dPi||_max used for relative reporting.
double jacobiator_scale(const ExtensionClass& x, const NumericContext& ctx,
                        const BracketTensor* tensor = nullptr);

}  // namespace qell
