// Matrix multipliers for rank-2 extensions 0 -> xi0^* -> V -> xi0 -> 0 and
// their endomorphism bundles; coboundary and extension-class maps.
//
// Convention (fixed throughout, never mixed): multipliers act on the right on
// row vectors, phi_a f(z) = f(qz) . a(z), so component i of the image is
// sum_j f_j(qz) a_{ji}(z). Duals are inverse transposes.
#pragma once

#include <vector>

#include "qell/theta.hpp"

namespace qell {

// n x n matrix of Laurent series, row-major.
struct Multiplier {
  int n = 0;
  std::vector<LaurentSeries> entries;

  const LaurentSeries& at(int i, int j) const { return entries[i * n + j]; }
  LaurentSeries& at(int i, int j) { return entries[i * n + j]; }
  static Multiplier identity(int n);
  static Multiplier zero(int n);
};

Multiplier multiplier_mul(const Multiplier& a, const Multiplier& b);

// Invert a unit series a z^e (1 + h), ||h|| < 1, by a Neumann sum; throws
// singular_multiplier when no dominant monomial exists or the residual check
// f * inv(f) = 1 fails.
LaurentSeries series_inverse(const LaurentSeries& f, const NumericContext& ctx);

// Inverse transpose, computed by Gauss-Jordan elimination in truncated series
// arithmetic with unit pivots.
Multiplier dual_multiplier(const Multiplier& m, const NumericContext& ctx);

// The 2k-vector x representing [x] in Ext^1(xi0, xi0^*), xi0 = L((eta z)^k).
// Canonical representative is the polynomial x(z) = sum_{j=0}^{2k-1} x_j z^j;
// all index arithmetic treats x_j = 0 outside that range. The stored
// multiplier corner is (eta z)^k x(z) (the normalization of the rank-two
// display) while coords are those of the plain x.
struct ExtensionClass {
  int k = 1;
  cx eta{0.8, 0.0};
  std::vector<cx> coords;  // size 2k

  double max_abs() const;
};

ExtensionClass make_extension(int k, cx eta, std::vector<cx> coords);
LaurentSeries x_polynomial(const ExtensionClass& x);

// (( (eta z)^{-k}, 0 ), ( (eta z)^k x(z), (eta z)^k ))
Multiplier extension_multiplier(const ExtensionClass& x, const NumericContext& ctx);

// The 4x4 multiplier of End(V) = V^* (x) V on the row basis
// (e1*e1, e1*e2, e2*e1, e2*e2), written entrywise from the rank-two display.
Multiplier end_multiplier(const ExtensionClass& x, const NumericContext& ctx);

// Coboundary map of the long exact sequence: b in H^0(xi0) -> [b x] in
// H^1(xi0^*). Rejects b whose realization violates its functional equation.
H1Class coboundary(const ExtensionClass& x, const ThetaVector& b, const NumericContext& ctx);

// Recover the class from a 2x2 lower-triangular multiplier of the extension
// shape: corner s(z) = (eta z)^k x(z), class = h1_reduce of s(z)/(eta z)^k in
// LineBundle(eta^{-2k}, -2k). eta itself is recovered from the diagonal up to
// a k-th root of unity (principal root); coordinates do not depend on the choice.
ExtensionClass extension_class_of(const Multiplier& m, const NumericContext& ctx);

// Dimension of the space of flag-preserving endomorphism sections (b = 0):
// unknowns a, d, c with a_q - a = 0, d_q - d = 0 and
// c_q/(eta z)^{2k} - c = (a - d) x. Solved as one finite linear system on
// truncated coefficients (rows equilibrated); rank decisions use a
// singular-value cutoff at tol x sigma_max. Generic x admits only the scalars
// (dim 1); the split class x = 0 also admits the diagonal torus (dim 2).
int parabolic_aut_dim(const ExtensionClass& x, const NumericContext& ctx);

}  // namespace qell
