// H^0 and H^1 of rank-one q-difference modules on E_q (line bundles), the
// theta-function bases, dual functionals and the Serre-duality pairing.
//
// A LineBundle(c, d) is the rank-one module with phi.e = c z^d e. For d > 0
// its sections solve c z^d f(qz) = f(z); the basis used everywhere is
//
//   theta_n(z) = sum_l q^{ln} q^{d l(l-1)/2} c^l z^{dl+n},   n = 0..d-1,
//
// which stays a solution for any integer n, with quasi-periodicity
// theta_{n+d} = q^{-n} c^{-1} theta_n. Negative indices (theta_{-n}) are
// realized literally by the same formula; the canonical basis index is
// (-n mod d) and the two differ by the scalar q^{-n} c.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qell/laurent.hpp"

namespace qell {

struct LineBundle {
  cx c{1.0, 0.0};  // multiplier scalar, nonzero
  int d = 0;       // degree
};

// Validating constructor: rejects |c| outside the conditioning annulus
// (|q|^{|d|+1}, |q|^{-|d|-1}); for d = 0 the annulus is widened to
// (|q|^{W+1}, |q|^{-W-1}) so that every q^{-m} detectable within the window
// is admissible.
LineBundle line_bundle(cx c, int d, const NumericContext& ctx);

LineBundle dual_bundle(const LineBundle& lb);
bool mutually_dual(const LineBundle& a, const LineBundle& b, double tol);

// Gaussian summation range for degree-d realizations, derived from ctx.window.
int theta_steps(int d, int n, const NumericContext& ctx);

// The basis solution for any integer index n (d > 0 required).
LaurentSeries theta_series(const LineBundle& lb, int n, const NumericContext& ctx);
// Restricted to the canonical range 0 <= n < d.
LaurentSeries theta_basis(const LineBundle& lb, int n, const NumericContext& ctx);

// max_e |(c z^d f_q - f)_e| / max |f|, over the window overlap.
double functional_residual(const LineBundle& lb, const LaurentSeries& f,
                           const NumericContext& ctx);

// d>0: the d theta solutions; d=0: {z^m} iff c = q^{-m} within the window
// (near-misses yield {} and set *warning); d<0: {}.
std::vector<LaurentSeries> h0_basis(const LineBundle& lb, const NumericContext& ctx,
                                    std::string* warning = nullptr);

// Cohomology class in coker(phi - 1) for d < 0, coordinates in the canonical
// basis {[1], ..., [z^{|d|-1}]}.
struct H1Class {
  LineBundle bundle;
  std::vector<cx> coords;
};

// Reduce a series to canonical coordinates via
// [z^{n + l|d|}] = c^l q^{ln} q^{|d| l(l+1)/2} [z^n].
H1Class h1_reduce(const LineBundle& lb, const LaurentSeries& f, const NumericContext& ctx);

// Element of H^0 in the canonical theta basis (d > 0).
struct ThetaVector {
  LineBundle bundle;
  std::vector<cx> coords;
};

LaurentSeries realize(const ThetaVector& tv, const NumericContext& ctx);

// Serre pairing H^0(L) x H^1(L^*) -> C, the constant term of the series
// product. Exact in the basis coefficients; representative independent.
cx serre_pair(const ThetaVector& tv, const H1Class& cls, const NumericContext& ctx);

// Pairing of the literal theta series of index n (any integer) with a class.
cx serre_pair_index(const LineBundle& lb, int n, const H1Class& cls,
                    const NumericContext& ctx);

// Dual functional theta_n applied to a series:
//   theta_n(f) = sum_l q^{nl} q^{d l(l+1)/2} c^{-l} f_{dl+n}.
cx theta_functional(const LineBundle& lb, int n, const LaurentSeries& f,
                    const NumericContext& ctx);

}  // namespace qell
