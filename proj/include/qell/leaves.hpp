// Instability-index detection and symplectic-leaf stratification of
// Ext^1(xi0, xi0^*) via Serre-duality annihilator subspaces.
//
// A witness at degree j is a line bundle L = (cParam, j) together with a
// nonzero a in Hom(L, xi0) whose induced annihilator condition v^T M(c) = 0
// holds, where M(c)_{rs} = <a_r s_s, x> pairs the products of the Hom(L, xi0)
// basis with the H^0(L (x) xi0) basis against the class x.
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qell/bracket.hpp"

namespace qell {

struct SubBundleProbe {
  int j = 0;    // candidate degree of L, 0 <= j <= k
  cx cParam;    // multiplier scalar of L: L has multiplier cParam * z^j
};

// (k-j) x (k+j) matrix M_{rs} = <a_r s_s, x>; requires j < k.
Eigen::MatrixXcd pairing_matrix(const ExtensionClass& x, const SubBundleProbe& probe,
                                const NumericContext& ctx);

struct Witness {
  cx cParam;                // within the fundamental annulus |q| < |c| <= 1
  std::vector<cx> kernel;   // left-kernel vector: kernel^T M = 0
  double sigma_ratio = 0;   // sigma_min / (grid-global sigma_max)
};

struct SearchParams {
  int grid_radial = 64;
  int grid_angular = 64;
  double sv_threshold = 1e-7;  // witness accepted below this ratio
  int candidates = 8;          // local minima refined per search
  int max_newton = 60;
};

// Grid the fundamental annulus in log-polar coordinates, then refine the best
// local minima by complex Gauss-Newton on the vector of maximal minors of
// M(c) (each minor is holomorphic in c). Returns a witness when the refined
// sigma_min/sigma_max drops below threshold; values stuck within a decade of
// the threshold raise non_convergence carrying the best candidate.
std::optional<Witness> detect_at_degree(const ExtensionClass& x, int j,
                                        const NumericContext& ctx,
                                        const SearchParams& params = {});

struct StratumReport {
  int index_j = 0;
  std::optional<Witness> witness;
  int leaf_dim = 0;  // 2(k - index_j - 1) for index_j < k; 0 at the split class
  int pi_rank = 0;   // numerical rank of Pi(x), recorded for cross-reference
};

// Largest j admitting a witness, scanning j = k down to 0. j = k bypasses the
// grid: it holds iff x = 0 (witness cParam = eta^k mod q^Z). A generic
// nonzero class has index 0; the j = 0 witness is filled in best-effort.
StratumReport instability_index(const ExtensionClass& x, const NumericContext& ctx,
                                const SearchParams& params = {});

// A class planted to be maximal-unstable for (L, a): a random element of the
// annihilator of a0(cParam) . H^0(L (x) xi0). Used by round-trip experiments.
ExtensionClass plant_unstable(int k, cx eta, int j, cx cParam, uint64_t seed,
                              const NumericContext& ctx);

// Canonical representative of c modulo q^Z inside |q| < |c| <= 1.
cx annulus_normalize(cx c, const NumericContext& ctx);

}  // namespace qell
