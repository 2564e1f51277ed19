#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qell/leaves.hpp"

using namespace qell;

namespace {

struct SplitMix {
  uint64_t s;
  explicit SplitMix(uint64_t seed) : s(seed) {}
  uint64_t next() {
    s += 0x9E3779B97f4A7C15ULL;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  cx rand_cx() { return cx{2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0}; }
};

ExtensionClass random_class(SplitMix& rng, int k, cx eta) {
  std::vector<cx> coords(2 * k);
  for (auto& v : coords) v = rng.rand_cx();
  return make_extension(k, eta, std::move(coords));
}

bool same_mod_q(cx a, cx b, cx q, double tol) {
  for (int m = -2; m <= 2; ++m)
    if (std::abs(a - b * ipow(q, m)) < tol * std::max(1.0, std::abs(b))) return true;
  return false;
}

}  // namespace

TEST_CASE("pairing matrix basics") {
  NumericContext ctx;
  cx eta{0.8, 0.0};
  int k = 2;
  ExtensionClass zero = make_extension(k, eta, std::vector<cx>(2 * k, cx{0.0, 0.0}));
  Eigen::MatrixXcd M0 = pairing_matrix(zero, SubBundleProbe{1, cx{0.5, 0.2}}, ctx);
  CHECK(M0.norm() == 0.0);
  CHECK(M0.rows() == 1);
  CHECK(M0.cols() == 3);

  SplitMix rng(73);
  ExtensionClass x = random_class(rng, k, eta);
  Eigen::MatrixXcd M = pairing_matrix(x, SubBundleProbe{0, cx{0.5, 0.2}}, ctx);
  CHECK(M.rows() == 2);
  CHECK(M.cols() == 2);
  CHECK_THROWS_AS(pairing_matrix(x, SubBundleProbe{2, cx{0.5, 0.0}}, ctx), error);

  // generic x, j = k-1: the single row stays away from zero
  Eigen::MatrixXcd row = pairing_matrix(x, SubBundleProbe{1, cx{0.5, 0.2}}, ctx);
  CHECK(row.norm() > 1e-4);
}

TEST_CASE("construct-then-detect: planted annihilator is in the left kernel") {
  NumericContext ctx;
  cx eta{0.8, 0.0};
  int k = 2, j = 1;
  cx cL{0.45 * std::cos(1.2), 0.45 * std::sin(1.2)};
  ExtensionClass x = plant_unstable(k, eta, j, cL, 99, ctx);
  Eigen::MatrixXcd M = pairing_matrix(x, SubBundleProbe{j, cL}, ctx);
  // k - j = 1: the kernel vector is scalar, so the whole row must vanish
  CHECK(M.norm() < 1e-12);
}

TEST_CASE("planted witnesses are recovered with matching cParam") {
  NumericContext ctx;
  cx eta{0.8, 0.0};
  int k = 2;
  SplitMix rng(79);
  for (int trial = 0; trial < 3; ++trial) {
    double r = 0.12 + 0.8 * rng.uniform();
    double th = 2.0 * M_PI * rng.uniform();
    cx cL = r * cx{std::cos(th), std::sin(th)};
    ExtensionClass x = plant_unstable(k, eta, 1, cL, 1000 + trial, ctx);
    auto w = detect_at_degree(x, 1, ctx);
    REQUIRE(w.has_value());
    CHECK(w->sigma_ratio < 1e-7);
    CHECK(same_mod_q(w->cParam, cL, ctx.q, 1e-6));
  }
}

TEST_CASE("generic classes have no witness at j >= 1") {
  NumericContext ctx;
  cx eta{0.8, 0.0};
  SplitMix rng(83);
  for (int trial = 0; trial < 3; ++trial) {
    ExtensionClass x = random_class(rng, 2, eta);
    CHECK_FALSE(detect_at_degree(x, 1, ctx).has_value());
  }
}

TEST_CASE("instability index") {
  NumericContext ctx;
  cx eta{0.8, 0.0};
  int k = 2;
  SplitMix rng(89);

  ExtensionClass zero = make_extension(k, eta, std::vector<cx>(2 * k, cx{0.0, 0.0}));
  StratumReport rep0 = instability_index(zero, ctx);
  CHECK(rep0.index_j == k);
  CHECK(rep0.leaf_dim == 0);
  CHECK(rep0.pi_rank == 0);
  REQUIRE(rep0.witness.has_value());
  CHECK(same_mod_q(rep0.witness->cParam, ipow(eta, k), ctx.q, 1e-9));

  cx cL{-0.3, 0.35};
  ExtensionClass planted = plant_unstable(k, eta, 1, cL, 7, ctx);
  StratumReport rep1 = instability_index(planted, ctx);
  CHECK(rep1.index_j == 1);
  CHECK(rep1.leaf_dim == 0);
  REQUIRE(rep1.witness.has_value());
  CHECK(same_mod_q(rep1.witness->cParam, cL, ctx.q, 1e-6));

  ExtensionClass x = random_class(rng, k, eta);
  StratumReport repg = instability_index(x, ctx);
  CHECK(repg.index_j == 0);
  CHECK(repg.leaf_dim == 2);
  CHECK(repg.pi_rank == 4);  // empirical offset of 2 over leaf_dim, from the cone directions

  // scale invariance of the classification
  ExtensionClass sx = x;
  for (auto& v : sx.coords) v *= cx{17.3, 0.0};
  StratumReport reps = instability_index(sx, ctx);
  CHECK(reps.index_j == repg.index_j);
  CHECK(reps.leaf_dim == repg.leaf_dim);

  ExtensionClass sp = planted;
  for (auto& v : sp.coords) v *= cx{0.031, 0.4};
  CHECK(instability_index(sp, ctx).index_j == 1);
}

TEST_CASE("annulus normalization") {
  NumericContext ctx;
  cx c{3.7, -1.1};
  cx n = annulus_normalize(c, ctx);
  CHECK(std::abs(n) <= 1.0);
  CHECK(std::abs(n) > std::abs(ctx.q));
  CHECK(same_mod_q(n, c, ctx.q, 1e-12));
}
