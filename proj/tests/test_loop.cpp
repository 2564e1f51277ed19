#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qell/bracket.hpp"
#include "qell/loop.hpp"

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

LoopOrbitPoint random_point(SplitMix& rng, int k, cx eta, int lo, int hi) {
  LoopOrbitPoint pt;
  pt.k = k;
  pt.eta = eta;
  pt.a_minus_k = ipow(eta, -k);
  for (int i = lo; i <= hi; ++i) pt.xcoeffs[i] = rng.rand_cx();
  return pt;
}

}  // namespace

TEST_CASE("kernels: tau odd, tau = phi(z) - phi(1/z), phi_l + phi_{-l} = 1") {
  NumericContext ctx;
  RKernels kr = loop_kernels(ctx);
  CHECK(std::abs(kr.tau.coeff(0)) == 0.0);
  CHECK(std::abs(kr.rphi.coeff(0) - cx{0.5, 0.0}) == 0.0);
  for (int l = 1; l <= ctx.window; ++l) {
    CHECK(std::abs(kr.tau.coeff(l) + kr.tau.coeff(-l)) < 1e-12);
    CHECK(std::abs(kr.tau.coeff(l) - (kr.rphi.coeff(l) - kr.rphi.coeff(-l))) < 1e-12);
    CHECK(std::abs(kr.rphi.coeff(l) + kr.rphi.coeff(-l) - cx{1.0, 0.0}) < 1e-12);
  }
}

TEST_CASE("coefficient bracket {c_m, c_n}") {
  NumericContext ctx;
  SplitMix rng(97);
  int k = 2;
  cx eta{0.8, 0.0};

  LoopOrbitPoint empty;
  empty.k = k;
  empty.eta = eta;
  CHECK(std::abs(coeff_bracket_cc(empty, 0, 1, ctx)) == 0.0);

  // single-support c: the sum needs two distinct offsets
  LoopOrbitPoint single;
  single.k = k;
  single.eta = eta;
  single.xcoeffs[3] = cx{1.4, -0.2};
  for (int m = -2; m <= 6; ++m)
    for (int n = -2; n <= 6; ++n) CHECK(std::abs(coeff_bracket_cc(single, m, n, ctx)) == 0.0);

  LoopOrbitPoint pt = random_point(rng, k, eta, -3, 5);
  for (int trial = 0; trial < 10; ++trial) {
    int m = static_cast<int>(rng.next() % 9) - 2;
    int n = static_cast<int>(rng.next() % 9) - 2;
    cx a = coeff_bracket_cc(pt, m, n, ctx);
    cx b = coeff_bracket_cc(pt, n, m, ctx);
    CHECK(std::abs(a + b) < 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("coefficient bracket {a_m, c_n} on the orbit") {
  NumericContext ctx;
  SplitMix rng(101);
  int k = 2;
  cx eta{0.8, 0.0};
  LoopOrbitPoint pt = random_point(rng, k, eta, 0, 4);

  // a vanishes away from -k: only the (3/2) term at m = -k, only the sum term otherwise
  cx at_k = coeff_bracket_ac(pt, -k, 1, ctx);
  CHECK(std::abs(at_k - cx{1.5, 0.0} * pt.a_minus_k * pt.c(1)) < 1e-14);
  for (int m : {-5, -1, 0, 2}) {
    cx v = coeff_bracket_ac(pt, m, 1, ctx);
    cx expect = cx{-0.5, 0.0} * pt.a_minus_k * pt.c(1 + m + k);
    CHECK(std::abs(v - expect) < 1e-14);
  }

  LoopOrbitPoint zero;
  zero.k = k;
  zero.eta = eta;
  zero.a_minus_k = cx{0.0, 0.0};
  zero.xcoeffs[1] = cx{1.0, 0.0};
  CHECK(std::abs(coeff_bracket_ac(zero, -k, 1, ctx)) == 0.0);
}

TEST_CASE("invariant functionals") {
  NumericContext ctx;
  SplitMix rng(103);
  int k = 2;
  cx eta{0.8, 0.0};

  // support collapse: x supported on {0..2k-1} gives theta_n = c_n
  LoopOrbitPoint pt = random_point(rng, k, eta, 0, 2 * k - 1);
  for (int n = 0; n < 2 * k; ++n)
    CHECK(std::abs(invariant_functional(pt, n, ctx) - pt.c(n)) < 1e-14);
  CHECK_THROWS_AS(invariant_functional(pt, 2 * k, ctx), error);

  // invariance under the lower-unipotent action x += eta^k z^{l+k} - q^l z^{l-k}/eta^k
  LoopOrbitPoint wide = random_point(rng, k, eta, -4, 8);
  for (int l : {-3, -1, 0, 2, 4}) {
    LoopOrbitPoint moved = wide;
    moved.xcoeffs[l + k] += ipow(eta, k);
    moved.xcoeffs[l - k] -= ipow(ctx.q, l) * ipow(eta, -k);
    for (int n = 0; n < 2 * k; ++n) {
      cx a = invariant_functional(wide, n, ctx);
      cx b = invariant_functional(moved, n, ctx);
      CHECK(std::abs(a - b) < 1e-11 * std::max(1.0, std::abs(a)));
    }
  }

  // identification with the dual theta functionals: on the z^k-shifted lift,
  // theta^{loop}_n equals the degree-2k functional at index n - k
  SplitMix rng2(107);
  ExtensionClass x = random_class(rng2, k, eta);
  LoopOrbitPoint lift = orbit_lift(x);
  LineBundle lb{ipow(eta, 2 * k), 2 * k};
  for (int n = k; n < 2 * k; ++n) {
    cx loopv = invariant_functional(lift, n, ctx);
    cx modv = theta_functional(lb, n - k, x_polynomial(x), ctx);
    CHECK(std::abs(loopv - modv) < 1e-12 * std::max(1.0, std::abs(modv)));
  }
}

TEST_CASE("reduced bracket: zero, antisymmetry, shorthand cross-check") {
  NumericContext ctx;
  SplitMix rng(109);
  int k = 1;
  cx eta{0.8, 0.0};

  LoopOrbitPoint empty;
  empty.k = k;
  empty.eta = eta;
  empty.a_minus_k = ipow(eta, -k);
  CHECK(std::abs(reduced_bracket(empty, 0, 1, ctx)) == 0.0);

  LoopOrbitPoint pt = random_point(rng, k, eta, -2, 4);
  for (int trial = 0; trial < 6; ++trial) {
    int m = static_cast<int>(rng.next() % 7) - 2;
    int n = static_cast<int>(rng.next() % 7) - 2;
    cx a = reduced_bracket(pt, m, n, ctx);
    cx b = reduced_bracket(pt, n, m, ctx);
    CHECK(std::abs(a + b) < 1e-9 * std::max(1.0, std::abs(a)));
  }

  // Leibniz expansion through the coefficient brackets:
  // {theta_m, theta_n} = sum_{l,j} w_m(j) w_n(l) {c_{2kj+m}, c_{2kl+n}}
  for (auto [m, n] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{-1, 2}}) {
    cx direct = reduced_bracket(pt, m, n, ctx);
    cx leibniz{0.0, 0.0};
    int L = 6;
    for (int j = -L; j <= L; ++j)
      for (int l = -L; l <= L; ++l) {
        cx wm = ipow(ctx.q, static_cast<long long>(m) * j + static_cast<long long>(k) * j * j) *
                ipow(pt.a_minus_k, 2LL * k * j);
        cx wn = ipow(ctx.q, static_cast<long long>(n) * l + static_cast<long long>(k) * l * l) *
                ipow(pt.a_minus_k, 2LL * k * l);
        leibniz += wm * wn * coeff_bracket_cc(pt, 2 * k * j + m, 2 * k * l + n, ctx);
      }
    CHECK(std::abs(direct - leibniz) < 1e-10 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("compare_brackets: constant ratio of magnitude 2") {
  NumericContext ctx;
  SplitMix rng(113);
  for (int k : {1, 2}) {
    for (cx eta : {cx{0.8, 0.0}, cx{0.6, 0.3}}) {
      ExtensionClass x = random_class(rng, k, eta);
      auto cmp = compare_brackets(x, ctx);
      REQUIRE(cmp.has_value());
      CHECK(cmp->max_residual < 1e-8);
      CHECK(std::abs(std::abs(cmp->ratio) - 2.0) < 1e-8);
      CHECK(std::abs(cmp->ratio - cx{2.0, 0.0}) < 1e-8);
      CHECK(cmp->entries_compared > 0);
    }
  }

  ExtensionClass zero = make_extension(1, cx{0.8, 0.0}, {cx{0.0, 0.0}, cx{0.0, 0.0}});
  CHECK_FALSE(compare_brackets(zero, ctx).has_value());
}

TEST_CASE("compare_brackets: the same constant across samples") {
  NumericContext ctx;
  SplitMix rng(127);
  cx first{0.0, 0.0};
  for (int trial = 0; trial < 10; ++trial) {
    ExtensionClass x = random_class(rng, 2, cx{0.8, 0.0});
    auto cmp = compare_brackets(x, ctx);
    REQUIRE(cmp.has_value());
    if (trial == 0)
      first = cmp->ratio;
    else
      CHECK(std::abs(cmp->ratio - first) < 1e-9);
  }
}
