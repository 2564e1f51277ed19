// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here and nowhere else.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "qell/json_io.hpp"
#include "qell/leaves.hpp"
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

ExtensionClass random_class(SplitMix& rng, int k, cx eta, std::vector<int> zeroed = {}) {
  std::vector<cx> coords(2 * k);
  for (auto& v : coords) v = rng.rand_cx();
  for (int i : zeroed) coords[i] = cx{0.0, 0.0};
  return make_extension(k, eta, std::move(coords));
}

LaurentSeries random_series(SplitMix& rng, int lo, int hi) {
  std::map<int, cx> m;
  for (int e = lo; e <= hi; ++e) m[e] = rng.rand_cx();
  return LaurentSeries::from_coeffs(std::move(m), lo, hi);
}

struct Outcome {
  bool pass;
  std::string detail;
};

// 1. duality identity, absolute 1e-9
Outcome criterion1() {
  double worst = 0.0;
  for (cx q : {cx{0.1, 0.0}, cx{0.3, 0.0}})
    for (cx eta : {cx{0.8, 0.0}, cx{0.6, 0.3}})
      for (int k = 1; k <= 4; ++k) {
        NumericContext ctx{q, 1e-9, std::max(4 * k, 24)};
        LineBundle lb = line_bundle(ipow(eta, k), k, ctx);
        LineBundle dual = dual_bundle(lb);
        for (int n = 0; n < k; ++n)
          for (int m = 0; m < k; ++m) {
            std::vector<cx> em(k, cx{0.0, 0.0});
            em[m] = cx{1.0, 0.0};
            cx expect = (m == n) ? cx{1.0, 0.0} : cx{0.0, 0.0};
            cx v = serre_pair_index(lb, -n, H1Class{dual, em}, ctx);
            cx f = theta_functional(lb, n, LaurentSeries::monomial(cx{1.0, 0.0}, m), ctx);
            worst = std::max({worst, std::abs(v - expect), std::abs(f - expect)});
          }
      }
  std::ostringstream os;
  os << "max |pairing - delta| = " << worst << " (tolerance 1e-9)";
  return {worst < 1e-9, os.str()};
}

// 2. pairing of every theta basis vector against 100 random coboundaries, 1e-9 relative
Outcome criterion2() {
  SplitMix rng(202);
  NumericContext ctx;
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    cx ek = ipow(cx{0.8, 0.0}, k);
    LineBundle lb = line_bundle(ek, k, ctx);
    LineBundle dual = dual_bundle(lb);
    for (int trial = 0; trial < 100; ++trial) {
      LaurentSeries g = random_series(rng, -6, 6);
      LaurentSeries cob =
          series_sub(series_shift(series_scale(cx{1.0, 0.0} / ek, q_shift(g, ctx)), -k), g);
      H1Class cls = h1_reduce(dual, cob, ctx);
      for (int j = 0; j < k; ++j) {
        cx v = serre_pair_index(lb, j, cls, ctx);
        worst = std::max(worst, std::abs(v) / g.max_abs());
      }
    }
  }
  std::ostringstream os;
  os << "max relative pairing against coboundaries = " << worst << " (tolerance 1e-9)";
  return {worst < 1e-9, os.str()};
}

// 3. skew-symmetry over 200 random x for k in {1,2,3}
Outcome criterion3() {
  SplitMix rng(303);
  NumericContext ctx;
  double worst = 0.0;
  for (int k : {1, 2, 3}) {
    for (int trial = 0; trial < 200; ++trial) {
      ExtensionClass x = random_class(rng, k, cx{0.8, 0.0});
      BracketMatrix bm = bracket_matrix(x, ctx);
      worst = std::max(worst, bm.skew_residual / std::max(1.0, bm.max_abs()));
    }
  }
  std::ostringstream os;
  os << "max skew residual = " << worst << " (tolerance 1e-9)";
  return {worst < 1e-9, os.str()};
}

// 4. series path vs closed form on 100 admissible x, k in {1,2}, 1e-8 relative
Outcome criterion4() {
  SplitMix rng(404);
  NumericContext ctx;
  double worst = 0.0;
  for (int k : {1, 2}) {
    cx eta{0.8, 0.0};
    LineBundle lb{ipow(eta, 2 * k), 2 * k};
    for (int trial = 0; trial < 100; ++trial) {
      int m = static_cast<int>(rng.next() % (2 * k));
      int n = static_cast<int>(rng.next() % (2 * k));
      if (m == n) n = (n + 1) % (2 * k);
      ExtensionClass x = random_class(rng, k, eta, {m, n});
      H1Class img = bivector_apply_series(x, m, ctx);
      cx series = serre_pair_index(lb, -n, img, ctx);
      cx closed = bracket_entry_closed(x, m, n, ctx);
      worst = std::max(worst, std::abs(series - closed) / std::max({1.0, std::abs(series), std::abs(closed)}));
    }
  }
  std::ostringstream os;
  os << "max relative two-path deviation = " << worst << " (tolerance 1e-8)";
  return {worst < 1e-8, os.str()};
}

// 5. Jacobiator: k=2 on 50 admissible x below 1e-8 of scale; k=1 identically zero
Outcome criterion5() {
  SplitMix rng(505);
  NumericContext ctx;
  cx eta{0.8, 0.0};
  double worst1 = 0.0;
  BracketTensor T1 = bracket_tensor(1, eta, ctx);
  for (int trial = 0; trial < 10; ++trial) {
    ExtensionClass x = random_class(rng, 1, eta);
    double scale = std::max(1.0, jacobiator_scale(x, ctx, &T1));
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n)
        for (int s = 0; s < 2; ++s)
          worst1 = std::max(worst1,
                            std::abs(jacobiator_unrestricted(x, m, n, s, ctx, &T1)) / scale);
  }
  double worst2 = 0.0;
  BracketTensor T2 = bracket_tensor(2, eta, ctx);
  for (int trial = 0; trial < 50; ++trial) {
    int m = static_cast<int>(rng.next() % 4);
    int n = (m + 1 + static_cast<int>(rng.next() % 3)) % 4;
    int s = 0;
    while (s == m || s == n) ++s;
    ExtensionClass x = random_class(rng, 2, eta, {m, n, s});
    double scale = std::max(1.0, jacobiator_scale(x, ctx, &T2));
    worst2 = std::max(worst2, std::abs(jacobiator(x, m, n, s, ctx, &T2)) / scale);
  }
  std::ostringstream os;
  os << "k=1 identically: " << worst1 << "; k=2 admissible: " << worst2 << " (tolerance 1e-8)";
  return {worst1 < 1e-8 && worst2 < 1e-8, os.str()};
}

// 6. loop-group comparison: one constant, magnitude per golden file, 50 seeds, k in {1,2}
Outcome criterion6() {
  NumericContext ctx;
  std::ifstream gf(std::string(QELL_GOLDEN_DIR) + "/loop_ratio.json");
  if (!gf) return {false, "golden file tests/golden/loop_ratio.json missing"};
  json golden = json::parse(gf);
  cx expect = cx_from_json(golden.at("ratio"));
  double magnitude = golden.at("magnitude").get<double>();

  double worst_dev = 0.0, worst_mag = 0.0, worst_golden = 0.0;
  for (int k : {1, 2}) {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
      SplitMix rng(seed * 7919ULL + k);
      ExtensionClass x = random_class(rng, k, cx{0.8, 0.0});
      auto cmp = compare_brackets(x, ctx);
      if (!cmp) return {false, "comparison unexpectedly skipped"};
      worst_dev = std::max(worst_dev, cmp->max_residual);
      worst_mag = std::max(worst_mag, std::abs(std::abs(cmp->ratio) - magnitude));
      worst_golden = std::max(worst_golden, std::abs(cmp->ratio - expect));
    }
  }
  std::ostringstream os;
  os << "entrywise constancy " << worst_dev << ", |ratio|-" << magnitude << " deviation "
     << worst_mag << ", deviation from frozen orientation (" << expect.real() << ","
     << expect.imag() << ") " << worst_golden << " (tolerances 1e-8)";
  return {worst_dev < 1e-8 && worst_mag < 1e-8 && worst_golden < 1e-8, os.str()};
}

// 7. leaf detection round trips at k = 2
Outcome criterion7() {
  NumericContext ctx;
  cx eta{0.8, 0.0};
  int k = 2;
  std::ostringstream os;

  ExtensionClass zero = make_extension(k, eta, std::vector<cx>(2 * k, cx{0.0, 0.0}));
  StratumReport rep0 = instability_index(zero, ctx);
  bool ok0 = rep0.index_j == 2;
  os << "split: index " << rep0.index_j << "; ";

  bool okp = true;
  SplitMix rng(707);
  for (int trial = 0; trial < 10; ++trial) {
    double r = 0.12 + 0.8 * rng.uniform();
    double th = 2.0 * M_PI * rng.uniform();
    cx cL = r * cx{std::cos(th), std::sin(th)};
    ExtensionClass planted = plant_unstable(k, eta, 1, cL, 7000 + trial, ctx);
    StratumReport rep = instability_index(planted, ctx);
    if (rep.index_j != 1 || rep.leaf_dim != 0) okp = false;
  }
  os << "planted (10): " << (okp ? "all index 1, leaf_dim 0" : "MISMATCH") << "; ";

  int generic_ok = 0, rank_offset_2 = 0;
  for (int trial = 0; trial < 200; ++trial) {
    ExtensionClass x = random_class(rng, k, eta);
    StratumReport rep = instability_index(x, ctx);
    if (rep.index_j == 0 && rep.leaf_dim == 2) ++generic_ok;
    if (rep.pi_rank == rep.leaf_dim + 2) ++rank_offset_2;
  }
  os << "generic: " << generic_ok << "/200 index 0 leaf_dim 2"
     << " (pi_rank = leaf_dim + 2 on " << rank_offset_2 << "/200, recorded)";
  return {ok0 && okp && generic_ok == 200, os.str()};
}

// 8. window-doubling convergence below 1e-10 relative at q = 0.1
Outcome criterion8() {
  NumericContext ctx;        // window 24
  NumericContext wide = ctx;
  wide.window = 48;
  SplitMix rng(808);
  double worst = 0.0;

  // pairings through realized series products
  {
    int k = 3;
    cx ek = ipow(cx{0.8, 0.0}, k);
    LineBundle lb = line_bundle(ek, k, ctx);
    for (int trial = 0; trial < 5; ++trial) {
      LaurentSeries f = random_series(rng, -5, 5);
      std::vector<cx> coords(k);
      for (auto& v : coords) v = rng.rand_cx();
      ThetaVector tv{lb, coords};
      cx a = constant_term(series_mul(realize(tv, ctx), f));
      cx b = constant_term(series_mul(realize(tv, wide), f));
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
  }
  // bracket entries, both routes
  for (int k : {1, 2}) {
    cx eta{0.8, 0.0};
    LineBundle lb{ipow(eta, 2 * k), 2 * k};
    for (int trial = 0; trial < 5; ++trial) {
      int m = static_cast<int>(rng.next() % (2 * k));
      int n = (m + 1) % (2 * k);
      ExtensionClass x = random_class(rng, k, eta, {m, n});
      cx a = bracket_entry_closed(x, m, n, ctx);
      cx b = bracket_entry_closed(x, m, n, wide);
      worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
      cx sa = serre_pair_index(lb, -n, bivector_apply_series(x, m, ctx), ctx);
      cx sb = serre_pair_index(lb, -n, bivector_apply_series(x, m, wide), wide);
      worst = std::max(worst, std::abs(sa - sb) / std::max(1.0, std::abs(sb)));
    }
  }
  // loop comparison ratio
  for (int k : {1, 2}) {
    ExtensionClass x = random_class(rng, k, cx{0.8, 0.0});
    auto a = compare_brackets(x, ctx);
    auto b = compare_brackets(x, wide);
    if (!a || !b) return {false, "comparison unexpectedly skipped"};
    worst = std::max(worst, std::abs(a->ratio - b->ratio) / std::abs(b->ratio));
  }
  std::ostringstream os;
  os << "max relative change under window doubling = " << worst << " (tolerance 1e-10)";
  return {worst < 1e-10, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria = {
      {1, "duality identity", criterion1},
      {2, "Serre well-definedness", criterion2},
      {3, "skew-symmetry", criterion3},
      {4, "two-path equivalence", criterion4},
      {5, "Jacobiator", criterion5},
      {6, "r-matrix comparison", criterion6},
      {7, "leaf detection round-trip", criterion7},
      {8, "window-doubling convergence", criterion8},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
