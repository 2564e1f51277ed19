#include "qell/leaves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qell {

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
  cx symmetric_cx() { return cx{2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0}; }
};

double sigma_min(const Eigen::MatrixXcd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues().tail(1)(0);
}

double sigma_max(const Eigen::MatrixXcd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

// vector of all (k-j)x(k-j) minors of the (k-j)x(k+j) matrix; holomorphic in c
Eigen::VectorXcd minor_vector(const Eigen::MatrixXcd& M) {
  int r = static_cast<int>(M.rows()), cdim = static_cast<int>(M.cols());
  std::vector<int> comb(r);
  for (int i = 0; i < r; ++i) comb[i] = i;
  std::vector<cx> vals;
  while (true) {
    Eigen::MatrixXcd sub(r, r);
    for (int i = 0; i < r; ++i) sub.col(i) = M.col(comb[i]);
    vals.push_back(sub.determinant());
    int pos = r - 1;
    while (pos >= 0 && comb[pos] == cdim - r + pos) --pos;
    if (pos < 0) break;
    ++comb[pos];
    for (int i = pos + 1; i < r; ++i) comb[i] = comb[i - 1] + 1;
  }
  Eigen::VectorXcd out(static_cast<int>(vals.size()));
  for (int i = 0; i < out.size(); ++i) out(i) = vals[i];
  return out;
}

}  // namespace

cx annulus_normalize(cx c, const NumericContext& ctx) {
  double aq = std::abs(ctx.q);
  while (std::abs(c) > 1.0) c *= ctx.q;
  while (std::abs(c) <= aq) c /= ctx.q;
  return c;
}

Eigen::MatrixXcd pairing_matrix(const ExtensionClass& x, const SubBundleProbe& probe,
                                const NumericContext& ctx) {
  int k = x.k, j = probe.j;
  if (j < 0 || j >= k)
    throw error(errc::domain_error, "pairing_matrix: need 0 <= j < k");
  if (probe.cParam == cx{0.0, 0.0})
    throw error(errc::domain_error, "pairing_matrix: cParam must be nonzero");
  cx ek = ipow(x.eta, k);
  LineBundle hom{ek / probe.cParam, k - j};       // Hom(L, xi0)
  LineBundle twist{probe.cParam * ek, k + j};     // H^0(L (x) xi0)
  int rows = k - j, cols = k + j;
  if (rows < 1 || cols < 1)
    throw error(errc::domain_error, "pairing_matrix: empty section basis");
  std::vector<LaurentSeries> a_basis, s_basis;
  for (int r = 0; r < rows; ++r) a_basis.push_back(theta_series(hom, r, ctx));
  for (int s = 0; s < cols; ++s) s_basis.push_back(theta_series(twist, s, ctx));
  Eigen::MatrixXcd M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int s = 0; s < cols; ++s) {
      LaurentSeries prod = series_mul(a_basis[r], s_basis[s]);
      cx acc{0.0, 0.0};
      for (int mm = 0; mm < 2 * k; ++mm) acc += prod.coeff(-mm) * x.coords[mm];
      M(r, s) = acc;
    }
  return M;
}

std::optional<Witness> detect_at_degree(const ExtensionClass& x, int j,
                                        const NumericContext& ctx,
                                        const SearchParams& params) {
  ctx.validate();
  int k = x.k;
  if (j < 0 || j >= k)
    throw error(errc::domain_error, "detect_at_degree: need 0 <= j < k");
  double aq = std::abs(ctx.q);
  double logq = std::log(aq);

  // log-polar grid over the fundamental annulus
  double smax_global = 0.0;
  std::vector<std::pair<double, cx>> grid;
  grid.reserve(static_cast<size_t>(params.grid_radial) * params.grid_angular);
  for (int ir = 0; ir < params.grid_radial; ++ir) {
    double r = std::exp(logq * (1.0 - (ir + 0.5) / params.grid_radial));
    for (int it = 0; it < params.grid_angular; ++it) {
      double th = 2.0 * M_PI * it / params.grid_angular;
      cx c = r * cx{std::cos(th), std::sin(th)};
      Eigen::MatrixXcd M = pairing_matrix(x, SubBundleProbe{j, c}, ctx);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
      smax_global = std::max(smax_global, svd.singularValues()(0));
      grid.emplace_back(svd.singularValues().tail(1)(0), c);
    }
  }
  if (smax_global <= 0.0) {
    // x = 0: every probe annihilates; report the trivial witness at cParam = eta^j side
    return std::nullopt;
  }
  std::sort(grid.begin(), grid.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<cx> cands;
  for (const auto& [s0, c0] : grid) {
    (void)s0;
    bool fresh = true;
    for (cx cc : cands)
      if (std::abs(c0 - cc) < 0.1 * std::max(std::abs(c0), std::abs(cc))) fresh = false;
    if (fresh) cands.push_back(c0);
    if (static_cast<int>(cands.size()) >= params.candidates) break;
  }

  double best_ratio = 1e300;
  cx best_c{0.0, 0.0};
  for (cx c0 : cands) {
    cx c = c0;
    for (int it = 0; it < params.max_newton; ++it) {
      Eigen::VectorXcd r = minor_vector(pairing_matrix(x, SubBundleProbe{j, c}, ctx));
      double h = 1e-6 * std::abs(c);
      Eigen::VectorXcd rp = minor_vector(pairing_matrix(x, SubBundleProbe{j, c + h}, ctx));
      Eigen::VectorXcd rm = minor_vector(pairing_matrix(x, SubBundleProbe{j, c - h}, ctx));
      Eigen::VectorXcd J = (rp - rm) / (2.0 * h);
      double denom = J.squaredNorm();
      if (denom == 0.0) break;
      cx step = J.dot(r) / denom;  // Eigen dot conjugates the first argument
      if (std::abs(step) > 0.25 * std::abs(c)) step *= 0.25 * std::abs(c) / std::abs(step);
      c = annulus_normalize(c - step, ctx);
      if (std::abs(step) < 1e-15 * std::abs(c)) break;
    }
    Eigen::MatrixXcd M = pairing_matrix(x, SubBundleProbe{j, c}, ctx);
    double ratio = sigma_min(M) / smax_global;
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_c = c;
    }
  }

  if (best_ratio < params.sv_threshold) {
    Eigen::MatrixXcd M = pairing_matrix(x, SubBundleProbe{j, best_c}, ctx);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullU);
    Eigen::VectorXcd u = svd.matrixU().col(svd.matrixU().cols() - 1);
    Witness w;
    w.cParam = annulus_normalize(best_c, ctx);
    w.sigma_ratio = best_ratio;
    w.kernel.resize(u.size());
    for (int i = 0; i < u.size(); ++i) w.kernel[i] = std::conj(u(i));  // kernel^T M = 0
    return w;
  }
  if (best_ratio < 10.0 * params.sv_threshold) {
    std::ostringstream os;
    os << "detect_at_degree: ambiguous minimum sigma ratio " << best_ratio << " at c = ("
       << best_c.real() << ", " << best_c.imag() << ") for j = " << j;
    throw error(errc::non_convergence, os.str());
  }
  return std::nullopt;
}

StratumReport instability_index(const ExtensionClass& x, const NumericContext& ctx,
                                const SearchParams& params) {
  ctx.validate();
  int k = x.k;
  StratumReport report;
  report.pi_rank = pi_rank(bracket_matrix(x, ctx), ctx.tol);

  if (x.max_abs() <= ctx.tol) {
    // split class: index k, witnessed by L = xi0 itself (c = eta^k mod q^Z)
    report.index_j = k;
    report.leaf_dim = 0;
    Witness w;
    w.cParam = annulus_normalize(ipow(x.eta, k), ctx);
    w.sigma_ratio = 0.0;
    report.witness = w;
    return report;
  }
  for (int j = k - 1; j >= 1; --j) {
    auto w = detect_at_degree(x, j, ctx, params);
    if (w) {
      report.index_j = j;
      report.leaf_dim = 2 * (k - j - 1);
      report.witness = w;
      return report;
    }
  }
  report.index_j = 0;
  report.leaf_dim = 2 * (k - 1);
  try {
    report.witness = detect_at_degree(x, 0, ctx, params);
  } catch (const error&) {
    report.witness = std::nullopt;  // witness at j = 0 is best-effort metadata
  }
  return report;
}

ExtensionClass plant_unstable(int k, cx eta, int j, cx cParam, uint64_t seed,
                              const NumericContext& ctx) {
  if (j < 0 || j >= k) throw error(errc::domain_error, "plant_unstable: need 0 <= j < k");
  cx ek = ipow(eta, k);
  LineBundle hom{ek / cParam, k - j};
  LineBundle twist{cParam * ek, k + j};
  LaurentSeries a0 = theta_series(hom, 0, ctx);
  Eigen::MatrixXcd A(k + j, 2 * k);
  for (int i = 0; i < k + j; ++i) {
    LaurentSeries prod = series_mul(a0, theta_series(twist, i, ctx));
    for (int mm = 0; mm < 2 * k; ++mm) A(i, mm) = prod.coeff(-mm);
  }
  // random element of the annihilator: x with A x = 0
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  int null_dim = 2 * k - (k + j);
  SplitMix rng(seed);
  Eigen::VectorXcd xv = Eigen::VectorXcd::Zero(2 * k);
  for (int i = 0; i < null_dim; ++i)
    xv += rng.symmetric_cx() * svd.matrixV().col(2 * k - 1 - i);
  xv /= xv.norm();
  std::vector<cx> coords(2 * k);
  for (int i = 0; i < 2 * k; ++i) coords[i] = xv(i);
  return make_extension(k, eta, std::move(coords));
}

}  // namespace qell
