#include "qell/qdiff.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace qell {

Multiplier Multiplier::identity(int n) {
  Multiplier m;
  m.n = n;
  m.entries.assign(static_cast<size_t>(n) * n, LaurentSeries{});
  for (int i = 0; i < n; ++i) m.at(i, i) = LaurentSeries::constant(cx{1.0, 0.0});
  return m;
}

Multiplier Multiplier::zero(int n) {
  Multiplier m;
  m.n = n;
  m.entries.assign(static_cast<size_t>(n) * n, LaurentSeries{});
  return m;
}

Multiplier multiplier_mul(const Multiplier& a, const Multiplier& b) {
  if (a.n != b.n) throw error(errc::domain_error, "multiplier_mul: size mismatch");
  Multiplier out = Multiplier::zero(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      LaurentSeries acc;
      for (int l = 0; l < a.n; ++l)
        acc = series_add(acc, series_mul(a.at(i, l), b.at(l, j)));
      out.at(i, j) = acc;
    }
  return out;
}

LaurentSeries series_inverse(const LaurentSeries& f, const NumericContext& ctx) {
  double scale = f.max_abs();
  if (scale <= ctx.tol)
    throw error(errc::singular_multiplier, "series_inverse: numerically zero series");
  // dominant monomial a z^e
  int e = 0;
  cx a{0.0, 0.0};
  for (const auto& [exp, v] : f.coeffs())
    if (std::abs(v) > std::abs(a)) {
      a = v;
      e = exp;
    }
  // h = f/(a z^e) - 1 must be a strict contraction on the window
  LaurentSeries h = series_shift(series_scale(cx{1.0, 0.0} / a, f), -e);
  h = series_sub(h, LaurentSeries::constant(cx{1.0, 0.0}));
  if (h.max_abs() > 0.75)
    throw error(errc::singular_multiplier, "series_inverse: no dominant monomial");
  int width = std::max(f.hi() - e, e - f.lo()) + ctx.window;
  LaurentSeries acc = LaurentSeries::constant(cx{1.0, 0.0});
  LaurentSeries term = LaurentSeries::constant(cx{1.0, 0.0});
  for (int it = 0; it < 200; ++it) {
    term = series_scale(cx{-1.0, 0.0}, series_mul(term, h)).restricted(-width, width);
    if (term.max_abs() <= ctx.tol * 1e-4) break;
    acc = series_add(acc, term);
  }
  LaurentSeries inv = series_shift(series_scale(cx{1.0, 0.0} / a, acc), -e);
  LaurentSeries res = series_sub(series_mul(f, inv), LaurentSeries::constant(cx{1.0, 0.0}));
  int rw = std::max(1, ctx.window / 2);
  if (res.restricted(-rw, rw).max_abs() > 1e3 * ctx.tol)
    throw error(errc::singular_multiplier, "series_inverse: residual check failed");
  return inv;
}

Multiplier dual_multiplier(const Multiplier& m, const NumericContext& ctx) {
  int n = m.n;
  int maxexp = 1;
  for (const auto& s : m.entries) maxexp = std::max({maxexp, std::abs(s.lo()), std::abs(s.hi())});
  int cap = 2 * maxexp * std::max(n, 2) + ctx.window;

  // Gauss-Jordan with series pivots
  std::vector<LaurentSeries> work = m.entries;
  Multiplier inv = Multiplier::identity(n);
  auto W = [&](int i, int j) -> LaurentSeries& { return work[i * n + j]; };
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    LaurentSeries pinv;
    for (int row = col; row < n; ++row) {
      try {
        pinv = series_inverse(W(row, col), ctx);
        pivot = row;
        break;
      } catch (const error&) {
      }
    }
    if (pivot < 0)
      throw error(errc::singular_multiplier, "dual_multiplier: multiplier not invertible");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(W(pivot, j), W(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    for (int j = 0; j < n; ++j) {
      W(col, j) = series_mul(pinv, W(col, j)).restricted(-cap, cap);
      inv.at(col, j) = series_mul(pinv, inv.at(col, j)).restricted(-cap, cap);
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      LaurentSeries factor = W(row, col);
      if (factor.max_abs() == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        W(row, j) =
            series_sub(W(row, j), series_mul(factor, W(col, j))).restricted(-cap, cap);
        inv.at(row, j) =
            series_sub(inv.at(row, j), series_mul(factor, inv.at(col, j))).restricted(-cap, cap);
      }
    }
  }
  Multiplier out = Multiplier::zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = inv.at(j, i);
  return out;
}

double ExtensionClass::max_abs() const {
  double m = 0.0;
  for (cx v : coords) m = std::max(m, std::abs(v));
  return m;
}

ExtensionClass make_extension(int k, cx eta, std::vector<cx> coords) {
  if (k < 1) throw error(errc::domain_error, "make_extension: k must be positive");
  if (eta == cx{0.0, 0.0}) throw error(errc::domain_error, "make_extension: eta must be nonzero");
  if (static_cast<int>(coords.size()) != 2 * k)
    throw error(errc::domain_error, "make_extension: coords must have length 2k");
  return ExtensionClass{k, eta, std::move(coords)};
}

LaurentSeries x_polynomial(const ExtensionClass& x) {
  std::map<int, cx> m;
  for (int j = 0; j < 2 * x.k; ++j)
    if (x.coords[j] != cx{0.0, 0.0}) m[j] = x.coords[j];
  return LaurentSeries::from_coeffs(std::move(m), 0, 2 * x.k - 1);
}

Multiplier extension_multiplier(const ExtensionClass& x, const NumericContext& ctx) {
  ctx.validate();
  int k = x.k;
  cx ek = ipow(x.eta, k);
  Multiplier m = Multiplier::zero(2);
  m.at(0, 0) = LaurentSeries::monomial(cx{1.0, 0.0} / ek, -k);
  m.at(1, 0) = series_scale(ek, series_shift(x_polynomial(x), k));  // (eta z)^k x(z)
  m.at(1, 1) = LaurentSeries::monomial(ek, k);
  return m;
}

Multiplier end_multiplier(const ExtensionClass& x, const NumericContext& ctx) {
  ctx.validate();
  int k = x.k;
  cx e2k = ipow(x.eta, 2 * k);
  LaurentSeries xp = x_polynomial(x);
  LaurentSeries xx = series_mul(xp, xp);
  LaurentSeries one = LaurentSeries::constant(cx{1.0, 0.0});
  LaurentSeries zk2 = LaurentSeries::monomial(e2k, 2 * k);          // (eta z)^{2k}
  LaurentSeries zk2inv = LaurentSeries::monomial(cx{1.0, 0.0} / e2k, -2 * k);

  Multiplier m = Multiplier::zero(4);
  m.at(0, 0) = one;
  m.at(0, 2) = series_scale(cx{-1.0, 0.0}, xp);
  m.at(1, 0) = series_mul(zk2, xp);
  m.at(1, 1) = zk2;
  m.at(1, 2) = series_scale(cx{-1.0, 0.0}, series_mul(zk2, xx));
  m.at(1, 3) = series_scale(cx{-1.0, 0.0}, series_mul(zk2, xp));
  m.at(2, 2) = zk2inv;
  m.at(3, 2) = xp;
  m.at(3, 3) = one;
  return m;
}

H1Class coboundary(const ExtensionClass& x, const ThetaVector& b, const NumericContext& ctx) {
  cx ek = ipow(x.eta, x.k);
  if (b.bundle.d != x.k || std::abs(b.bundle.c - ek) > ctx.tol * std::max(1.0, std::abs(ek)))
    throw error(errc::domain_error, "coboundary: b must be a section of xi0 = L((eta z)^k)");
  LaurentSeries bs = realize(b, ctx);
  if (bs.max_abs() > 0 && functional_residual(b.bundle, bs, ctx) > ctx.tol)
    throw error(errc::invalid_section, "coboundary: section violates its functional equation");
  LineBundle dual{cx{1.0, 0.0} / ek, -x.k};
  return h1_reduce(dual, series_mul(bs, x_polynomial(x)), ctx);
}

ExtensionClass extension_class_of(const Multiplier& m, const NumericContext& ctx) {
  if (m.n != 2) throw error(errc::domain_error, "extension_class_of: need a 2x2 multiplier");
  double scale = std::max({m.at(0, 0).max_abs(), m.at(1, 1).max_abs(), 1.0});
  if (m.at(0, 1).max_abs() > ctx.tol * scale)
    throw error(errc::domain_error, "extension_class_of: upper-right entry must vanish");
  // diagonal must be the monomial pair (eta z)^{-k}, (eta z)^k
  const LaurentSeries& d0 = m.at(0, 0);
  const LaurentSeries& d1 = m.at(1, 1);
  int k = 0;
  cx a1{0.0, 0.0};
  for (const auto& [e, v] : d1.coeffs())
    if (std::abs(v) > std::abs(a1)) {
      a1 = v;
      k = e;
    }
  if (k <= 0) throw error(errc::domain_error, "extension_class_of: diagonal degree must be positive");
  for (const auto& [e, v] : d1.coeffs())
    if (e != k && std::abs(v) > ctx.tol * std::abs(a1))
      throw error(errc::domain_error, "extension_class_of: lower-right entry is not a monomial");
  for (const auto& [e, v] : d0.coeffs())
    if (e != -k && std::abs(v) > ctx.tol * std::abs(a1))
      throw error(errc::domain_error, "extension_class_of: upper-left entry is not a monomial");
  cx a0 = d0.coeff(-k);
  if (std::abs(a0 * a1 - cx{1.0, 0.0}) > 1e3 * ctx.tol)
    throw error(errc::domain_error, "extension_class_of: diagonal is not ((eta z)^{-k}, (eta z)^k)");
  // corner s(z) = (eta z)^k x(z); reduce s/(eta z)^k in (eta^{-2k}, -2k)
  LaurentSeries xs = series_shift(series_scale(cx{1.0, 0.0} / a1, m.at(1, 0)), -k);
  cx e2kinv = cx{1.0, 0.0} / (a1 * a1);
  H1Class cls = h1_reduce(LineBundle{e2kinv, -2 * k}, xs, ctx);
  cx eta = std::pow(a1, 1.0 / k);  // principal root; coords are root independent
  return ExtensionClass{k, eta, std::move(cls.coords)};
}

int parabolic_aut_dim(const ExtensionClass& x, const NumericContext& ctx) {
  ctx.validate();
  int k = x.k;
  int Wa = 4;
  int Wc = 2 * k + std::max(ctx.window / 2, 6);
  int na = 2 * Wa + 1, nc = 2 * Wc + 1;
  int ncols = 2 * na + nc;
  auto idx_a = [&](int l) { return l + Wa; };
  auto idx_d = [&](int l) { return na + l + Wa; };
  auto idx_c = [&](int w) { return 2 * na + w + Wc; };

  std::vector<Eigen::RowVectorXcd> rows;
  // a_q - a = 0 and d_q - d = 0 coefficientwise
  for (int l = -Wa; l <= Wa; ++l) {
    if (l == 0) continue;
    Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(ncols);
    r(idx_a(l)) = ipow(ctx.q, l) - cx{1.0, 0.0};
    rows.push_back(r);
    r.setZero();
    r(idx_d(l)) = ipow(ctx.q, l) - cx{1.0, 0.0};
    rows.push_back(r);
  }
  // c_q/(eta z)^{2k} - c = x (a_q - d_q), coefficient at z^w:
  //   eta^{-2k} q^{w+2k} c_{w+2k} - c_w - sum_j x_j q^{w-j} (a_{w-j} - d_{w-j}) = 0
  cx e2kinv = ipow(x.eta, -2 * k);
  for (int w = -Wc - 2 * k; w <= Wc + 2 * k; ++w) {
    Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(ncols);
    bool nonzero = false;
    if (w + 2 * k >= -Wc && w + 2 * k <= Wc) {
      r(idx_c(w + 2 * k)) = e2kinv * ipow(ctx.q, w + 2 * k);
      nonzero = true;
    }
    if (w >= -Wc && w <= Wc) {
      r(idx_c(w)) = cx{-1.0, 0.0};
      nonzero = true;
    }
    for (int j = 0; j < 2 * k; ++j) {
      int l = w - j;
      if (l < -Wa || l > Wa || x.coords[j] == cx{0.0, 0.0}) continue;
      cx v = x.coords[j] * ipow(ctx.q, l);
      r(idx_a(l)) -= v;
      r(idx_d(l)) += v;
      nonzero = true;
    }
    if (nonzero) rows.push_back(r);
  }

  Eigen::MatrixXcd A(static_cast<int>(rows.size()), ncols);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i)
    A.row(i) = rows[i] / rows[i].norm();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  double cutoff = std::max(ctx.tol, 1e-10) * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return ncols - rank;
}

}  // namespace qell
