#include "qell/bracket.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace qell {

namespace {

// (q^u + 1)/(q^u - 1), u != 0
cx kernel(cx q, int u) {
  cx qu = ipow(q, u);
  return (qu + cx{1.0, 0.0}) / (qu - cx{1.0, 0.0});
}

// A_m(u) = sum_l q^{-ml} q^{k l(l-1)} eta^{2kl} x_{m+u-2kl}
cx pairing_sum(const ExtensionClass& x, int m, int u, int L, const NumericContext& ctx) {
  int k = x.k;
  cx acc{0.0, 0.0};
  for (int l = -L; l <= L; ++l) {
    long long idx = static_cast<long long>(m) + u - 2LL * k * l;
    if (idx < 0 || idx >= 2 * k) continue;
    cx xj = x.coords[static_cast<size_t>(idx)];
    if (xj == cx{0.0, 0.0}) continue;
    acc += xj * ipow(ctx.q, -static_cast<long long>(m) * l + static_cast<long long>(k) * l * (l - 1)) *
           ipow(x.eta, 2LL * k * l);
  }
  return acc;
}

}  // namespace

int bracket_steps(int k, const NumericContext& ctx) {
  int L = std::max(3, (ctx.window + 2 * k - 1) / (2 * k));
  double aq = std::abs(ctx.q);
  double target = ctx.tol * 1e-3;
  int Ldecay = 2;
  while (std::pow(aq, static_cast<double>(k) * Ldecay * (Ldecay - 1)) >= target && Ldecay < 64)
    ++Ldecay;
  return std::max(L, Ldecay);
}

H1Class bivector_apply_series(const ExtensionClass& x, int m, const NumericContext& ctx) {
  ctx.validate();
  int k = x.k;
  cx e2k = ipow(x.eta, 2 * k);
  LaurentSeries bprime = theta_series(LineBundle{e2k, 2 * k}, -m, ctx);
  LaurentSeries xp = x_polynomial(x);
  LaurentSeries beta = series_mul(bprime, xp);
  double scale = std::max(1.0, beta.max_abs());
  if (std::abs(constant_term(beta)) > ctx.tol * scale)
    throw error(errc::invalid_covector,
                "bivector_apply_series: [b'x] must vanish in H^1(O); requires x_m = 0");
  // b'x - 2a with a = sum_{l != 0} beta_l/(1-q^l) z^l
  LaurentSeries gamma;
  {
    std::map<int, cx> g;
    for (const auto& [l, v] : beta.coeffs()) {
      if (l == 0) continue;
      g[l] = v * kernel(ctx.q, l);
    }
    gamma = LaurentSeries::from_coeffs(std::move(g), beta.lo(), beta.hi());
  }
  return h1_reduce(LineBundle{cx{1.0, 0.0} / e2k, -2 * k}, series_mul(gamma, xp), ctx);
}

cx bracket_entry_closed(const ExtensionClass& x, int m, int n, const NumericContext& ctx) {
  int k = x.k;
  int L = bracket_steps(k, ctx);
  int umax = 2 * k * (L + 1);
  cx acc{0.0, 0.0};
  for (int u = -umax; u <= umax; ++u) {
    if (u == 0) continue;
    cx am = pairing_sum(x, m, u, L, ctx);
    if (am == cx{0.0, 0.0}) continue;
    cx an = pairing_sum(x, n, -u, L, ctx);
    if (an == cx{0.0, 0.0}) continue;
    acc += kernel(ctx.q, u) * am * an;
  }
  return acc;
}

double BracketMatrix::max_abs() const {
  double m = 0.0;
  for (cx v : entries) m = std::max(m, std::abs(v));
  return m;
}

BracketMatrix bracket_matrix(const ExtensionClass& x, const NumericContext& ctx) {
  ctx.validate();
  int k = x.k, dim = 2 * k;
  BracketMatrix bm;
  bm.k = k;
  bm.eta = x.eta;
  bm.x = x.coords;
  bm.truncation = bracket_steps(k, ctx);
  bm.entries.assign(static_cast<size_t>(dim) * dim, cx{0.0, 0.0});
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) bm.entries[m * dim + n] = bracket_entry_closed(x, m, n, ctx);
  double skew = 0.0;
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n)
      skew = std::max(skew, std::abs(bm.at(m, n) + bm.at(n, m)));
  bm.skew_residual = skew;
  if (skew > ctx.tol * std::max(1.0, bm.max_abs()))
    throw error(errc::internal_inconsistency, "bracket_matrix: skew residual above tolerance");
  return bm;
}

int pi_rank(const BracketMatrix& bm, double tol) {
  int dim = 2 * bm.k;
  Eigen::MatrixXcd P(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) P(i, j) = bm.at(i, j);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= tol) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank;
}

cx BracketTensor::at(int m, int n, int j, int s) const {
  int dim = 2 * k;
  return data[((m * dim + n) * dim + j) * dim + s];
}

cx& BracketTensor::at(int m, int n, int j, int s) {
  int dim = 2 * k;
  return data[((m * dim + n) * dim + j) * dim + s];
}

cx BracketTensor::entry(const std::vector<cx>& x, int m, int n) const {
  int dim = 2 * k;
  cx acc{0.0, 0.0};
  for (int j = 0; j < dim; ++j) {
    if (x[j] == cx{0.0, 0.0}) continue;
    for (int s = 0; s < dim; ++s) {
      if (x[s] == cx{0.0, 0.0}) continue;
      acc += at(m, n, j, s) * x[j] * x[s];
    }
  }
  return acc;
}

cx BracketTensor::entry_derivative(const std::vector<cx>& x, int m, int n, int p) const {
  int dim = 2 * k;
  cx acc{0.0, 0.0};
  for (int s = 0; s < dim; ++s) {
    if (x[s] == cx{0.0, 0.0}) continue;
    acc += at(m, n, p, s) * x[s];
  }
  return 2.0 * acc;
}

BracketTensor bracket_tensor(int k, cx eta, const NumericContext& ctx) {
  ctx.validate();
  int dim = 2 * k;
  BracketTensor T;
  T.k = k;
  T.eta = eta;
  T.data.assign(static_cast<size_t>(dim) * dim * dim * dim, cx{0.0, 0.0});
  std::vector<cx> coords(dim, cx{0.0, 0.0});
  // diagonal coefficients from basis vectors, off-diagonal by polarization
  std::vector<std::vector<cx>> diag(dim);
  for (int j = 0; j < dim; ++j) {
    coords.assign(dim, cx{0.0, 0.0});
    coords[j] = cx{1.0, 0.0};
    ExtensionClass ex{k, eta, coords};
    diag[j].resize(static_cast<size_t>(dim) * dim);
    for (int m = 0; m < dim; ++m)
      for (int n = 0; n < dim; ++n) {
        cx v = bracket_entry_closed(ex, m, n, ctx);
        diag[j][m * dim + n] = v;
        T.at(m, n, j, j) = v;
      }
  }
  for (int j = 0; j < dim; ++j)
    for (int s = j + 1; s < dim; ++s) {
      coords.assign(dim, cx{0.0, 0.0});
      coords[j] = cx{1.0, 0.0};
      coords[s] = cx{1.0, 0.0};
      ExtensionClass ex{k, eta, coords};
      for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) {
          cx v = 0.5 * (bracket_entry_closed(ex, m, n, ctx) - diag[j][m * dim + n] -
                        diag[s][m * dim + n]);
          T.at(m, n, j, s) = v;
          T.at(m, n, s, j) = v;
        }
    }
  return T;
}

namespace {

cx jacobiator_impl(const ExtensionClass& x, int m, int n, int s, const NumericContext& ctx,
                   const BracketTensor* tensor) {
  BracketTensor local;
  if (!tensor) {
    local = bracket_tensor(x.k, x.eta, ctx);
    tensor = &local;
  }
  int dim = 2 * x.k;
  cx acc{0.0, 0.0};
  for (int p = 0; p < dim; ++p) {
    acc += tensor->entry(x.coords, p, m) * tensor->entry_derivative(x.coords, n, s, p);
    acc += tensor->entry(x.coords, p, n) * tensor->entry_derivative(x.coords, s, m, p);
    acc += tensor->entry(x.coords, p, s) * tensor->entry_derivative(x.coords, m, n, p);
  }
  return acc;
}

}  // namespace

cx jacobiator(const ExtensionClass& x, int m, int n, int s, const NumericContext& ctx,
              const BracketTensor* tensor) {
  double scale = std::max(1.0, x.max_abs());
  for (int idx : {m, n, s})
    if (idx < 0 || idx >= 2 * x.k || std::abs(x.coords[idx]) > ctx.tol * scale)
      throw error(errc::invalid_covector,
                  "jacobiator: requires admissible covectors (x_m = x_n = x_s = 0)");
  return jacobiator_impl(x, m, n, s, ctx, tensor);
}

cx jacobiator_unrestricted(const ExtensionClass& x, int m, int n, int s,
                           const NumericContext& ctx, const BracketTensor* tensor) {
  for (int idx : {m, n, s})
    if (idx < 0 || idx >= 2 * x.k)
      throw error(errc::domain_error, "jacobiator: index out of range");
  return jacobiator_impl(x, m, n, s, ctx, tensor);
}

double jacobiator_scale(const ExtensionClass& x, const NumericContext& ctx,
                        const BracketTensor* tensor) {
  BracketTensor local;
  if (!tensor) {
    local = bracket_tensor(x.k, x.eta, ctx);
    tensor = &local;
  }
  int dim = 2 * x.k;
  double pmax = 0.0, dmax = 0.0;
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) {
      pmax = std::max(pmax, std::abs(tensor->entry(x.coords, m, n)));
      for (int p = 0; p < dim; ++p)
        dmax = std::max(dmax, std::abs(tensor->entry_derivative(x.coords, m, n, p)));
    }
  return pmax * dmax;
}

}  // namespace qell
