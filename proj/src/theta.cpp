#include "qell/theta.hpp"

#include <cmath>
#include <cstdlib>

namespace qell {

namespace {

// q^{ln} q^{d l(l-1)/2} c^l
cx theta_coeff(cx q, cx c, int d, int n, long long l) {
  long long e = l * n + d * l * (l - 1) / 2;
  return ipow(q, e) * ipow(c, l);
}

}  // namespace

LineBundle line_bundle(cx c, int d, const NumericContext& ctx) {
  ctx.validate();
  if (c == cx{0.0, 0.0}) throw error(errc::domain_error, "line_bundle: c must be nonzero");
  double aq = std::abs(ctx.q);
  // d = 0 widens the bound so every q^{-m} within the window is admissible
  int bound = d == 0 ? ctx.window + 1 : std::abs(d) + 1;
  double lo = std::pow(aq, bound), hi = std::pow(aq, -bound);
  double ac = std::abs(c);
  if (!(ac > lo) || !(ac < hi))
    throw error(errc::domain_error,
                "line_bundle: |c| outside conditioning annulus; normalize by q^Z first");
  return LineBundle{c, d};
}

LineBundle dual_bundle(const LineBundle& lb) { return LineBundle{cx{1.0, 0.0} / lb.c, -lb.d}; }

bool mutually_dual(const LineBundle& a, const LineBundle& b, double tol) {
  return a.d == -b.d && std::abs(a.c * b.c - cx{1.0, 0.0}) <= tol * std::abs(a.c * b.c) + tol;
}

int theta_steps(int d, int n, const NumericContext& ctx) {
  int dd = std::abs(d) == 0 ? 1 : std::abs(d);
  return (ctx.window + std::abs(n)) / dd + 2;
}

LaurentSeries theta_series(const LineBundle& lb, int n, const NumericContext& ctx) {
  if (lb.d <= 0) throw error(errc::domain_error, "theta_series: degree must be positive");
  int L = theta_steps(lb.d, n, ctx);
  std::map<int, cx> coeffs;
  for (int l = -L; l <= L; ++l) {
    cx v = theta_coeff(ctx.q, lb.c, lb.d, n, l);
    if (v != cx{0.0, 0.0}) coeffs[lb.d * l + n] = v;
  }
  return LaurentSeries::from_coeffs(std::move(coeffs), std::min(-lb.d * L + n, 0),
                                    std::max(lb.d * L + n, 0));
}

LaurentSeries theta_basis(const LineBundle& lb, int n, const NumericContext& ctx) {
  if (lb.d <= 0) throw error(errc::domain_error, "theta_basis: degree must be positive");
  if (n < 0 || n >= lb.d)
    throw error(errc::domain_error, "theta_basis: basis index must satisfy 0 <= n < d");
  return theta_series(lb, n, ctx);
}

double functional_residual(const LineBundle& lb, const LaurentSeries& f,
                           const NumericContext& ctx) {
  // c z^d f_q - f, compared where both operands are inside their windows
  LaurentSeries lhs = series_scale(lb.c, series_shift(q_shift(f, ctx), lb.d));
  int lo = std::max(lhs.lo(), f.lo()), hi = std::min(lhs.hi(), f.hi());
  double res = 0.0;
  for (int e = lo; e <= hi; ++e) res = std::max(res, std::abs(lhs.coeff(e) - f.coeff(e)));
  double scale = f.max_abs();
  return scale > 0.0 ? res / scale : res;
}

std::vector<LaurentSeries> h0_basis(const LineBundle& lb, const NumericContext& ctx,
                                    std::string* warning) {
  std::vector<LaurentSeries> out;
  if (lb.d > 0) {
    for (int n = 0; n < lb.d; ++n) out.push_back(theta_basis(lb, n, ctx));
    return out;
  }
  if (lb.d < 0) return out;
  // d = 0: sections exist iff c = q^{-m}; then f = z^m solves c q^m f = f.
  for (int m = -ctx.window; m <= ctx.window; ++m) {
    cx target = ipow(ctx.q, -m);
    if (std::abs(lb.c - target) <= ctx.tol * std::max(1.0, std::abs(target))) {
      out.push_back(LaurentSeries::monomial(cx{1.0, 0.0}, m));
      return out;
    }
  }
  if (warning) {
    double best = 1e300;
    for (int m = -ctx.window; m <= ctx.window; ++m) {
      cx target = ipow(ctx.q, -m);
      best = std::min(best, std::abs(lb.c - target) / std::max(1.0, std::abs(target)));
    }
    if (best < 1e3 * ctx.tol)
      *warning = "h0_basis: c within " + std::to_string(best) +
                 " of q^Z but outside tolerance; returning empty";
  }
  return out;
}

H1Class h1_reduce(const LineBundle& lb, const LaurentSeries& f, const NumericContext& ctx) {
  if (lb.d >= 0) throw error(errc::domain_error, "h1_reduce: degree must be negative");
  int kk = -lb.d;
  std::vector<cx> coords(kk, cx{0.0, 0.0});
  for (const auto& [m, a] : f.coeffs()) {
    int n = ((m % kk) + kk) % kk;
    long long l = (m - n) / kk;  // exact: kk divides m - n
    coords[n] += a * ipow(lb.c, l) * ipow(ctx.q, l * n + kk * l * (l + 1) / 2);
  }
  return H1Class{lb, std::move(coords)};
}

LaurentSeries realize(const ThetaVector& tv, const NumericContext& ctx) {
  if (tv.bundle.d <= 0 || static_cast<int>(tv.coords.size()) != tv.bundle.d)
    throw error(errc::domain_error, "realize: coords must have length d > 0");
  LaurentSeries acc;
  for (int n = 0; n < tv.bundle.d; ++n) {
    if (tv.coords[n] == cx{0.0, 0.0}) continue;
    acc = series_add(acc, series_scale(tv.coords[n], theta_basis(tv.bundle, n, ctx)));
  }
  return acc;
}

cx serre_pair_index(const LineBundle& lb, int n, const H1Class& cls,
                    const NumericContext& ctx) {
  if (!mutually_dual(lb, cls.bundle, ctx.tol))
    throw error(errc::domain_error, "serre_pair: bundles are not mutually dual");
  // constant term of theta_n * sum_m coords[m] z^m: picks the z^{-m} coefficient
  // of theta_n, which sits at l = (-m - n)/d when divisible.
  cx acc{0.0, 0.0};
  int d = lb.d;
  for (int m = 0; m < static_cast<int>(cls.coords.size()); ++m) {
    if (cls.coords[m] == cx{0.0, 0.0}) continue;
    int e = -m - n;
    if (((e % d) + d) % d != 0) continue;
    long long l = e / d;
    acc += cls.coords[m] * theta_coeff(ctx.q, lb.c, d, n, l);
  }
  return acc;
}

cx serre_pair(const ThetaVector& tv, const H1Class& cls, const NumericContext& ctx) {
  if (!mutually_dual(tv.bundle, cls.bundle, ctx.tol))
    throw error(errc::domain_error, "serre_pair: bundles are not mutually dual");
  cx acc{0.0, 0.0};
  for (int n = 0; n < tv.bundle.d; ++n) {
    if (tv.coords[n] == cx{0.0, 0.0}) continue;
    acc += tv.coords[n] * serre_pair_index(tv.bundle, n, cls, ctx);
  }
  return acc;
}

cx theta_functional(const LineBundle& lb, int n, const LaurentSeries& f,
                    const NumericContext& ctx) {
  if (lb.d <= 0) throw error(errc::domain_error, "theta_functional: degree must be positive");
  cx acc{0.0, 0.0};
  int d = lb.d;
  for (const auto& [e, v] : f.coeffs()) {
    int r = e - n;
    if (((r % d) + d) % d != 0) continue;
    long long l = r / d;
    acc += v * ipow(ctx.q, l * n + d * l * (l + 1) / 2) * ipow(lb.c, -l);
  }
  return acc;
}

}  // namespace qell
