#include "qell/laurent.hpp"

#include <algorithm>
#include <cmath>

namespace qell {

const char* errc_name(errc kind) {
  switch (kind) {
    case errc::window_underflow: return "window-underflow";
    case errc::domain_error: return "domain-error";
    case errc::singular_multiplier: return "singular-multiplier";
    case errc::invalid_section: return "invalid-section";
    case errc::invalid_covector: return "invalid-covector";
    case errc::non_convergence: return "non-convergence";
    case errc::comparison_failure: return "comparison-failure";
    case errc::internal_inconsistency: return "internal-inconsistency";
  }
  return "unknown";
}

void NumericContext::validate() const {
  double aq = std::abs(q);
  if (!(aq > 0.0) || !(aq < 1.0))
    throw error(errc::domain_error, "NumericContext: |q| must lie in (0, 1)");
  if (!(tol > 0.0)) throw error(errc::domain_error, "NumericContext: tol must be positive");
  if (window < 4) throw error(errc::domain_error, "NumericContext: window must be >= 4");
}

cx ipow(cx base, long long e) {
  if (e == 0) return cx{1.0, 0.0};
  unsigned long long n =
      e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1 : static_cast<unsigned long long>(e);
  cx b = base;
  cx acc{1.0, 0.0};
  while (n > 0) {
    if (n & 1ULL) acc *= b;
    b *= b;
    n >>= 1;
  }
  return e < 0 ? cx{1.0, 0.0} / acc : acc;
}

LaurentSeries LaurentSeries::constant(cx a) { return monomial(a, 0); }

LaurentSeries LaurentSeries::monomial(cx a, int e) {
  std::map<int, cx> m;
  m[e] = a;
  return LaurentSeries(std::move(m), std::min(e, 0), std::max(e, 0));
}

LaurentSeries LaurentSeries::from_coeffs(std::map<int, cx> coeffs, int lo, int hi) {
  if (lo > hi) throw error(errc::window_underflow, "from_coeffs: empty window");
  for (const auto& [e, v] : coeffs) {
    (void)v;
    if (e < lo || e > hi)
      throw error(errc::domain_error, "from_coeffs: exponent outside window");
  }
  return LaurentSeries(std::move(coeffs), std::min(lo, 0), std::max(hi, 0));
}

cx LaurentSeries::coeff(int e) const {
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? cx{0.0, 0.0} : it->second;
}

void LaurentSeries::set_coeff(int e, cx v) {
  if (e < lo_ || e > hi_)
    throw error(errc::domain_error, "set_coeff: exponent outside window");
  if (v == cx{0.0, 0.0})
    coeffs_.erase(e);
  else
    coeffs_[e] = v;
}

double LaurentSeries::max_abs() const {
  double m = 0.0;
  for (const auto& [e, v] : coeffs_) {
    (void)e;
    m = std::max(m, std::abs(v));
  }
  return m;
}

bool LaurentSeries::is_zero(double tol) const { return max_abs() <= tol; }

LaurentSeries LaurentSeries::restricted(int lo, int hi) const {
  int nlo = std::max(lo, lo_), nhi = std::min(hi, hi_);
  if (nlo > nhi) throw error(errc::window_underflow, "restricted: empty window");
  std::map<int, cx> out;
  for (const auto& [e, v] : coeffs_)
    if (e >= nlo && e <= nhi) out[e] = v;
  return LaurentSeries(std::move(out), nlo, nhi);
}

LaurentSeries series_mul(const LaurentSeries& f, const LaurentSeries& g) {
  int lo = f.lo() + g.lo(), hi = f.hi() + g.hi();
  if (lo > hi) throw error(errc::window_underflow, "series_mul: empty result window");
  std::map<int, cx> out;
  for (const auto& [i, a] : f.coeffs())
    for (const auto& [j, b] : g.coeffs()) out[i + j] += a * b;
  return LaurentSeries::from_coeffs(std::move(out), lo, hi);
}

LaurentSeries series_add(const LaurentSeries& f, const LaurentSeries& g) {
  std::map<int, cx> out = f.coeffs();
  for (const auto& [e, v] : g.coeffs()) out[e] += v;
  return LaurentSeries::from_coeffs(std::move(out), std::min(f.lo(), g.lo()),
                                    std::max(f.hi(), g.hi()));
}

LaurentSeries series_sub(const LaurentSeries& f, const LaurentSeries& g) {
  std::map<int, cx> out = f.coeffs();
  for (const auto& [e, v] : g.coeffs()) out[e] -= v;
  return LaurentSeries::from_coeffs(std::move(out), std::min(f.lo(), g.lo()),
                                    std::max(f.hi(), g.hi()));
}

LaurentSeries series_scale(cx a, const LaurentSeries& f) {
  std::map<int, cx> out;
  for (const auto& [e, v] : f.coeffs()) out[e] = a * v;
  return LaurentSeries::from_coeffs(std::move(out), f.lo(), f.hi());
}

LaurentSeries series_shift(const LaurentSeries& f, int s) {
  std::map<int, cx> out;
  for (const auto& [e, v] : f.coeffs()) out[e + s] = v;
  return LaurentSeries::from_coeffs(std::move(out), f.lo() + s, f.hi() + s);
}

LaurentSeries q_shift(const LaurentSeries& f, const NumericContext& ctx, int j) {
  std::map<int, cx> out;
  for (const auto& [e, v] : f.coeffs()) out[e] = v * ipow(ctx.q, static_cast<long long>(j) * e);
  return LaurentSeries::from_coeffs(std::move(out), f.lo(), f.hi());
}

cx constant_term(const LaurentSeries& f) {
  if (f.lo() > 0 || f.hi() < 0)
    throw error(errc::window_underflow, "constant_term: 0 outside window");
  return f.coeff(0);
}

}  // namespace qell
