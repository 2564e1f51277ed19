// Truncated complex Laurent series with the q-shift operator.
// Every other component builds on this arithmetic substrate.
#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace qell {

using cx = std::complex<double>;

enum class errc {
  window_underflow,
  domain_error,
  singular_multiplier,
  invalid_section,
  invalid_covector,
  non_convergence,
  comparison_failure,
  internal_inconsistency,
};

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

const char* errc_name(errc kind);

// Ambient parameters of E_q = C*/q^Z plus the numeric policy shared by all
// operations. `window` is the half-width W of realized exponent ranges; every
// truncation bound in the library is derived from it so that doubling W
// tightens every reported quantity.
struct NumericContext {
  cx q{0.1, 0.0};
  double tol = 1e-9;
  int window = 24;

  void validate() const;  // 0 < |q| < 1, tol > 0, window >= 4
};

// z^e for integer e, also used for q^e with complex q.
cx ipow(cx base, long long e);

// Coefficients on the exponent window [lo, hi]; after construction lo <= 0 <= hi.
// The window is the range on which coefficients are guaranteed accurate;
// outside it they are treated as numerically negligible.
class LaurentSeries {
 public:
  LaurentSeries() = default;

  static LaurentSeries constant(cx a);
  static LaurentSeries monomial(cx a, int e);
  // Window taken as given (normalized to contain 0); exponents outside [lo,hi] rejected.
  static LaurentSeries from_coeffs(std::map<int, cx> coeffs, int lo, int hi);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  cx coeff(int e) const;
  void set_coeff(int e, cx v);  // e must lie in the window

  const std::map<int, cx>& coeffs() const { return coeffs_; }

  double max_abs() const;
  bool is_zero(double tol) const;  // every coefficient magnitude below tol

  // Intersect the window with [lo, hi], dropping outside coefficients.
  LaurentSeries restricted(int lo, int hi) const;  // throws window_underflow if empty

 private:
  LaurentSeries(std::map<int, cx> coeffs, int lo, int hi)
      : coeffs_(std::move(coeffs)), lo_(lo), hi_(hi) {}
  std::map<int, cx> coeffs_;
  int lo_ = 0, hi_ = 0;
};

// Exact convolution; result window is [lo_f+lo_g, hi_f+hi_g].
LaurentSeries series_mul(const LaurentSeries& f, const LaurentSeries& g);
// Sum/difference on the union window.
LaurentSeries series_add(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries series_sub(const LaurentSeries& f, const LaurentSeries& g);
LaurentSeries series_scale(cx a, const LaurentSeries& f);
// Multiply by z^s (window shifts, then re-normalized to contain 0).
LaurentSeries series_shift(const LaurentSeries& f, int s);

// f(z) -> f(q^j z): coefficient at exponent l picks up q^{jl}.
LaurentSeries q_shift(const LaurentSeries& f, const NumericContext& ctx, int j = 1);

// Coefficient at exponent 0; throws window_underflow if 0 is outside the window.
cx constant_term(const LaurentSeries& f);

}  // namespace qell
