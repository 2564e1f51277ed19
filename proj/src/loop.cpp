#include "qell/loop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qell/bracket.hpp"

namespace qell {

namespace {

// (1 + q^s)/(1 - q^s), s != 0 -- the tau-kernel coefficient
cx tau_coeff(cx q, int s) {
  cx qs = ipow(q, s);
  return (cx{1.0, 0.0} + qs) / (cx{1.0, 0.0} - qs);
}

int loop_steps(int k, const NumericContext& ctx) {
  int L = std::max(3, (ctx.window + 2 * k - 1) / (2 * k));
  double aq = std::abs(ctx.q);
  double target = ctx.tol * 1e-3;
  int Ldecay = 2;
  while (std::pow(aq, static_cast<double>(k) * Ldecay * Ldecay) >= target && Ldecay < 64)
    ++Ldecay;
  return std::max(L, Ldecay);
}

}  // namespace

RKernels loop_kernels(const NumericContext& ctx) {
  ctx.validate();
  int W = ctx.window;
  std::map<int, cx> phi, tau;
  phi[0] = cx{0.5, 0.0};
  for (int l = -W; l <= W; ++l) {
    if (l == 0) continue;
    phi[l] = cx{1.0, 0.0} / (cx{1.0, 0.0} - ipow(ctx.q, l));
    tau[l] = tau_coeff(ctx.q, l);
  }
  RKernels out;
  out.rphi = LaurentSeries::from_coeffs(std::move(phi), -W, W);
  out.tau = LaurentSeries::from_coeffs(std::move(tau), -W, W);
  return out;
}

cx LoopOrbitPoint::c(int i) const {
  auto it = xcoeffs.find(i);
  return it == xcoeffs.end() ? cx{0.0, 0.0} : it->second;
}

cx LoopOrbitPoint::a(int m) const { return m == -k ? a_minus_k : cx{0.0, 0.0}; }

LoopOrbitPoint orbit_lift(const ExtensionClass& x) {
  LoopOrbitPoint pt;
  pt.k = x.k;
  pt.eta = x.eta;
  pt.a_minus_k = ipow(x.eta, -x.k);
  for (int i = 0; i < 2 * x.k; ++i)
    if (x.coords[i] != cx{0.0, 0.0}) pt.xcoeffs[i + x.k] = x.coords[i];  // c(z) = z^k x(z)
  return pt;
}

cx coeff_bracket_cc(const LoopOrbitPoint& pt, int m, int n, const NumericContext& ctx) {
  ctx.validate();
  cx acc{0.0, 0.0};
  for (const auto& [i, cm] : pt.xcoeffs) {
    int l = m - i;  // c_{m-l} = c_i
    if (l == 0) continue;
    cx cn = pt.c(n + l);
    if (cn == cx{0.0, 0.0}) continue;
    acc += tau_coeff(ctx.q, l) * cm * cn;
  }
  return 2.0 * acc;
}

cx coeff_bracket_ac(const LoopOrbitPoint& pt, int m, int n, const NumericContext& ctx) {
  ctx.validate();
  cx acc = cx{1.5, 0.0} * pt.a(m) * pt.c(n);
  int l = m + pt.k;  // a_{m-l} supported at m - l = -k only
  if (l != 0) acc -= cx{0.5, 0.0} * pt.a_minus_k * pt.c(n + l);
  return acc;
}

cx invariant_functional(const LoopOrbitPoint& pt, int n, const NumericContext& ctx) {
  ctx.validate();
  if (n < 0 || n >= 2 * pt.k)
    throw error(errc::domain_error, "invariant_functional: need 0 <= n < 2k");
  int L = loop_steps(pt.k, ctx);
  cx acc{0.0, 0.0};
  for (int l = -L; l <= L; ++l) {
    cx cv = pt.c(2 * pt.k * l + n);
    if (cv == cx{0.0, 0.0}) continue;
    acc += ipow(ctx.q, static_cast<long long>(n) * l + static_cast<long long>(pt.k) * l * l) *
           ipow(pt.a_minus_k, 2LL * pt.k * l) * cv;
  }
  return acc;
}

cx reduced_bracket(const LoopOrbitPoint& pt, int m, int n, const NumericContext& ctx) {
  ctx.validate();
  int k = pt.k;
  int L = loop_steps(k, ctx);
  cx acc{0.0, 0.0};
  for (int l = -L; l <= L; ++l) {
    for (int j = -L; j <= L; ++j) {
      cx w = ipow(ctx.q, static_cast<long long>(n) * l + static_cast<long long>(m) * j +
                             static_cast<long long>(k) * (static_cast<long long>(l) * l +
                                                          static_cast<long long>(j) * j)) *
             ipow(pt.a_minus_k, 2LL * k * (l + j));
      if (w == cx{0.0, 0.0}) continue;
      // s runs over offsets hitting the finite support of both factors
      for (const auto& [i1, c1] : pt.xcoeffs) {
        int s = 2 * k * j + m - i1;
        if (s == 0) continue;
        cx c2 = pt.c(2 * k * l + n + s);
        if (c2 == cx{0.0, 0.0}) continue;
        acc += tau_coeff(ctx.q, s) * w * c1 * c2;
      }
    }
  }
  return 2.0 * acc;
}

std::optional<BracketComparison> compare_brackets(const ExtensionClass& x,
                                                  const NumericContext& ctx) {
  ctx.validate();
  int k = x.k, dim = 2 * k;
  if (x.max_abs() <= ctx.tol) return std::nullopt;
  LoopOrbitPoint pt = orbit_lift(x);

  std::vector<cx> num(static_cast<size_t>(dim) * dim), den(static_cast<size_t>(dim) * dim);
  double den_scale = 0.0;
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) {
      den[m * dim + n] = bracket_entry_closed(x, m, n, ctx);
      num[m * dim + n] = reduced_bracket(pt, m + k, n + k, ctx);
      den_scale = std::max(den_scale, std::abs(den[m * dim + n]));
    }
  if (den_scale <= ctx.tol) return std::nullopt;

  std::vector<cx> ratios;
  for (int i = 0; i < dim * dim; ++i)
    if (std::abs(den[i]) > ctx.tol * den_scale) ratios.push_back(num[i] / den[i]);
  if (ratios.empty()) return std::nullopt;

  cx mean{0.0, 0.0};
  for (cx r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double dev = 0.0;
  for (cx r : ratios) dev = std::max(dev, std::abs(r - mean) / std::abs(mean));
  if (dev > 100.0 * ctx.tol) {
    std::ostringstream os;
    os << "compare_brackets: ratio is not a single constant (max relative deviation " << dev
       << ")\nratio matrix (reduced(m+k,n+k)/closed(m,n)):\n";
    for (int m = 0; m < dim; ++m) {
      for (int n = 0; n < dim; ++n) {
        cx d = den[m * dim + n];
        if (std::abs(d) > ctx.tol * den_scale) {
          cx r = num[m * dim + n] / d;
          os << "  (" << r.real() << "," << r.imag() << ")";
        } else {
          os << "  (----)";
        }
      }
      os << "\n";
    }
    throw error(errc::comparison_failure, os.str());
  }
  BracketComparison out;
  out.ratio = mean;
  out.max_residual = dev;
  out.entries_compared = static_cast<int>(ratios.size());
  return out;
}

}  // namespace qell
