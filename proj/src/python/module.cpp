// pybind11 bindings for the main operations. Series travel as
// {exponent: complex} dicts, classes as coordinate lists.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qell/leaves.hpp"
#include "qell/loop.hpp"

namespace py = pybind11;
using namespace qell;

namespace {

NumericContext make_ctx(cx q, int window, double tol) {
  NumericContext ctx{q, tol, window};
  ctx.validate();
  return ctx;
}

LaurentSeries series_of(const std::map<int, cx>& coeffs) {
  if (coeffs.empty()) return LaurentSeries{};
  int lo = coeffs.begin()->first, hi = coeffs.rbegin()->first;
  std::map<int, cx> m = coeffs;
  return LaurentSeries::from_coeffs(std::move(m), std::min(lo, 0), std::max(hi, 0));
}

std::map<int, cx> dict_of(const LaurentSeries& f) { return f.coeffs(); }

ExtensionClass class_of(cx eta, const std::vector<cx>& coords) {
  if (coords.size() % 2 != 0 || coords.empty())
    throw error(errc::domain_error, "coords must have length 2k");
  return make_extension(static_cast<int>(coords.size()) / 2, eta, coords);
}

LoopOrbitPoint point_of(int k, cx eta, const std::map<int, cx>& xcoeffs, cx a_minus_k) {
  LoopOrbitPoint pt;
  pt.k = k;
  pt.eta = eta;
  pt.xcoeffs = xcoeffs;
  pt.a_minus_k = a_minus_k;
  return pt;
}

}  // namespace

PYBIND11_MODULE(_qell, m) {
  m.doc() = "Poisson structure of SL2 parabolic bundles on E_q: theta bases, "
            "Serre pairing, both bracket routes, leaf stratification, loop r-matrix";

  py::register_exception<error>(m, "QellError");

  m.def(
      "theta_coeffs",
      [](cx q, cx c, int d, int n, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return dict_of(theta_series(line_bundle(c, d, ctx), n, ctx));
      },
      py::arg("q"), py::arg("c"), py::arg("d"), py::arg("n"), py::arg("window") = 24,
      py::arg("tol") = 1e-9,
      "coefficients of the basis solution of c z^d f(qz) = f(z), any integer index");

  m.def(
      "h0_dims",
      [](cx q, cx c, int d, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return h0_basis(line_bundle(c, d, ctx), ctx).size();
      },
      py::arg("q"), py::arg("c"), py::arg("d"), py::arg("window") = 24, py::arg("tol") = 1e-9);

  m.def(
      "h1_reduce",
      [](cx q, cx c, int d, const std::map<int, cx>& coeffs, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return h1_reduce(LineBundle{c, d}, series_of(coeffs), ctx).coords;
      },
      py::arg("q"), py::arg("c"), py::arg("d"), py::arg("coeffs"), py::arg("window") = 24,
      py::arg("tol") = 1e-9, "canonical H^1 coordinates of a series, d < 0");

  m.def(
      "serre_pair",
      [](cx q, cx c, int d, int n, const std::vector<cx>& class_coords, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        LineBundle lb{c, d};
        return serre_pair_index(lb, n, H1Class{dual_bundle(lb), class_coords}, ctx);
      },
      py::arg("q"), py::arg("c"), py::arg("d"), py::arg("n"), py::arg("class_coords"),
      py::arg("window") = 24, py::arg("tol") = 1e-9,
      "pairing of the index-n theta series over (c, d) with a canonical dual class");

  m.def(
      "theta_functional",
      [](cx q, cx c, int d, int n, const std::map<int, cx>& coeffs, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return theta_functional(LineBundle{c, d}, n, series_of(coeffs), ctx);
      },
      py::arg("q"), py::arg("c"), py::arg("d"), py::arg("n"), py::arg("coeffs"),
      py::arg("window") = 24, py::arg("tol") = 1e-9);

  m.def(
      "bracket_entry",
      [](cx q, cx eta, const std::vector<cx>& x, int m, int n, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return bracket_entry_closed(class_of(eta, x), m, n, ctx);
      },
      py::arg("q"), py::arg("eta"), py::arg("x"), py::arg("m"), py::arg("n"),
      py::arg("window") = 24, py::arg("tol") = 1e-9, "closed-form bracket entry");

  m.def(
      "bracket_entry_series",
      [](cx q, cx eta, const std::vector<cx>& x, int m, int n, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        ExtensionClass ex = class_of(eta, x);
        H1Class img = bivector_apply_series(ex, m, ctx);
        return serre_pair_index(LineBundle{ipow(eta, 2 * ex.k), 2 * ex.k}, -n, img, ctx);
      },
      py::arg("q"), py::arg("eta"), py::arg("x"), py::arg("m"), py::arg("n"),
      py::arg("window") = 24, py::arg("tol") = 1e-9,
      "bracket entry through the series route (requires x_m = 0)");

  m.def(
      "bracket_matrix",
      [](cx q, cx eta, const std::vector<cx>& x, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        ExtensionClass ex = class_of(eta, x);
        BracketMatrix bm = bracket_matrix(ex, ctx);
        int dim = 2 * bm.k;
        std::vector<std::vector<cx>> rows(dim, std::vector<cx>(dim));
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) rows[i][j] = bm.at(i, j);
        return py::make_tuple(rows, bm.skew_residual, bm.truncation);
      },
      py::arg("q"), py::arg("eta"), py::arg("x"), py::arg("window") = 24, py::arg("tol") = 1e-9,
      "(entries, skew_residual, truncation)");

  m.def(
      "jacobiator",
      [](cx q, cx eta, const std::vector<cx>& x, int m, int n, int s, bool unrestricted,
         int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        ExtensionClass ex = class_of(eta, x);
        return unrestricted ? jacobiator_unrestricted(ex, m, n, s, ctx)
                            : jacobiator(ex, m, n, s, ctx);
      },
      py::arg("q"), py::arg("eta"), py::arg("x"), py::arg("m"), py::arg("n"), py::arg("s"),
      py::arg("unrestricted") = false, py::arg("window") = 24, py::arg("tol") = 1e-9);

  m.def(
      "parabolic_aut_dim",
      [](cx q, cx eta, const std::vector<cx>& x, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return parabolic_aut_dim(class_of(eta, x), ctx);
      },
      py::arg("q"), py::arg("eta"), py::arg("x"), py::arg("window") = 24, py::arg("tol") = 1e-9);

  m.def(
      "instability_index",
      [](cx q, cx eta, const std::vector<cx>& x, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        StratumReport rep = instability_index(class_of(eta, x), ctx);
        py::dict out;
        out["index_j"] = rep.index_j;
        out["leaf_dim"] = rep.leaf_dim;
        out["pi_rank"] = rep.pi_rank;
        if (rep.witness) {
          py::dict w;
          w["cParam"] = rep.witness->cParam;
          w["sigma_ratio"] = rep.witness->sigma_ratio;
          w["kernel"] = rep.witness->kernel;
          out["witness"] = w;
        } else {
          out["witness"] = py::none();
        }
        return out;
      },
      py::arg("q"), py::arg("eta"), py::arg("x"), py::arg("window") = 24, py::arg("tol") = 1e-9);

  m.def(
      "plant_unstable",
      [](cx q, cx eta, int k, int j, cx cparam, uint64_t seed, int window, double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return plant_unstable(k, eta, j, cparam, seed, ctx).coords;
      },
      py::arg("q"), py::arg("eta"), py::arg("k"), py::arg("j"), py::arg("cparam"),
      py::arg("seed") = 1, py::arg("window") = 24, py::arg("tol") = 1e-9,
      "random class in the annihilator of a degree-j sub-bundle probe");

  m.def(
      "coeff_bracket_cc",
      [](cx q, cx eta, int k, const std::map<int, cx>& c, cx a_minus_k, int m, int n, int window,
         double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return coeff_bracket_cc(point_of(k, eta, c, a_minus_k), m, n, ctx);
      },
      py::arg("q"), py::arg("eta"), py::arg("k"), py::arg("c"), py::arg("a_minus_k"),
      py::arg("m"), py::arg("n"), py::arg("window") = 24, py::arg("tol") = 1e-9);

  m.def(
      "coeff_bracket_ac",
      [](cx q, cx eta, int k, const std::map<int, cx>& c, cx a_minus_k, int m, int n, int window,
         double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return coeff_bracket_ac(point_of(k, eta, c, a_minus_k), m, n, ctx);
      },
      py::arg("q"), py::arg("eta"), py::arg("k"), py::arg("c"), py::arg("a_minus_k"),
      py::arg("m"), py::arg("n"), py::arg("window") = 24, py::arg("tol") = 1e-9);

  m.def(
      "invariant_functional",
      [](cx q, cx eta, int k, const std::map<int, cx>& c, cx a_minus_k, int n, int window,
         double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return invariant_functional(point_of(k, eta, c, a_minus_k), n, ctx);
      },
      py::arg("q"), py::arg("eta"), py::arg("k"), py::arg("c"), py::arg("a_minus_k"), py::arg("n"),
      py::arg("window") = 24, py::arg("tol") = 1e-9);

  m.def(
      "reduced_bracket",
      [](cx q, cx eta, int k, const std::map<int, cx>& c, cx a_minus_k, int m, int n, int window,
         double tol) {
        NumericContext ctx = make_ctx(q, window, tol);
        return reduced_bracket(point_of(k, eta, c, a_minus_k), m, n, ctx);
      },
      py::arg("q"), py::arg("eta"), py::arg("k"), py::arg("c"), py::arg("a_minus_k"),
      py::arg("m"), py::arg("n"), py::arg("window") = 24, py::arg("tol") = 1e-9);

  m.def(
      "compare_brackets",
      [](cx q, cx eta, const std::vector<cx>& x, int window, double tol) -> py::object {
        NumericContext ctx = make_ctx(q, window, tol);
        auto cmp = compare_brackets(class_of(eta, x), ctx);
        if (!cmp) return py::none();
        py::dict out;
        out["ratio"] = cmp->ratio;
        out["max_residual"] = cmp->max_residual;
        out["entries_compared"] = cmp->entries_compared;
        return out;
      },
      py::arg("q"), py::arg("eta"), py::arg("x"), py::arg("window") = 24, py::arg("tol") = 1e-9,
      "loop r-matrix bracket vs sheaf bracket; None for the zero class");
}
