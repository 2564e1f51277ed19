#include "qell/json_io.hpp"

namespace qell {

json to_json(cx v) { return json::array({v.real(), v.imag()}); }

cx cx_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw error(errc::domain_error, "expected complex number as [re, im]");
  return cx{j[0].get<double>(), j[1].get<double>()};
}

json to_json(const LaurentSeries& f) {
  json coeffs = json::object();
  for (const auto& [e, v] : f.coeffs()) coeffs[std::to_string(e)] = to_json(v);
  return json{{"window", json::array({f.lo(), f.hi()})}, {"coeffs", std::move(coeffs)}};
}

LaurentSeries series_from_json(const json& j) {
  int lo = j.at("window")[0].get<int>(), hi = j.at("window")[1].get<int>();
  std::map<int, cx> coeffs;
  for (const auto& [key, val] : j.at("coeffs").items())
    coeffs[std::stoi(key)] = cx_from_json(val);
  return LaurentSeries::from_coeffs(std::move(coeffs), lo, hi);
}

json to_json(const std::vector<cx>& v) {
  json arr = json::array();
  for (cx x : v) arr.push_back(to_json(x));
  return arr;
}

std::vector<cx> cxvec_from_json(const json& j) {
  std::vector<cx> out;
  for (const auto& e : j) out.push_back(cx_from_json(e));
  return out;
}

json to_json(const LineBundle& lb) { return json{{"c", to_json(lb.c)}, {"d", lb.d}}; }

json to_json(const Multiplier& m) {
  json rows = json::array();
  for (int i = 0; i < m.n; ++i) {
    json row = json::array();
    for (int j = 0; j < m.n; ++j) row.push_back(to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.n}, {"entries", std::move(rows)}};
}

json to_json(const H1Class& cls) {
  return json{{"bundle", to_json(cls.bundle)}, {"coords", to_json(cls.coords)}};
}

json to_json(const ExtensionClass& x) {
  return json{{"k", x.k}, {"eta", to_json(x.eta)}, {"coords", to_json(x.coords)}};
}

json to_json(const BracketMatrix& bm) {
  int dim = 2 * bm.k;
  json rows = json::array();
  for (int m = 0; m < dim; ++m) {
    json row = json::array();
    for (int n = 0; n < dim; ++n) row.push_back(to_json(bm.at(m, n)));
    rows.push_back(std::move(row));
  }
  return json{{"k", bm.k},
              {"eta", to_json(bm.eta)},
              {"x", to_json(bm.x)},
              {"entries", std::move(rows)},
              {"skew_residual", bm.skew_residual},
              {"truncation", bm.truncation}};
}

json to_json(const StratumReport& report) {
  json w;
  if (report.witness) {
    w = json{{"cParam", to_json(report.witness->cParam)},
             {"sigma_ratio", report.witness->sigma_ratio},
             {"kernel", to_json(report.witness->kernel)}};
  } else {
    w = nullptr;
  }
  return json{{"index_j", report.index_j},
              {"leaf_dim", report.leaf_dim},
              {"pi_rank", report.pi_rank},
              {"witness", std::move(w)}};
}

json to_json(const BracketComparison& cmp) {
  return json{{"ratio", to_json(cmp.ratio)},
              {"max_residual", cmp.max_residual},
              {"entries_compared", cmp.entries_compared}};
}

}  // namespace qell
