// JSON serialization: complex numbers as [re, im] everywhere; series as
// {"window": [lo, hi], "coeffs": {exponent: [re, im]}}.
#pragma once

#include <json.hpp>

#include "qell/bracket.hpp"
#include "qell/leaves.hpp"
#include "qell/loop.hpp"

namespace qell {

using json = nlohmann::ordered_json;

json to_json(cx v);
cx cx_from_json(const json& j);

json to_json(const LaurentSeries& f);
LaurentSeries series_from_json(const json& j);

json to_json(const std::vector<cx>& v);
std::vector<cx> cxvec_from_json(const json& j);

json to_json(const LineBundle& lb);
json to_json(const Multiplier& m);
json to_json(const H1Class& cls);
json to_json(const ExtensionClass& x);
json to_json(const BracketMatrix& bm);
json to_json(const StratumReport& report);
json to_json(const BracketComparison& cmp);

}  // namespace qell
