#ifndef KAPRANOV_SERIALIZE_HPP
#define KAPRANOV_SERIALIZE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <kapranov/dolbeault.hpp>

namespace kapranov
{

using Json = nlohmann::json;

inline constexpr const char *kSchemaVersion = "1.0.0";

// Malformed or out-of-range input documents.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// {"re": ["p", "q"], "im": ["r", "s"]}. Parsing also accepts integers and
// "p/q" strings; floats are rejected.
Json to_json(const GRat &x);
GRat grat_from_json(const Json &j);

// Per-group integers, or "exact".
Json to_json(const Caps &c);
Caps caps_from_json(const Json &j);

// {"vars": {"z", "zb", "u"}, "caps": ..., "terms": [{"z": [...], "zb": [...],
// "u": [...], "c": ...}]}, terms in monomial order.
Json to_json(const TruncSeries &s);
TruncSeries series_from_json(const Json &j);

// Components keyed by output index, sorted input word and dzbar index, in
// the tangent convention, together with the basepoint value.
Json tower_to_json(const std::vector<CurvatureTensor> &tower);
std::vector<CurvatureTensor> tower_from_json(const Json &j);

// Forms of each fiber degree 0..N.
Json taylor_to_json(const DolbeaultElement &x);

// omega per dzbar slot, split into homogeneous parts.
Json alpha_to_json(const std::vector<HomTensor> &omega);

Json to_json(const Certificate &c);

// {"matrix": [[series]]} or {"potential": series}, over base(n).
ChartMetric metric_from_json(const Json &j);

// {"dim": n, "terms": [{"z", "w", "zb", "wb", "dzbar", "dwbar", "c"}]}
BiChartForm form_from_json(const Json &j);

// {"order": r, "gamma": [[[series]]]}, gamma[k][i][j] over full(n).
ConnectionJet family_from_json(const Json &j);
Json family_to_json(const ConnectionJet &c);

Json read_json_file(const std::string &path);

} // namespace kapranov

#endif
