#ifndef ABMOD_JSON_IO_HPP
#define ABMOD_JSON_IO_HPP

#include "abmod/change_of_variable.hpp"
#include "abmod/classification.hpp"
#include "abmod/module.hpp"
#include "abmod/ore.hpp"

#include <json.hpp>

#include <string>

namespace abmod {

// ordered_json keeps key order stable so identical inputs give
// byte-identical reports.
using Json = nlohmann::ordered_json;

Json rat_json(const Rat& q);
Rat rat_from_json(const Json& j);

/// Bare form: array of rational strings (the container supplies the order).
Json series_json_bare(const TruncSeries& s);
TruncSeries series_from_json_bare(const Json& j, int order);

/// Standalone form: {"order": N, "coeffs": [...]}.
Json series_json(const TruncSeries& s);
TruncSeries series_from_json(const Json& j);

/// {"a_degree": d, "order": N, "coeffs": [[...], ...]}.
Json ore_json(const OreOperator& op);
OreOperator ore_from_json(const Json& j);

/// {"lambda1": "7/2", "p": [2,3], "S": [[...],[...]], "order": N}.
Json presentation_json(const FrescoPresentation& pres);
FrescoPresentation presentation_from_json(const Json& j);

/// {"rank": k, "order": N, "action": [[series...], ...]} -- action[j] is
/// column j, the coordinates of a(e_j).
Json module_json(const AbModule& E);
AbModule module_from_json(const Json& j);

/// {"theta": ["1", "0", "1/3", ...]} -- coefficients from theta_1 up.
Json theta_json(const ChangeOfVariable& theta);
ChangeOfVariable theta_from_json(const Json& j);

Json report_json(const InvariantReport& rep, bool decimal = false);

/// Throws ParseError when `j` is not an object with exactly `keys` plus
/// optionally `optional_keys`.
void require_keys(const Json& j, const std::vector<std::string>& keys,
                  const std::vector<std::string>& optional_keys = {});

} // namespace abmod

#endif
