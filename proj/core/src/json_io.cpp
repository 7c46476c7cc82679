#include "abmod/json_io.hpp"

#include "abmod/errors.hpp"

#include <algorithm>

namespace abmod {

void require_keys(const Json& j, const std::vector<std::string>& keys,
                  const std::vector<std::string>& optional_keys) {
    if (!j.is_object()) throw ParseError("expected a JSON object");
    for (const auto& k : keys)
        if (!j.contains(k)) throw ParseError("missing field \"" + k + "\"");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (std::find(keys.begin(), keys.end(), k) == keys.end() &&
            std::find(optional_keys.begin(), optional_keys.end(), k) == optional_keys.end())
            throw ParseError("unknown field \"" + k + "\"");
    }
}

Json rat_json(const Rat& q) { return rat_to_string(q); }

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (!j.is_string()) throw ParseError("rationals must be strings like \"p/q\"");
    return parse_rat(j.get<std::string>());
}

Json series_json_bare(const TruncSeries& s) {
    Json arr = Json::array();
    int top = s.order();
    while (top > 1 && s[top - 1] == 0) --top;
    for (int n = 0; n < top; ++n) arr.push_back(rat_json(s[n]));
    return arr;
}

TruncSeries series_from_json_bare(const Json& j, int order) {
    if (!j.is_array()) throw ParseError("series must be an array of rational strings");
    TruncSeries s(order);
    int n = 0;
    for (const auto& c : j) {
        if (n >= order) break;
        s.set(n++, rat_from_json(c));
    }
    return s;
}

Json series_json(const TruncSeries& s) {
    Json j;
    j["order"] = s.order();
    j["coeffs"] = series_json_bare(s);
    return j;
}

TruncSeries series_from_json(const Json& j) {
    require_keys(j, {"order", "coeffs"});
    int order = j["order"].get<int>();
    if (order <= 0) throw ParseError("series order must be positive");
    return series_from_json_bare(j["coeffs"], order);
}

Json ore_json(const OreOperator& op) {
    Json j;
    j["a_degree"] = op.a_degree();
    j["order"] = op.order();
    Json coeffs = Json::array();
    for (int d = 0; d <= op.a_degree(); ++d) coeffs.push_back(series_json_bare(op.coeff(d)));
    j["coeffs"] = coeffs;
    return j;
}

OreOperator ore_from_json(const Json& j) {
    require_keys(j, {"a_degree", "order", "coeffs"});
    int order = j["order"].get<int>();
    if (order <= 0) throw ParseError("operator order must be positive");
    std::vector<TruncSeries> coeffs;
    for (const auto& c : j["coeffs"]) coeffs.push_back(series_from_json_bare(c, order));
    OreOperator op(order, std::move(coeffs));
    if (op.a_degree() != j["a_degree"].get<int>() && !op.is_zero())
        throw ParseError("a_degree does not match the coefficient list");
    return op;
}

Json presentation_json(const FrescoPresentation& pres) {
    Json j;
    j["lambda1"] = rat_json(pres.lambda1);
    j["p"] = pres.p;
    Json S = Json::array();
    for (const auto& s : pres.S) S.push_back(series_json_bare(s));
    j["S"] = S;
    j["order"] = pres.order;
    return j;
}

FrescoPresentation presentation_from_json(const Json& j) {
    require_keys(j, {"lambda1", "p", "S", "order"});
    FrescoPresentation pres;
    pres.order = j["order"].get<int>();
    if (pres.order <= 0) throw ParseError("presentation order must be positive");
    pres.lambda1 = rat_from_json(j["lambda1"]);
    for (const auto& g : j["p"]) {
        if (!g.is_number_integer()) throw ParseError("gaps p must be integers");
        pres.p.push_back(g.get<int>());
    }
    for (const auto& s : j["S"]) pres.S.push_back(series_from_json_bare(s, pres.order));
    try {
        pres.validate();
    } catch (const ValidationError&) {
        throw;
    }
    return pres;
}

Json module_json(const AbModule& E) {
    Json j;
    j["rank"] = E.rank();
    j["order"] = E.order();
    Json action = Json::array();
    for (int col = 0; col < E.rank(); ++col) {
        Json c = Json::array();
        for (int row = 0; row < E.rank(); ++row) c.push_back(series_json_bare(E.action(row, col)));
        action.push_back(c);
    }
    j["action"] = action;
    return j;
}

AbModule module_from_json(const Json& j) {
    require_keys(j, {"rank", "order", "action"});
    int rank = j["rank"].get<int>();
    int order = j["order"].get<int>();
    if (rank <= 0 || order <= 0) throw ParseError("rank and order must be positive");
    const Json& action = j["action"];
    if (!action.is_array() || static_cast<int>(action.size()) != rank)
        throw ParseError("action must list one column per basis vector");
    AbModule E(rank, order);
    for (int col = 0; col < rank; ++col) {
        const Json& c = action[static_cast<size_t>(col)];
        if (!c.is_array() || static_cast<int>(c.size()) != rank)
            throw ParseError("action columns must have `rank` entries");
        for (int row = 0; row < rank; ++row)
            E.set_action(row, col, series_from_json_bare(c[static_cast<size_t>(row)], order));
    }
    return E;
}

Json theta_json(const ChangeOfVariable& theta) {
    Json j;
    Json arr = Json::array();
    for (const auto& c : theta.coeffs) arr.push_back(rat_json(c));
    j["theta"] = arr;
    return j;
}

ChangeOfVariable theta_from_json(const Json& j) {
    const Json* arr = nullptr;
    if (j.is_array()) {
        arr = &j;
    } else {
        require_keys(j, {"theta"});
        arr = &j["theta"];
    }
    ChangeOfVariable theta;
    for (const auto& c : *arr) theta.coeffs.push_back(rat_from_json(c));
    if (theta.coeffs.empty() || theta.coeffs.front() == 0)
        throw ValidationError("theta_1 must be nonzero");
    return theta;
}

Json report_json(const InvariantReport& rep, bool decimal) {
    Json j;
    j["rank"] = rep.rank;
    j["lambda1"] = rat_json(rep.lambda1);
    j["p"] = rep.p;
    Json roots = Json::array();
    for (const auto& r : rep.bernstein_roots) roots.push_back(rat_json(r));
    j["bernstein_roots"] = roots;
    j["delta"] = rep.delta;
    j["d"] = rep.d;
    auto opt_arr = [&](const std::vector<std::optional<Rat>>& v) {
        Json arr = Json::array();
        for (const auto& x : v) {
            if (x)
                arr.push_back(rat_json(*x));
            else
                arr.push_back(nullptr);
        }
        return arr;
    };
    j["z_params"] = opt_arr(rep.z_params);
    j["gamma_params"] = opt_arr(rep.gamma_params);
    if (rep.cross_ratio_value)
        j["cross_ratio"] = rat_json(*rep.cross_ratio_value);
    else
        j["cross_ratio"] = nullptr;
    j["flags"] = rep.flags;
    if (decimal) {
        Json dec;
        dec["lambda1"] = rat_to_decimal(rep.lambda1);
        Json droots = Json::array();
        for (const auto& r : rep.bernstein_roots) droots.push_back(rat_to_decimal(r));
        dec["bernstein_roots"] = droots;
        j["decimal"] = dec;
    }
    return j;
}

} // namespace abmod
