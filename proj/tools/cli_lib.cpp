#include "cli_lib.hpp"

#include "abmod/errors.hpp"
#include "abmod/verify.hpp"

#include <algorithm>

namespace abmod::cli {

namespace {

const std::vector<std::string> kCommands = {"invariants", "bernstein",  "jh",
                                            "pushforward", "classify", "verify"};

bool looks_like_presentation(const Json& j) { return j.is_object() && j.contains("lambda1"); }
bool looks_like_module(const Json& j) { return j.is_object() && j.contains("action"); }

FrescoPresentation input_presentation(const JobSpec& job) {
    if (looks_like_presentation(job.input)) {
        FrescoPresentation pres = presentation_from_json(job.input);
        if (job.order > 0) {
            if (job.order > pres.order)
                throw ValidationError("cannot extend a presentation beyond its stated order");
            pres.order = job.order;
            for (auto& s : pres.S) s = s.truncated(job.order);
        }
        return pres;
    }
    if (looks_like_module(job.input)) {
        AbModule E = module_from_json(job.input);
        if (job.order > 0) E = E.truncated(std::min(job.order, E.order()));
        return present_fresco(E).pres;
    }
    throw ValidationError("input must be a presentation or a module");
}

AbModule input_module(const JobSpec& job) {
    if (looks_like_module(job.input)) {
        AbModule E = module_from_json(job.input);
        if (job.order > 0) E = E.truncated(std::min(job.order, E.order()));
        return E;
    }
    if (looks_like_presentation(job.input))
        return module_from_presentation(input_presentation(job)).first;
    throw ValidationError("input must be a presentation or a module");
}

Json poly_json(const QPoly& q) {
    Json arr = Json::array();
    for (int i = 0; i <= q.degree(); ++i) arr.push_back(rat_json(q[i]));
    return arr;
}

} // namespace

JobSpec parse_spec(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    require_keys(j, {"command"}, {"input", "theta", "options"});
    JobSpec job;
    job.command = j["command"].get<std::string>();
    if (std::find(kCommands.begin(), kCommands.end(), job.command) == kCommands.end())
        throw ValidationError("unknown command \"" + job.command + "\"");
    if (j.contains("input")) job.input = j["input"];
    if (j.contains("theta")) job.theta = theta_from_json(j["theta"]);
    if (j.contains("options")) {
        const Json& o = j["options"];
        require_keys(o, {}, {"order", "guard", "seed", "suite", "decimal"});
        if (o.contains("order")) job.order = o["order"].get<int>();
        if (o.contains("guard")) job.guard = o["guard"].get<int>();
        if (o.contains("seed")) job.seed = o["seed"].get<uint64_t>();
        if (o.contains("suite")) job.suite = o["suite"].get<std::string>();
        if (o.contains("decimal")) job.decimal = o["decimal"].get<bool>();
    }
    if (job.order < 0) throw ValidationError("order must be positive");
    if (job.command != "verify" && job.input.is_null())
        throw ValidationError("command \"" + job.command + "\" needs an input");
    if (job.command == "pushforward" && !job.theta)
        throw ValidationError("pushforward needs a theta");
    // Eager validation of the payload so malformed jobs fail fast.
    if (!job.input.is_null()) {
        if (looks_like_presentation(job.input))
            (void)presentation_from_json(job.input);
        else if (looks_like_module(job.input))
            (void)module_from_json(job.input);
        else
            throw ValidationError("input must be a presentation or a module");
    }
    return job;
}

Json run_job(const JobSpec& job) {
    Json out;
    out["command"] = job.command;
    if (job.command == "invariants" || job.command == "classify") {
        FrescoPresentation pres = input_presentation(job);
        InvariantReport rep = invariant_report(pres);
        out["report"] = report_json(rep, job.decimal);
        if (job.command == "classify") {
            Json cls;
            if (rep.rank == 2) {
                auto z = rank2_theme_param(module_from_presentation(pres).first);
                cls["kind"] = z ? "rank2-parameter" : "rank2-unique-class";
                if (z) cls["z"] = rat_json(*z);
            } else if (rep.rank == 3) {
                if (rep.d == 1) {
                    cls["kind"] = "rank3-semisimple";
                    try {
                        cls["gamma"] = rat_json(extract_gamma(pres));
                    } catch (const NonUnique&) {
                        cls["gamma"] = nullptr;
                        cls["note"] = "p2 <= 1: single class";
                    }
                } else {
                    cls["kind"] = "rank3-with-subtheme";
                }
            } else {
                cls["kind"] = "rank" + std::to_string(rep.rank);
            }
            auto [E2, g2] = module_from_presentation(pres);
            (void)g2;
            try {
                auto mu = find_L(E2);
                cls["socle_exponent"] = mu ? Json(rat_json(*mu)) : Json(nullptr);
            } catch (const Error&) {
            }
            out["classification"] = cls;
        }
    } else if (job.command == "bernstein") {
        AbModule E = input_module(job);
        int guard = job.guard > 0 ? job.guard : E.rank() + 2;
        SaturationResult sat = saturate_and_bernstein(E, guard);
        Json roots = Json::array();
        for (const auto& r : sat.bernstein.rational_roots()) roots.push_back(rat_json(r));
        out["bernstein"] = poly_json(sat.bernstein);
        out["bernstein_roots"] = roots;
        out["minimal"] = poly_json(sat.minimal);
        out["saturation_depth"] = sat.depth;
    } else if (job.command == "jh") {
        AbModule E = input_module(job);
        JordanHolderData jh = principal_jh(E);
        Json exps = Json::array();
        for (const auto& l : jh.exponents) exps.push_back(rat_json(l));
        out["exponents"] = exps;
        out["presentation"] = presentation_json(present_fresco(E).pres);
    } else if (job.command == "pushforward") {
        FrescoPresentation pres = input_presentation(job);
        out["presentation"] = presentation_json(pushforward(pres, *job.theta));
    } else if (job.command == "verify") {
        std::string suite = job.suite.empty() ? "all" : job.suite;
        VerifySummary sum = run_verify_suite(suite, job.seed);
        out["suite"] = sum.suite;
        out["passed"] = sum.passed();
        out["failed"] = sum.failed();
        Json cases = Json::array();
        for (const auto& c : sum.cases) {
            Json cj;
            cj["id"] = c.id;
            cj["pass"] = c.pass;
            cj["detail"] = c.detail;
            cases.push_back(cj);
        }
        out["cases"] = cases;
    } else {
        throw ValidationError("unknown command \"" + job.command + "\"");
    }
    return out;
}

int verify_exit_status(const Json& report) {
    if (report.contains("failed") && report["failed"].get<int>() > 0) return 1;
    return 0;
}

} // namespace abmod::cli
