#ifndef ABMOD_CLI_LIB_HPP
#define ABMOD_CLI_LIB_HPP

#include "abmod/json_io.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace abmod::cli {

struct JobSpec {
    std::string command; // invariants | bernstein | jh | pushforward | classify | verify
    Json input;
    std::optional<ChangeOfVariable> theta;
    int order = 0; // 0 = take the input's order
    int guard = 0; // 0 = rank + 2
    uint64_t seed = 1;
    std::string suite;
    bool decimal = false;
};

/// Parses and validates a JSON job description. Throws ParseError on
/// malformed text or unknown fields, ValidationError on bad values.
JobSpec parse_spec(const std::string& text);

/// Runs one job and produces its deterministic JSON report.
/// Mathematical failures surface as abmod::Error; the caller maps them to
/// exit status 1 (usage problems map to 2).
Json run_job(const JobSpec& job);

/// Exit status for a completed verify job (1 when any case failed).
int verify_exit_status(const Json& report);

} // namespace abmod::cli

#endif
