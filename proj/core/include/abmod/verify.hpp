#ifndef ABMOD_VERIFY_HPP
#define ABMOD_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace abmod {

struct VerifyCase {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct VerifySummary {
    std::string suite;
    std::vector<VerifyCase> cases;
    int passed() const;
    int failed() const;
};

/// Named property suites: algebra, commuting, bernstein, pushforward, rank2,
/// rank3, crossratio, example35, all. Deterministic in the seed; cases come
/// back sorted by id.
VerifySummary run_verify_suite(const std::string& name, uint64_t seed);

std::vector<std::string> verify_suite_names();

} // namespace abmod

#endif
