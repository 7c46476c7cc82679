#ifndef ABMOD_ERRORS_HPP
#define ABMOD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace abmod {

// Base of all computational errors. `code()` is stable and machine-readable;
// the CLI maps it into reports and exit status 1.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct NotAUnit : Error {
    explicit NotAUnit(const std::string& what = "element is not a unit")
        : Error("NotAUnit", what) {}
};

struct NonzeroConstantTerm : Error {
    explicit NonzeroConstantTerm(const std::string& what = "constant term must vanish")
        : Error("NonzeroConstantTerm", what) {}
};

// Euler equation b.U' - c.U = F with c a natural number below the working
// order and F_c != 0: no formal solution exists.
struct Obstruction : Error {
    explicit Obstruction(long index, const std::string& what = "")
        : Error("Obstruction",
                what.empty() ? "resonant coefficient at b^" + std::to_string(index) +
                                   " does not vanish"
                             : what),
          index(index) {}
    long index;
};

struct NotMonic : Error {
    explicit NotMonic(const std::string& what = "divisor must be monic in a")
        : Error("NotMonic", what) {}
};

struct NotAGenerator : Error {
    explicit NotAGenerator(const std::string& what = "vector does not generate the module")
        : Error("NotAGenerator", what) {}
};

struct NotAFresco : Error {
    explicit NotAFresco(const std::string& what = "module is not a fresco at working order")
        : Error("NotAFresco", what) {}
};

struct NotNormal : Error {
    explicit NotNormal(const std::string& what = "vector lies in b.E, span is not normal")
        : Error("NotNormal", what) {}
};

struct NotStable : Error {
    explicit NotStable(const std::string& what = "line is not stable under a")
        : Error("NotStable", what) {}
};

struct InsufficientOrder : Error {
    explicit InsufficientOrder(const std::string& what = "truncation order too small")
        : Error("InsufficientOrder", what) {}
};

struct NotRegular : Error {
    explicit NotRegular(const std::string& what = "saturation did not stabilize within the guard budget")
        : Error("NotRegular", what) {}
};

struct WrongShape : Error {
    explicit WrongShape(const std::string& what = "action does not have the required shape")
        : Error("WrongShape", what) {}
};

struct WrongRank : Error {
    explicit WrongRank(const std::string& what = "module has the wrong rank for this operation")
        : Error("WrongRank", what) {}
};

struct NotSemisimple : Error {
    explicit NotSemisimple(const std::string& what = "module is not semi-simple")
        : Error("NotSemisimple", what) {}
};

struct NonUnique : Error {
    explicit NonUnique(const std::string& what = "parameter is not uniquely determined")
        : Error("NonUnique", what) {}
};

struct Degenerate : Error {
    explicit Degenerate(const std::string& what = "degenerate configuration")
        : Error("Degenerate", what) {}
};

struct SearchExhausted : Error {
    explicit SearchExhausted(const std::string& what = "no candidate satisfied the criterion")
        : Error("SearchExhausted", what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error("ValidationError", what) {}
};

} // namespace abmod

#endif
