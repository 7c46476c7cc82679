#include "abmod/rational.hpp"

#include "abmod/errors.hpp"

#include <cctype>
#include <sstream>

namespace abmod {

Rat parse_rat(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    for (char ch : text) {
        if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '/' && ch != '-' && ch != '+')
            throw ParseError("invalid character in rational literal: \"" + text + "\"");
    }
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw ParseError("malformed rational literal: \"" + text + "\"");
    if (q.get_den() == 0)
        throw ParseError("zero denominator in rational literal: \"" + text + "\"");
    q.canonicalize();
    return q;
}

std::string rat_to_string(const Rat& q) {
    return q.get_str();
}

std::string rat_to_decimal(const Rat& q, int digits) {
    mpf_class f(q, 64 + 4 * digits);
    mp_exp_t exp;
    std::string mant = f.get_str(exp, 10, digits);
    if (mant.empty()) return "0";
    std::ostringstream out;
    bool neg = mant[0] == '-';
    if (neg) mant.erase(0, 1);
    out << (neg ? "-" : "") << "0." << mant << "e" << exp;
    return out.str();
}

bool is_integer(const Rat& q) {
    return q.get_den() == 1;
}

long floor_long(const Rat& q) {
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return z.get_si();
}

} // namespace abmod
