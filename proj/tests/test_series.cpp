#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "abmod/errors.hpp"
#include "abmod/series.hpp"

using namespace abmod;

namespace {

struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    Rat rat() {
        long num = static_cast<long>(next() % 9) - 4;
        long den = static_cast<long>(next() % 3) + 1;
        return rat_of(num, den);
    }
    TruncSeries series(int order) {
        TruncSeries r(order);
        for (int n = 0; n < order; ++n) r.set(n, rat());
        return r;
    }
};

} // namespace

TEST_CASE("rational parsing and canonical form") {
    Rat q = parse_rat("-6/4");
    CHECK(rat_to_string(q) == "-3/2");
    CHECK(q.get_den() == 2);
    CHECK_THROWS_AS(parse_rat("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rat("x"), ParseError);
    CHECK(rat_to_string(parse_rat("7")) == "7");
    CHECK(floor_long(rat_of(17, 2) - rat_of(7, 2)) == 5);
    CHECK(floor_long(rat_of(-3, 2)) == -2);
}

TEST_CASE("product examples") {
    int N = 8;
    TruncSeries onep(N), onem(N);
    onep.set(0, Rat(1));
    onep.set(1, Rat(1));
    onem.set(0, Rat(1));
    onem.set(1, Rat(-1));
    // (1+b)(1-b) = 1 - b^2
    TruncSeries want(N);
    want.set(0, Rat(1));
    want.set(2, Rat(-1));
    CHECK(onep * onem == want);

    // geometric sum times (1-b) telescopes to 1
    TruncSeries geo(N);
    for (int n = 0; n < N; ++n) geo.set(n, Rat(1));
    CHECK(geo * onem == TruncSeries::one(N));

    // (1+2b)(1+3b) = 1+5b+6b^2, convolved by hand
    TruncSeries a(N), b(N), c(N);
    a.set(0, Rat(1));
    a.set(1, Rat(2));
    b.set(0, Rat(1));
    b.set(1, Rat(3));
    c.set(0, Rat(1));
    c.set(1, Rat(5));
    c.set(2, Rat(6));
    CHECK(a * b == c);
}

TEST_CASE("ring laws on random series") {
    Rng rng(42);
    for (int t = 0; t < 25; ++t) {
        TruncSeries x = rng.series(16), y = rng.series(16), z = rng.series(16);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * y == y * x);
        CHECK(x * (y + z) == x * y + x * z);
    }
}

TEST_CASE("inverse") {
    int N = 10;
    TruncSeries onem(N);
    onem.set(0, Rat(1));
    onem.set(1, Rat(-1));
    TruncSeries inv = series_inv(onem);
    for (int n = 0; n < N; ++n) CHECK(inv[n] == 1); // geometric series
    CHECK(series_inv(TruncSeries(N, Rat(2)))[0] == rat_of(1, 2));
    CHECK_THROWS_AS(series_inv(TruncSeries::monomial(N, 1, Rat(1))), NotAUnit);

    Rng rng(7);
    for (int t = 0; t < 10; ++t) {
        TruncSeries u = rng.series(14);
        u.set(0, rng.rat() + 5); // force a unit
        CHECK(u * series_inv(u) == TruncSeries::one(14));
        CHECK(series_inv(u) * u == TruncSeries::one(14));
    }
}

TEST_CASE("exponential") {
    int N = 9;
    CHECK(series_exp(TruncSeries(N)) == TruncSeries::one(N));
    TruncSeries b = TruncSeries::monomial(N, 1, Rat(1));
    TruncSeries e = series_exp(b);
    // coefficients are 1/n!
    Rat f(1);
    for (int n = 0; n < N; ++n) {
        if (n > 0) f /= n;
        CHECK(e[n] == f);
    }
    TruncSeries bb = b + TruncSeries::monomial(N, 2, Rat(1));
    CHECK(series_exp(bb)[2] == rat_of(3, 2)); // (b+b^2) + (b+b^2)^2/2 at b^2
    CHECK_THROWS_AS(series_exp(TruncSeries::one(N)), NonzeroConstantTerm);
}

TEST_CASE("euler equation solver") {
    int N = 12;
    // c=2, F=-2(1+b): U = 1+2b
    TruncSeries F(N);
    F.set(0, Rat(-2));
    F.set(1, Rat(-2));
    TruncSeries U = solve_linear_b_ode(Rat(2), F, Rat(0));
    TruncSeries want(N);
    want.set(0, Rat(1));
    want.set(1, Rat(2));
    CHECK(U == want);

    // constant solution of b.U' = p.(U-1)
    for (int p : {1, 3, 5}) {
        TruncSeries Fp(N, Rat(-p));
        CHECK(solve_linear_b_ode(Rat(p), Fp, Rat(0)) == TruncSeries::one(N));
    }

    // resonance with nonzero F_1
    CHECK_THROWS_AS(solve_linear_b_ode(Rat(1), TruncSeries::monomial(N, 1, Rat(1))), Obstruction);
}

TEST_CASE("euler solutions substituted back and solution-space dimension") {
    Rng rng(99);
    for (int t = 0; t < 12; ++t) {
        int N = 14;
        Rat c = rng.rat();
        bool resonant = is_integer(c) && c >= 0 && c < N;
        TruncSeries F = rng.series(N);
        if (resonant) F.set(static_cast<int>(floor_long(c)), Rat(0));
        TruncSeries U = solve_linear_b_ode(c, F, rng.rat());
        CHECK(U.b_derivative() - c * U == F);
        if (resonant) {
            TruncSeries U2 = solve_linear_b_ode(c, F, rng.rat() + 7);
            TruncSeries diff = U2 - U;
            // two solutions differ exactly by a multiple of b^c
            for (int n = 0; n < N; ++n)
                if (n != floor_long(c)) CHECK(diff[n] == 0);
        }
    }
}

TEST_CASE("b-preserving derivative primitives") {
    Rng rng(5);
    TruncSeries s = rng.series(10);
    TruncSeries bd = s.b_derivative();
    TruncSeries b2d = s.b2_derivative();
    for (int n = 0; n < 10; ++n) {
        CHECK(bd[n] == Rat(n) * s[n]);
        CHECK(b2d[n] == (n >= 1 ? Rat(n - 1) * s[n - 1] : Rat(0)));
    }
}

TEST_CASE("mixed-order operations truncate to the minimum") {
    TruncSeries a = TruncSeries::one(10);
    TruncSeries b = TruncSeries::one(6);
    CHECK((a * b).order() == 6);
    CHECK((a + b).order() == 6);
    // equality compares up to the common order
    TruncSeries c = TruncSeries::one(10);
    c.set(8, Rat(3));
    CHECK(c == b);
}
