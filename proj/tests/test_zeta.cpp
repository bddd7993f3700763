#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "zeta1d/parser.hpp"
#include "zeta1d/zeta.hpp"

using namespace zeta1d;

namespace {

long count_adjusts(const ZetaFactorization& f, const mpz_class& size, int exponent) {
    long count = 0;
    for (const auto& a : f.adjusts)
        if (a.size == size && a.exponent == exponent) ++count;
    return count;
}

} // namespace

TEST_SUITE("zeta_engine") {

TEST_CASE("factorization of the glued fiber-product scheme") {
    SchemeExpr e = parse("glue(remove(SpecZ;2)@p=3, A1(3)@deg=1)");
    ZetaFactorization f = factorize(e);
    REQUIRE(f.l_factors.size() == 1);
    CHECK(f.l_factors[0].chi.is_trivial());
    REQUIRE(f.curve_factors.size() == 1);
    CHECK(f.curve_factors[0].numerator == std::vector<mpz_class>{mpz_class(1)});
    // adjustments: (1-2^-s) and, after cancellation, (1-3^-s) twice ... one from
    // the A1 representation, one from the glue
    CHECK(count_adjusts(f, 2, +1) == 1);
    CHECK(count_adjusts(f, 3, +1) == 2);
    CHECK(f.adjusts.size() == 3);
}

TEST_CASE("factorization of unions and split-prime removals") {
    ZetaFactorization f =
        factorize(parse("union(SpecF(2), SpecF(3))"));
    CHECK(f.l_factors.empty());
    CHECK(count_adjusts(f, 2, -1) == 1);
    CHECK(count_adjusts(f, 3, -1) == 1);

    // 5 splits in Q(i): two points of norm 5
    f = factorize(parse("remove(SpecOF(Quad(-4)); 5)"));
    CHECK(f.l_factors.size() == 2);
    CHECK(count_adjusts(f, 5, +1) == 2);

    // 3 is inert in Q(i): one point of norm 9
    f = factorize(parse("remove(SpecOF(Quad(-4)); 3)"));
    CHECK(count_adjusts(f, 9, +1) == 1);
}

TEST_CASE("eager cancellation of inverse adjustment pairs") {
    // glue SpecF(3) to A1(3): the glue factor (1-3^-s) cancels the SpecF(3)
    // factor (1-3^-s)^-1
    ZetaFactorization f = factorize(parse("glue(SpecF(3)@deg=1, A1(3)@deg=1)"));
    CHECK(count_adjusts(f, 3, -1) == 0);
    CHECK(count_adjusts(f, 3, +1) == 1); // only the A1 point compensation remains
}

TEST_CASE("special values match the worked examples") {
    CHECK(special_value(factorize(parse("SpecZ")), -3, ValueMode::Exact).exact ==
          mpq_class(1, 120));
    CHECK(special_value(factorize(parse("SpecF(2)")), -1, ValueMode::Exact).exact ==
          mpq_class(-1));
    CHECK(special_value(factorize(parse("glue(remove(SpecZ;2)@p=3, A1(3)@deg=1)")), -3,
                        ValueMode::Exact)
              .exact == mpq_class(-91, 4800));
    // A1(q) at n: 1/(1-q^(1-n))
    CHECK(special_value(factorize(parse("A1(3)")), -3, ValueMode::Exact).exact ==
          mpq_class(-1, 80));
}

TEST_CASE("zeta order agrees with the archimedean formula on a field grid") {
    const char* grid[] = {
        "SpecZ",
        "SpecOF(Quad(5))",
        "SpecOF(Quad(8))",
        "SpecOF(Quad(12))",
        "SpecOF(Quad(-4))",
        "SpecOF(Quad(-20))",
        "SpecOF(Cyclo(5))",
        "SpecOF(Cyclo(7))",
        "SpecOF(Cyclo(8))",
        "SpecOF(Cyclo(12))",
        "SpecOF(CycloPlus(7))",
        "A1(3)",
        "Curve(3; 1)",
        "Curve(2; 1, 1, 2)",
    };
    for (const char* text : grid) {
        SchemeExpr e = parse(text);
        ZetaFactorization f = factorize(e);
        for (long n = -6; n <= -1; ++n)
            CHECK(zeta_order(f, n) == vanishing_order(e, n));
    }
    CHECK(zeta_order(factorize(parse("SpecOF(Cyclo(5))")), -1) == 2);
}

TEST_CASE("multiplicativity over disjoint unions") {
    std::mt19937 rng(31337);
    for (int i = 0; i < 40; ++i) {
        SchemeExpr a = normalize(oracles::random_scheme(rng, 1, true));
        SchemeExpr b = normalize(oracles::random_scheme(rng, 1, true));
        SchemeExpr u = normalize(SchemeExpr::disjoint({a, b}));
        long n = -3;
        if (vanishing_order(u, n) != 0) continue;
        mpq_class va = special_value(factorize(a), n, ValueMode::Exact).exact;
        mpq_class vb = special_value(factorize(b), n, ValueMode::Exact).exact;
        mpq_class vu = special_value(factorize(u), n, ValueMode::Exact).exact;
        CHECK(vu == va * vb);
    }
}

TEST_CASE("removal and re-glue round trip in the adjustment algebra") {
    // Gluing Spec F_3 onto the fiber over 3 cancels against the glue
    // correction, so the factorization returns to that of remove(SpecZ; 2).
    ZetaFactorization base = factorize(parse("remove(SpecZ; 2)"));
    ZetaFactorization round =
        factorize(parse("glue(remove(SpecZ;2)@p=3, SpecF(3)@deg=1)"));
    REQUIRE(round.l_factors.size() == base.l_factors.size());
    for (std::size_t i = 0; i < base.l_factors.size(); ++i)
        CHECK(base.l_factors[i].chi == round.l_factors[i].chi);
    CHECK(round.curve_factors.empty());
    auto key = [](const ZetaFactorization& f) {
        std::multiset<std::pair<std::string, int>> m;
        for (const auto& a : f.adjusts) m.insert({a.size.get_str(), a.exponent});
        return m;
    };
    CHECK(key(round) == key(base));
}

TEST_CASE("exact and numeric modes agree at 128 bits") {
    const char* grid[] = {
        "SpecZ",
        "SpecOF(Quad(5))",
        "SpecOF(Quad(-4))",
        "SpecOF(Cyclo(5))",
        "union(SpecF(4), A1(3))",
        "glue(remove(SpecZ;2)@p=3, A1(3)@deg=1)",
    };
    for (const char* text : grid) {
        SchemeExpr e = parse(text);
        ZetaFactorization f = factorize(e);
        for (long n = -4; n <= -1; ++n) {
            if (zeta_order(f, n) != 0) continue;
            SpecialValue exact = special_value(f, n, ValueMode::Exact);
            SpecialValue numeric = special_value(f, n, ValueMode::Numeric, 128);
            CHECK(numeric.numeric.contains(exact.exact));
            CHECK(numeric.sign_known);
            CHECK(numeric.sign() == exact.sign());
        }
    }
}

TEST_CASE("numeric mode handles vanishing L-factors") {
    SpecialValue sv = special_value(factorize(parse("SpecZ")), -2, ValueMode::Numeric, 128);
    CHECK(sv.order == 1);
    CHECK(sv.mode == ValueMode::Numeric);
    CHECK(sv.numeric.is_nonzero());
    CHECK(sv.sign() < 0); // zeta'(-2) < 0
    CHECK_THROWS_AS(special_value(factorize(parse("SpecZ")), -2, ValueMode::Exact), Error);
}

TEST_CASE("curve factors never vanish at negative integers") {
    std::mt19937 rng(777);
    for (int i = 0; i < 60; ++i) {
        long q = (i % 3 == 0) ? 2 : ((i % 3 == 1) ? 3 : 5);
        auto numerator = oracles::random_weil_numerator(q, 1 + i % 3, rng);
        for (long n = -6; n <= -1; ++n) {
            mpq_class v = curve_factor_value(q, numerator, n);
            CHECK(v != 0);
        }
    }
}

TEST_CASE("exact special value of a real quadratic field at odd weight") {
    // zeta_{Q(sqrt 5)}(-1) = zeta(-1) L(-1, chi_5) = (-1/12)(-2/5) = 1/30
    SpecialValue sv = special_value(factorize(parse("SpecOF(Quad(5))")), -1, ValueMode::Exact);
    CHECK(sv.exact == mpq_class(1, 30));
}

TEST_CASE("complex vanishing pairs multiply to a real enclosure") {
    // At n = -1 the two odd quartic characters mod 5 vanish; their derivative
    // values are complex conjugates and the assembled special value is real.
    SpecialValue sv =
        special_value(factorize(parse("SpecOF(Cyclo(5))")), -1, ValueMode::Numeric, 128);
    CHECK(sv.order == 2);
    CHECK(sv.numeric.is_nonzero());
    CHECK(sv.numeric.meets_tolerance(120));
    // and the same at higher precision agrees
    SpecialValue hi =
        special_value(factorize(parse("SpecOF(Cyclo(5))")), -1, ValueMode::Numeric, 320);
    CHECK(sv.numeric.overlaps(hi.numeric));
}

} // TEST_SUITE
