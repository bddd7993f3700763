#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "zeta1d/dirichlet.hpp"
#include "zeta1d/parser.hpp"
#include "zeta1d/scheme.hpp"

using namespace zeta1d;

TEST_SUITE("scheme") {

TEST_CASE("fundamental discriminant predicate matches brute force") {
    auto expected = oracles::fundamental_discriminants_upto(100);
    for (long d = -100; d <= 100; ++d)
        CHECK(is_fundamental_discriminant(d) == (expected.count(d) > 0));
    // spot values: 12 = 4*3 with 3 = 3 mod 4 is fundamental; 9 is not
    CHECK(is_fundamental_discriminant(12));
    CHECK(is_fundamental_discriminant(5));
    CHECK(is_fundamental_discriminant(8));
    CHECK(is_fundamental_discriminant(-4));
    CHECK_FALSE(is_fundamental_discriminant(9));
    CHECK_FALSE(is_fundamental_discriminant(1));
}

TEST_CASE("field validation") {
    CHECK_NOTHROW(normalize(SchemeExpr::number_ring(FieldSpec::quadratic(12))));
    CHECK_NOTHROW(normalize(SchemeExpr::number_ring(FieldSpec::quadratic(5))));
    CHECK_NOTHROW(normalize(SchemeExpr::number_ring(FieldSpec::quadratic(8))));
    CHECK_THROWS_AS(normalize(SchemeExpr::number_ring(FieldSpec::quadratic(9))), Error);
    CHECK_THROWS_AS(normalize(SchemeExpr::number_ring(FieldSpec::cyclotomic(6))), Error);
    CHECK_THROWS_AS(normalize(SchemeExpr::number_ring(FieldSpec::abelian(8, {2}))), Error);
    CHECK_THROWS_AS(normalize(SchemeExpr::spec_fq(6)), Error);
    CHECK_THROWS_AS(normalize(SchemeExpr::spec_fq(1)), Error);
    CHECK_NOTHROW(normalize(SchemeExpr::spec_fq(343))); // 7^3
}

TEST_CASE("normalize flattens unions") {
    SchemeExpr nested = SchemeExpr::disjoint(
        {SchemeExpr::disjoint({SchemeExpr::spec_fq(2)}), SchemeExpr::spec_fq(3)});
    SchemeExpr flat = normalize(nested);
    auto* dj = flat.get_if<DisjointTerm>();
    REQUIRE(dj != nullptr);
    CHECK(dj->parts.size() == 2);
    CHECK(normalize(SchemeExpr::disjoint({SchemeExpr::spec_fq(2)})) == SchemeExpr::spec_fq(2));
}

TEST_CASE("normalize is idempotent on random expressions") {
    std::mt19937 rng(123456);
    for (int i = 0; i < 200; ++i) {
        SchemeExpr e = oracles::random_scheme(rng, 3, false);
        SchemeExpr n1 = normalize(e);
        SchemeExpr n2 = normalize(n1);
        CHECK(n1 == n2);
    }
}

TEST_CASE("glue resolution on the fiber-product example") {
    SchemeExpr glued = SchemeExpr::glue(
        SchemeExpr::number_ring(FieldSpec::rationals(), {2}), PointSel::fiber_over(3),
        SchemeExpr::affine_line(3), PointSel::curve_point(1));
    SchemeExpr norm = normalize(glued);
    auto* gl = norm.get_if<GlueTerm>();
    REQUIRE(gl != nullptr);
    CHECK(gl->left_sel.residue_size == 3);
    CHECK(gl->right_sel.residue_size == 3);
}

TEST_CASE("glue mismatch and missing points are rejected") {
    // residue sizes 3 vs 2
    CHECK_THROWS_AS(normalize(SchemeExpr::glue(
                        SchemeExpr::number_ring(FieldSpec::rationals()), PointSel::fiber_over(3),
                        SchemeExpr::affine_line(2), PointSel::curve_point(1))),
                    Error);
    // gluing at a removed fiber
    try {
        normalize(SchemeExpr::glue(SchemeExpr::number_ring(FieldSpec::rationals(), {3}),
                                   PointSel::fiber_over(3), SchemeExpr::affine_line(3),
                                   PointSel::curve_point(1)));
        FAIL("expected MissingPoint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrCode::MissingPoint);
    }
    // point index beyond g: 5 = (2+i)(2-i) has two points, index 2 is absent
    try {
        normalize(SchemeExpr::glue(SchemeExpr::number_ring(FieldSpec::quadratic(-4)),
                                   PointSel::fiber_over(5, 2), SchemeExpr::affine_line(5),
                                   PointSel::curve_point(1)));
        FAIL("expected MissingPoint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrCode::MissingPoint);
    }
    // glue with matched split-prime residue size works: index 1 exists
    CHECK_NOTHROW(normalize(SchemeExpr::glue(SchemeExpr::number_ring(FieldSpec::quadratic(-4)),
                                             PointSel::fiber_over(5, 1),
                                             SchemeExpr::affine_line(5),
                                             PointSel::curve_point(1))));
    // union operands cannot carry a selection
    CHECK_THROWS_AS(
        normalize(SchemeExpr::glue(
            SchemeExpr::disjoint({SchemeExpr::spec_fq(3), SchemeExpr::spec_fq(5)}),
            PointSel::curve_point(1), SchemeExpr::affine_line(3), PointSel::curve_point(1))),
        Error);
}

TEST_CASE("archimedean profiles") {
    PlaceProfile p = archimedean_profile(SchemeExpr::number_ring(FieldSpec::rationals()));
    CHECK(p.r1 == 1);
    CHECK(p.r2 == 0);

    p = archimedean_profile(SchemeExpr::number_ring(FieldSpec::cyclotomic(5)));
    CHECK(p.r1 == 0);
    CHECK(p.r2 == 2);

    p = archimedean_profile(SchemeExpr::disjoint(
        {SchemeExpr::number_ring(FieldSpec::rationals()), SchemeExpr::affine_line(3)}));
    CHECK(p.r1 == 1);
    CHECK(p.r2 == 0);
    CHECK(p.generic_chars.size() == 2);
}

TEST_CASE("r1 + 2 r2 equals the character-group order") {
    for (FieldSpec f : {FieldSpec::rationals(), FieldSpec::quadratic(-3),
                        FieldSpec::quadratic(13), FieldSpec::cyclotomic(9),
                        FieldSpec::cyclotomic_real(11), FieldSpec::abelian(16, {15}),
                        FieldSpec::abelian(21, {2})}) {
        long degree = static_cast<long>(character_group(f).chars.size());
        CHECK(f.r1() + 2 * f.r2() == degree);
    }
}

TEST_CASE("vanishing order and delta") {
    SchemeExpr q = SchemeExpr::number_ring(FieldSpec::rationals());
    CHECK(vanishing_order(q, -2) == 1);
    CHECK(delta(q, -2) == 1);
    CHECK(delta(q, -3) == 0);
    SchemeExpr qi = SchemeExpr::number_ring(FieldSpec::quadratic(-4));
    CHECK(vanishing_order(qi, -3) == 1);
    CHECK(delta(qi, -2) == 0);
    CHECK(vanishing_order(SchemeExpr::spec_fq(5), -7) == 0);
    CHECK_THROWS_AS(vanishing_order(q, 0), Error);
    CHECK_THROWS_AS(delta(q, 1), Error);
}

TEST_CASE("vanishing order is additive and removal/glue invariant") {
    std::mt19937 rng(987);
    for (int i = 0; i < 100; ++i) {
        SchemeExpr e = normalize(oracles::random_scheme(rng, 3, false));
        for (long n : {-1L, -2L, -5L}) {
            if (auto* dj = e.get_if<DisjointTerm>()) {
                long total = 0;
                for (const auto& part : dj->parts) total += vanishing_order(part, n);
                CHECK(total == vanishing_order(e, n));
            }
            if (auto* gl = e.get_if<GlueTerm>()) {
                CHECK(vanishing_order(*gl->left, n) + vanishing_order(*gl->right, n) ==
                      vanishing_order(e, n));
            }
        }
    }
    // removing fibers does not change the vanishing order
    SchemeExpr base = SchemeExpr::number_ring(FieldSpec::quadratic(-4));
    SchemeExpr removed = SchemeExpr::number_ring(FieldSpec::quadratic(-4), {2, 5, 13});
    for (long n = -6; n <= -1; ++n)
        CHECK(vanishing_order(base, n) == vanishing_order(removed, n));
}

TEST_CASE("curve point counts and removal existence") {
    // P^1 over F_q: q + 1 rational points
    auto counts = curve_point_counts(4, {mpz_class(1)}, 3);
    CHECK(counts[1] == 5);
    // spec example numerator 1 + T + 2T^2 over F_2
    auto c2 = curve_point_counts(2, {mpz_class(1), mpz_class(1), mpz_class(2)}, 4);
    CHECK(c2[1] == 4); // q + 1 - p_1 with p_1 = -1
    // removing five degree-1 points from P^1(F_2) (which has 3) fails
    CHECK_THROWS_AS(
        normalize(SchemeExpr::curve(2, {mpz_class(1)}, {1, 1, 1, 1, 1})),
        Error);
    CHECK_NOTHROW(normalize(SchemeExpr::curve(2, {mpz_class(1)}, {1, 1, 1})));
}

TEST_CASE("curve numerator shape validation") {
    // odd degree
    CHECK_THROWS_AS(normalize(SchemeExpr::curve(2, {mpz_class(1), mpz_class(1)})), Error);
    // constant term != 1
    CHECK_THROWS_AS(normalize(SchemeExpr::curve(2, {mpz_class(2), mpz_class(1), mpz_class(2)})),
                    Error);
    // broken functional-equation symmetry: c_2 must equal q
    CHECK_THROWS_AS(normalize(SchemeExpr::curve(2, {mpz_class(1), mpz_class(1), mpz_class(1)})),
                    Error);
    // Weil trace bound: |c_1| <= 2 sqrt(2)
    CHECK_THROWS_AS(normalize(SchemeExpr::curve(2, {mpz_class(1), mpz_class(7), mpz_class(2)})),
                    Error);
    CHECK_NOTHROW(normalize(SchemeExpr::curve(2, {mpz_class(1), mpz_class(1), mpz_class(2)})));
}

TEST_CASE("random Weil numerators pass shape validation") {
    std::mt19937 rng(5150);
    for (int i = 0; i < 50; ++i) {
        long q = (i % 2 == 0) ? 2 : 5;
        auto numerator = oracles::random_weil_numerator(q, 1 + i % 3, rng);
        CHECK_NOTHROW(normalize(SchemeExpr::curve(q, numerator)));
    }
    // genus-1 numerators come from honest elliptic curves: counts stay >= 0
    for (int i = 0; i < 30; ++i) {
        long q = (i % 2 == 0) ? 2 : 5;
        auto numerator = oracles::random_weil_numerator(q, 1, rng);
        auto counts = curve_point_counts(q, numerator, 6);
        for (long d = 1; d <= 6; ++d) CHECK(counts[static_cast<std::size_t>(d)] >= 0);
    }
}

} // TEST_SUITE
