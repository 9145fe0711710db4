#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nullcurve/errors.hpp"
#include "nullcurve/rational_map.hpp"

using namespace nullcurve;

TEST_CASE("gaussian rational arithmetic") {
    GaussQ a(mpq_class(1, 2), mpq_class(3));
    GaussQ b(mpq_class(2), mpq_class(-1, 3));
    GaussQ prod = a * b;
    CHECK(prod.re == mpq_class(2));                       // 1/2*2 - 3*(-1/3) = 2
    CHECK(prod.im == mpq_class(1, 2) * mpq_class(-1, 3) + mpq_class(3) * mpq_class(2));
    CHECK(a / a == GaussQ(1));
    CHECK((a * a.inverse()) == GaussQ(1));
    CHECK(GaussQ::unit_i() * GaussQ::unit_i() == GaussQ(-1));
}

TEST_CASE("rational sqrt lower bound") {
    mpq_class four(4);
    CHECK(rational_sqrt_lower(four) == 2);
    mpq_class two(2);
    mpq_class r = rational_sqrt_lower(two);
    CHECK(r * r <= two);
    CHECK((r + mpq_class(1, 1 << 20)) * (r + mpq_class(1, 1 << 20)) > two);
    CHECK(rational_sqrt_lower(mpq_class(0)) == 0);
}

TEST_CASE("polynomial gcd and division") {
    Polynomial z = Polynomial::variable();
    Polynomial p = (z - Polynomial(GaussQ(1))) * (z - Polynomial(GaussQ(2)));
    Polynomial q = (z - Polynomial(GaussQ(1))) * (z - Polynomial(GaussQ(3)));
    Polynomial g = poly_gcd(p, q);
    CHECK(g.degree() == 1);
    CHECK(g.eval_exact(GaussQ(1)).is_zero());

    auto [quot, rem] = divmod(p, z - Polynomial(GaussQ(1)));
    CHECK(rem.is_zero());
    CHECK(quot.eval_exact(GaussQ(2)).is_zero());
}

TEST_CASE("strip_root multiplicity") {
    Polynomial z = Polynomial::variable();
    Polynomial one(GaussQ(1));
    Polynomial p = (z - one) * (z - one) * (z + one);
    auto [mult, rest] = strip_root(p, GaussQ(1));
    CHECK(mult == 2);
    CHECK(rest.degree() == 1);
    CHECK(strip_root(p, GaussQ(5)).first == 0);
}

TEST_CASE("parser round trips the catalog forms") {
    RationalMap eta = parse_rational_map("1/z^2");
    CHECK(eta.eval(Complex(2, 0)) == Complex(0.25, 0));
    RationalMap g = parse_rational_map("z^2*(z+1)/(z-1)");
    Complex v = g.eval(Complex(2, 0));
    CHECK(v.real() == doctest::Approx(12.0));
    RationalMap h = parse_rational_map("1-1/z^4");
    CHECK(h.eval(Complex(1, 0)) == Complex(0, 0));
    RationalMap m = parse_rational_map("i*(z-1)^2/z^4");
    CHECK(std::abs(m.eval(Complex(0, 1)) - Complex(0, 1) * std::pow(Complex(0, 1) - 1.0, 2.0) /
                                               std::pow(Complex(0, 1), 4.0)) < 1e-15);
    CHECK(parse_rational_map("z^-4") == parse_rational_map("1/z^4"));
    CHECK_THROWS_AS(parse_rational_map("z+"), ParseError);
    CHECK_THROWS_AS(parse_rational_map("(z"), ParseError);
    CHECK_THROWS_AS(parse_rational_map("q"), ParseError);
}

TEST_CASE("reduction cancels removable singularities exactly") {
    // pole of g at 1 against the double zero of eta at 1
    RationalMap g = parse_rational_map("z^2*(z+1)/(z-1)");
    RationalMap eta = parse_rational_map("i*(z-1)^2/z^4");
    RationalMap f3 = RationalMap::constant(GaussQ(2)) * g * eta;
    RationalMap expected = parse_rational_map("2*i*(z+1)*(z-1)/z^2");
    CHECK(f3 == expected);
    CHECK_FALSE(f3.has_exact_pole(GaussQ(1)));
    CHECK(f3.has_exact_pole(GaussQ(0)));
}

TEST_CASE("derivative follows the quotient rule") {
    RationalMap r = parse_rational_map("(1-z^2)/z^2");
    RationalMap dr = r.derivative();
    // d/dz (z^-2 - 1) = -2 z^-3
    CHECK(dr == parse_rational_map("-2/z^3"));
}

TEST_CASE("exact evaluation and poles") {
    RationalMap r = parse_rational_map("(z-1)/(z+1)");
    CHECK(r.eval_exact(GaussQ(3)) == GaussQ(mpq_class(1, 2)));
    CHECK_THROWS_AS(r.eval_exact(GaussQ(-1)), PoleAtSample);
    CHECK_THROWS_AS(parse_rational_map("1/z").eval(Complex(0, 0)), PoleAtSample);
}

TEST_CASE("numeric roots of small polynomials") {
    Polynomial z = Polynomial::variable();
    Polynomial p = (z - Polynomial(GaussQ(2))) * (z - Polynomial(GaussQ::unit_i()));
    auto roots = numeric_roots(p);
    REQUIRE(roots.size() == 2);
    double best2 = 1e9, besti = 1e9;
    for (Complex r : roots) {
        best2 = std::min(best2, std::abs(r - Complex(2, 0)));
        besti = std::min(besti, std::abs(r - Complex(0, 1)));
    }
    CHECK(best2 < 1e-10);
    CHECK(besti < 1e-10);
}
