#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nullcurve/errors.hpp"
#include "nullcurve/spray.hpp"
#include "nullcurve/weierstrass.hpp"

using namespace nullcurve;

namespace {

PuncturedDomain cstar() { return make_domain({GaussQ(0)}, DomainKind::punctured_plane, 0, 0, "C*"); }

WeierstrassData catenoid() {
    return data_from_gw(parse_rational_map("z"), parse_rational_map("1/z^2"), cstar(), "catenoid");
}

WeierstrassData flat_curve() {
    return data_from_gw(parse_rational_map("0"), parse_rational_map("z"), cstar(), "flat");
}

} // namespace

TEST_CASE("from_gw reproduces the catalog forms") {
    auto f = from_gw(parse_rational_map("z"), parse_rational_map("1/z^2"));
    CHECK(f[0] == parse_rational_map("(1-z^2)/z^2"));
    CHECK(f[1] == parse_rational_map("i*(1+z^2)/z^2"));
    CHECK(f[2] == parse_rational_map("2/z"));

    auto flat = from_gw(parse_rational_map("0"), parse_rational_map("z"));
    CHECK(flat[0] == parse_rational_map("z"));
    CHECK(flat[1] == parse_rational_map("i*z"));
    CHECK(flat[2].is_zero());

    // the removable pole of g cancels exactly against the zero of eta
    auto meeks = from_gw(parse_rational_map("z^2*(z+1)/(z-1)"), parse_rational_map("i*(z-1)^2/z^4"));
    CHECK(meeks[2] == parse_rational_map("2*i*(z+1)*(z-1)/z^2"));
    CHECK_FALSE(meeks[0].has_exact_pole(GaussQ(1)));
}

TEST_CASE("nullity identity holds symbolically") {
    for (auto [gs, es] : std::vector<std::pair<const char*, const char*>>{
             {"z", "1/z^2"},
             {"0", "z"},
             {"z", "1-1/z^4"},
             {"z^2*(z+1)/(z-1)", "i*(z-1)^2/z^4"},
             {"z", "i/z^2"}}) {
        auto f = from_gw(parse_rational_map(gs), parse_rational_map(es));
        RationalMap sum = f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
        CHECK(sum.is_zero());
    }
}

TEST_CASE("nullity residual") {
    WeierstrassData cat = catenoid();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2, 2);
    std::vector<Complex> pts;
    while (pts.size() < 32) {
        Complex z(u(rng), u(rng));
        if (std::abs(z) > 0.3) pts.push_back(z);
    }
    CHECK(nullity_residual(cat.f, pts) < 1e-12);

    std::vector<RationalMap> constant{parse_rational_map("1"), parse_rational_map("0"),
                                      parse_rational_map("0")};
    CHECK(nullity_residual(constant, pts) == 1.0);

    CHECK_THROWS_AS(nullity_residual(cat.f, {Complex(0, 0)}), PoleAtSample);
}

TEST_CASE("validate rejects stray poles") {
    WeierstrassData bad;
    bad.n = 3;
    bad.f = {parse_rational_map("1/(z-3)"), parse_rational_map("i/(z-3)"),
             parse_rational_map("0")};
    bad.domain = cstar();
    CHECK_THROWS_AS(bad.validate(), PoleAtSample);
}

TEST_CASE("catenoid periods and flux against the residue oracle") {
    WeierstrassData cat = catenoid();
    auto basis = homology_basis(cat.domain);
    PeriodVector p = periods(cat, basis, 256);
    REQUIRE(p.entries.size() == 1);
    // only f_3 = 2/z has a residue: period (0, 0, 4 pi i)
    CHECK(std::abs(p.entries[0](0)) < 1e-10);
    CHECK(std::abs(p.entries[0](1)) < 1e-10);
    CHECK(std::abs(p.entries[0](2) - Complex(0, 4 * M_PI)) < 1e-10);

    FluxVector fl = flux(p);
    CHECK(std::abs(fl.entries[0](2) - 4 * M_PI) < 1e-10);
    CHECK(std::abs(fl.entries[0](0)) < 1e-10);

    // flux is the imaginary part entrywise, exactly as computed
    for (int j = 0; j < 3; ++j) CHECK(fl.entries[0](j) == p.entries[0](j).imag());
}

TEST_CASE("flat curve and mixed-residue periods") {
    WeierstrassData flat = flat_curve();
    auto basis = homology_basis(flat.domain);
    CHECK(periods(flat, basis, 256).max_abs() < 1e-12);

    // f = (1/z, i/z, 0): periods (2 pi i, -2 pi, 0)
    MapCn form = [](Complex z) {
        CVec v(3);
        v << 1.0 / z, Complex(0, 1) / z, 0.0;
        return v;
    };
    PeriodVector p = periods(form, 3, basis, 256);
    CHECK(std::abs(p.entries[0](0) - Complex(0, 2 * M_PI)) < 1e-10);
    CHECK(std::abs(p.entries[0](1) - Complex(-2 * M_PI, 0)) < 1e-10);
}

TEST_CASE("theta scales the periods") {
    // same f, theta = i dz: every period picks up the factor i
    WeierstrassData cat = catenoid();
    WeierstrassData twisted = cat;
    twisted.theta = parse_rational_map("i");
    auto basis = homology_basis(cat.domain);
    CVec base = periods(cat, basis, 256).entries[0];
    CVec scaled = periods(twisted, basis, 256).entries[0];
    CHECK((scaled - Complex(0, 1) * base).norm() < 1e-12);
    // the catenoid period 4 pi i becomes the real period -4 pi
    CHECK(std::abs(scaled(2) - Complex(-4 * M_PI, 0)) < 1e-10);
}

TEST_CASE("constant integrand integrates to a linear map") {
    MapCn constant = [](Complex) {
        CVec v(3);
        v << 1.0, Complex(0, 1), 0.0;
        return v;
    };
    GridSpec spec;
    spec.n_r = 8;
    spec.n_theta = 24;
    SurfaceGrid F = integrate_complex(constant, 3, spec, Complex(0, 0), CVec::Zero(3));
    double worst = 0;
    for (int i = 0; i <= spec.n_r; ++i)
        for (int j = 0; j < spec.cols(); ++j) {
            Complex z = spec.node(i, j);
            CVec expect(3);
            expect << z, Complex(0, 1) * z, 0.0;
            worst = std::max(worst, (CVec(F.value(i, j).transpose()) - expect).norm());
        }
    CHECK(worst < 1e-12);
}

TEST_CASE("periods stable under refinement and radius changes") {
    WeierstrassData cat = catenoid();
    auto basis = homology_basis(cat.domain);
    PeriodVector a = periods(cat, basis, 128);
    PeriodVector b = periods(cat, basis, 256);
    CHECK((a.entries[0] - b.entries[0]).norm() < 1e-10);

    std::vector<BasisLoop> half{BasisLoop{GaussQ(0), mpq_class(1, 2)}};
    PeriodVector c = periods(cat, half, 256);
    CHECK((b.entries[0] - c.entries[0]).norm() < 1e-10);
}

TEST_CASE("classification of the catalog surfaces") {
    auto basis = homology_basis(cstar());

    IsotopyClass flat_cls = classify(flat_curve(), basis);
    CHECK(flat_cls.bits == std::vector<int>{1});
    CHECK(flat_cls.flat_data);  // the class of the map is still defined
    CHECK_FALSE(flat_cls.trivial());
    CHECK_THROWS_AS(classify(flat_curve(), basis, 256, true), FlatData);

    IsotopyClass cat_cls = classify(catenoid(), basis);
    CHECK(cat_cls.bits == std::vector<int>{0});
    CHECK(cat_cls.trivial());
    CHECK_FALSE(cat_cls.flat_data);

    WeierstrassData heli = data_from_gw(parse_rational_map("z"), parse_rational_map("i/z^2"),
                                        cstar(), "helicoid");
    CHECK(classify(heli, basis).trivial());

    WeierstrassData meeks = data_from_gw(parse_rational_map("z^2*(z+1)/(z-1)"),
                                         parse_rational_map("i*(z-1)^2/z^4"), cstar(), "meeks");
    std::vector<BasisLoop> half{BasisLoop{GaussQ(0), mpq_class(1, 2)}};
    CHECK(classify(meeks, half).trivial());
}

TEST_CASE("higher dimensions classify as trivial") {
    auto basis = homology_basis(cstar());
    MapCn four = [](Complex z) {
        CVec v(4);
        v << z, Complex(0, 1) * z, 0.0, 0.0;
        return v;
    };
    IsotopyClass cls = classify(four, 4, basis);
    CHECK(cls.trivial_by_dimension);
    CHECK(cls.trivial());
    CHECK_THROWS_AS(classify(four, 2, basis), DimensionNot3);
}

TEST_CASE("henneberg classification per loop") {
    PuncturedDomain dom = make_domain(
        {GaussQ(0), GaussQ(1), GaussQ(-1), GaussQ::unit_i(), -GaussQ::unit_i()});
    WeierstrassData henn =
        data_from_gw(parse_rational_map("z"), parse_rational_map("1-1/z^4"), dom, "henneberg");
    auto basis = homology_basis(dom, {}, mpq_class(1, 10));
    IsotopyClass cls = classify(henn, basis);
    CHECK(cls.bits == std::vector<int>{0, 1, 1, 1, 1});
}

TEST_CASE("winding parity agrees with monodromy for holomorphic g") {
    auto basis = homology_basis(cstar());
    for (auto [gs, es, name] :
         std::vector<std::tuple<const char*, const char*, const char*>>{
             {"0", "z", "flat"}, {"z", "1/z^2", "catenoid"}, {"z", "i/z^2", "helicoid"}}) {
        WeierstrassData d = data_from_gw(parse_rational_map(gs), parse_rational_map(es), cstar(),
                                         name);
        CHECK(winding_parity_class(d, basis).bits == classify(d, basis).bits);
    }

    WeierstrassData meeks = data_from_gw(parse_rational_map("z^2*(z+1)/(z-1)"),
                                         parse_rational_map("i*(z-1)^2/z^4"), cstar(), "meeks");
    CHECK_THROWS_AS(winding_parity_class(meeks, homology_basis(cstar())), GNotHolomorphic);

    // eta = i(z-1)^2/z^4 still has even winding on the half-radius loop
    WeierstrassData heli = data_from_gw(parse_rational_map("z"), parse_rational_map("i*(z-1)^2/z^4"),
                                        cstar(), "parity-probe");
    std::vector<BasisLoop> half{BasisLoop{GaussQ(0), mpq_class(1, 2)}};
    CHECK(winding_parity_class(heli, half).bits == std::vector<int>{0});
}

TEST_CASE("classification is invariant under scaling and constant rotations") {
    auto basis = homology_basis(cstar());
    WeierstrassData cat = catenoid();
    MapCn f = cat.map();
    IsotopyClass base = classify(f, 3, basis);

    MapCn scaled = [f](Complex z) { return CVec(2.0 * f(z)); };
    CHECK(classify(scaled, 3, basis) == base);

    MapCn rotated = [f](Complex z) {
        CVec v = f(z);
        CVec out = v;
        double t = 1e-3;
        out(0) = std::cos(t) * v(0) - std::sin(t) * v(1);
        out(1) = std::sin(t) * v(0) + std::cos(t) * v(1);
        return out;
    };
    CHECK(classify(rotated, 3, basis) == base);
}

TEST_CASE("integrate_complex on the flat curve") {
    WeierstrassData flat = flat_curve();
    GridSpec spec;
    spec.r_min = 0.5;
    spec.r_max = 2.0;
    spec.n_r = 16;
    spec.n_theta = 48;
    CVec base(3);
    base << 0.5, Complex(0, 0.5), 0.0;
    SurfaceGrid F = integrate_complex(flat, spec, Complex(1, 0), base);
    CHECK(F.max_plaquette_defect < 1e-8);
    // F(z) = z^2/2 (1, i, 0)
    double worst = 0;
    for (int i = 0; i <= spec.n_r; ++i)
        for (int j = 0; j < spec.cols(); ++j) {
            Complex z = spec.node(i, j);
            CVec expect(3);
            expect << 0.5 * z * z, Complex(0, 0.5) * z * z, 0.0;
            worst = std::max(worst, (CVec(F.value(i, j).transpose()) - expect).norm());
        }
    CHECK(worst < 1e-8);

    CHECK_THROWS_AS(integrate_complex(catenoid(), spec, Complex(1, 0), CVec::Zero(3)),
                    NonzeroPeriods);
}

TEST_CASE("integrate_real on the catenoid") {
    WeierstrassData cat = catenoid();
    GridSpec spec;
    spec.n_r = 16;
    spec.n_theta = 48;
    SurfaceGrid u = integrate_real(cat, spec, Complex(1, 0), Eigen::Vector3d::Zero());
    CHECK(u.max_plaquette_defect < 1e-8);
    CHECK(u.seam_defect < 1e-10);  // Re(4 pi i) = 0

    // real periods -2 pi on the third entry for f = (0, 0, i/z)
    MapCn spiral = [](Complex z) {
        CVec v(3);
        v << 0.0, 0.0, Complex(0, 1) / z;
        return v;
    };
    CHECK_THROWS_AS(integrate_real(spiral, 3, spec, Complex(1, 0), Eigen::Vector3d::Zero()),
                    NonzeroRealPeriods);
}

TEST_CASE("real part of the complex integral matches integrate_real") {
    WeierstrassData flat = flat_curve();
    GridSpec spec;
    spec.n_r = 8;
    spec.n_theta = 24;
    CVec base = CVec::Zero(3);
    SurfaceGrid F = integrate_complex(flat, spec, Complex(1, 0), base);
    SurfaceGrid u = integrate_real(flat, spec, Complex(1, 0), Eigen::Vector3d::Zero());
    CHECK((F.values.real() - u.values.real()).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("universal cover grid integrates the helicoid form") {
    // nonzero real period around the ring: single-valued only on the cover
    WeierstrassData heli = data_from_gw(parse_rational_map("z"), parse_rational_map("i/z^2"),
                                        cstar(), "helicoid");
    GridSpec cover;
    cover.wrap = false;
    cover.theta0 = 0;
    cover.theta1 = 4 * M_PI;  // two turns
    cover.n_r = 8;
    cover.n_theta = 96;
    SurfaceGrid F = integrate_real(heli, cover, Complex(1, 0), Eigen::Vector3d::Zero());
    CHECK(F.max_plaquette_defect < 1e-8);
    // the two sheets differ by the real period -4 pi in the third coordinate
    Eigen::VectorXd sheet0 = F.value(0, 0).real().transpose();
    Eigen::VectorXd sheet1 = F.value(0, 48).real().transpose();
    CHECK(std::abs((sheet1 - sheet0)(2) - (-4 * M_PI)) < 1e-8);
}
