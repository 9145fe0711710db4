#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nullcurve/errors.hpp"
#include "nullcurve/quadric.hpp"

using namespace nullcurve;

namespace {

CVec vec3(Complex a, Complex b, Complex c) {
    CVec v(3);
    v << a, b, c;
    return v;
}

DiscretePath flat_loop(int N, int power = 1) {
    DiscretePath p;
    p.samples.resize(N + 1, 3);
    for (int k = 0; k <= N; ++k) {
        Complex z = std::exp(Complex(0, 2 * M_PI * power * k / N));
        p.samples.row(k) = (z * vec3(1, Complex(0, 1), 0)).transpose();
    }
    p.samples.row(N) = p.samples.row(0);
    p.closed = true;
    return p;
}

} // namespace

TEST_CASE("residual") {
    CHECK(residual(vec3(1, Complex(0, 1), 0)) == Complex(0, 0));
    CHECK(residual(vec3(1, 0, 0)) == Complex(1, 0));
    CHECK(residual(vec3(3, Complex(0, 4), 0)) == Complex(-7, 0));
}

TEST_CASE("tangent frame") {
    CVec z = vec3(1, Complex(0, 1), 0);
    CMat frame = tangent_frame(z);
    REQUIRE(frame.rows() == 2);
    for (int r = 0; r < 2; ++r) {
        Complex pairing(0);
        for (int j = 0; j < 3; ++j) pairing += z(j) * frame(r, j);
        CHECK(std::abs(pairing) < 1e-10 * z.norm() * frame.row(r).norm());
    }
    // orthonormal rows
    CHECK(std::abs(frame.row(0).norm() - 1.0) < 1e-12);
    CHECK(std::abs(frame.row(1).norm() - 1.0) < 1e-12);
    CHECK(std::abs(frame.row(0).dot(frame.row(1).conjugate())) < 1e-12);
    // the advertised span: (-i, 1, 0)/sqrt2 and (0, 0, 1) must be reproduced
    CVec t1 = vec3(Complex(0, -1) / std::sqrt(2.0), Complex(1, 0) / std::sqrt(2.0), 0);
    CVec t2 = vec3(0, 0, 1);
    for (const CVec& t : {t1, t2}) {
        CVec proj = CVec::Zero(3);
        for (int r = 0; r < 2; ++r) {
            CVec fr = frame.row(r).transpose();
            proj += fr.dot(t) * fr;  // dot conjugates its first argument
        }
        CHECK((proj - t).norm() < 1e-10);
    }

    CHECK_THROWS_AS(tangent_frame(vec3(1, 0, 0)), NotOnQuadric);
    CHECK_THROWS_AS(tangent_frame(vec3(0, 0, 0)), NearOrigin);

    DirectionVariety full{DirectionVariety::Kind::full_space, 3};
    CHECK(tangent_frame(full, vec3(1, 0, 0)).rows() == 3);
}

TEST_CASE("retract") {
    CVec on = vec3(1, Complex(0, 1), 0);
    CVec back = retract(on, 1e-12);
    CHECK(back == on);  // bitwise fixed point

    CVec off = vec3(Complex(1 + 1e-4, 0), Complex(0, 1), 0);
    CVec proj = retract(off, 1e-12);
    CHECK(std::abs(residual(proj)) < 1e-12);
    CHECK((proj - off).norm() < 1e-3);

    CHECK_THROWS_AS(retract(vec3(1, 0, 0), 1e-12), OutsideRetractionDomain);
    CHECK_THROWS_AS(retract(vec3(1e-7, 0, 0), 1e-12), OutsideRetractionDomain);
}

TEST_CASE("spinor projection") {
    CVec a = spinor_project(1, 0);
    CHECK(a == vec3(1, Complex(0, 1), 0));
    CHECK(spinor_project(0, 1) == vec3(-1, Complex(0, 1), 0));
    CHECK(spinor_project(1, 1) == vec3(0, Complex(0, 2), 2));
    CHECK_THROWS_AS(spinor_project(0, 0), ZeroSpinor);

    // 2-to-1: antipodal spinors project to the same point; residual identically 0
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 200; ++t) {
        Complex uu(u(rng), u(rng)), vv(u(rng), u(rng));
        if (std::abs(uu) + std::abs(vv) < 1e-3) continue;
        CVec p = spinor_project(uu, vv);
        CHECK(std::abs(residual(p)) < 1e-12 * p.squaredNorm());
        CHECK((spinor_project(-uu, -vv) - p).norm() == 0);
    }
}

TEST_CASE("spinor monodromy") {
    DiscretePath constant;
    constant.samples.resize(65, 3);
    for (int k = 0; k <= 64; ++k) constant.samples.row(k) = vec3(1, Complex(0, 1), 0).transpose();
    constant.closed = true;
    CHECK_FALSE(spinor_monodromy(constant));

    CHECK(spinor_monodromy(flat_loop(256, 1)));        // lift u = sqrt(z) flips sign
    CHECK_FALSE(spinor_monodromy(flat_loop(256, 2)));  // lift u = z closes up

    CHECK_THROWS_AS(spinor_monodromy(flat_loop(8, 1)), SamplesTooCoarse);

    DiscretePath bad = flat_loop(256, 1);
    bad.samples(3, 0) += 0.5;  // knock a sample off the quadric
    CHECK_THROWS_AS(spinor_monodromy(bad), NotOnQuadric);

    DiscretePath wide;
    wide.samples.resize(65, 4);
    wide.samples.setOnes();
    wide.closed = true;
    CHECK_THROWS_AS(spinor_monodromy(wide), DimensionNot3);
}

TEST_CASE("spinor lift inverts the cover on the nearest branch") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 200; ++t) {
        Complex su(u(rng), u(rng)), sv(u(rng), u(rng));
        if (std::abs(su) + std::abs(sv) < 1e-2) continue;
        Eigen::Vector3cd z = spinor_project(su, sv);
        SpinorLift lift = spinor_lift(z, SpinorLift{su, sv});
        CHECK((spinor_project(lift.u, lift.v) - z).norm() < 1e-10 * z.norm());
        // nearest-branch selection recovers the original spinor
        CHECK(std::abs(lift.u - su) + std::abs(lift.v - sv) < 1e-8 * (std::abs(su) + std::abs(sv)));
        SpinorLift other = spinor_lift(z, SpinorLift{-su, -sv});
        CHECK(std::abs(other.u + su) + std::abs(other.v + sv) < 1e-8 * (std::abs(su) + std::abs(sv)));
    }
}

TEST_CASE("monodromy invariance under refinement and rotation of samples") {
    for (int power : {1, 2}) {
        bool at256 = spinor_monodromy(flat_loop(256, power));
        bool at512 = spinor_monodromy(flat_loop(512, power));
        CHECK(at256 == at512);

        DiscretePath rolled = flat_loop(256, power);
        // cyclic shift by a third of the loop
        DiscretePath shifted = rolled;
        int N = rolled.segments();
        for (int k = 0; k <= N; ++k)
            shifted.samples.row(k) = rolled.samples.row((k + N / 3) % N);
        shifted.samples.row(N) = shifted.samples.row(0);
        CHECK(spinor_monodromy(shifted) == at256);
    }
}

TEST_CASE("nondegeneracy rank") {
    std::vector<CVec> single{vec3(1, Complex(0, 1), 0)};
    CHECK(nondegeneracy_rank(single) == 2);

    std::vector<CVec> repeated(5, vec3(1, Complex(0, 1), 0));
    CHECK(nondegeneracy_rank(repeated) == 2);

    // catenoid samples span all of C^3
    std::vector<CVec> catenoid;
    for (int k = 0; k < 16; ++k) {
        Complex z = std::exp(Complex(0, 2 * M_PI * k / 16));
        catenoid.push_back(vec3((1.0 - z * z) / (z * z), Complex(0, 1) * (1.0 + z * z) / (z * z),
                                2.0 / z));
    }
    CHECK(nondegeneracy_rank(catenoid) == 3);
    CHECK_THROWS(nondegeneracy_rank(std::vector<CVec>{}));
}

TEST_CASE("full-space variety") {
    DirectionVariety full{DirectionVariety::Kind::full_space, 3};
    // any single nonzero point already spans everything through its frame
    std::vector<CVec> one{vec3(2, 0, 0)};
    CHECK(nondegeneracy_rank(full, one) == 3);
    CHECK_THROWS_AS(tangent_frame(full, vec3(0, 0, 0)), NearOrigin);
}

TEST_CASE("is_nonflat") {
    std::vector<CVec> ray;
    for (int k = 0; k < 16; ++k) {
        Complex z = std::exp(Complex(0, 2 * M_PI * k / 16));
        ray.push_back(z * vec3(1, Complex(0, 1), 0));
    }
    CHECK_FALSE(is_nonflat(ray));

    std::vector<CVec> catenoid;
    for (int k = 0; k < 16; ++k) {
        Complex z = std::exp(Complex(0, 2 * M_PI * k / 16));
        catenoid.push_back(vec3((1.0 - z * z) / (z * z), Complex(0, 1) * (1.0 + z * z) / (z * z),
                                2.0 / z));
    }
    CHECK(is_nonflat(catenoid));

    CHECK_FALSE(is_nonflat(std::vector<CVec>{}));
}
