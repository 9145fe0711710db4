#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nullcurve/convexint.hpp"
#include "nullcurve/errors.hpp"

using namespace nullcurve;

namespace {

CVec vec3(Complex a, Complex b, Complex c) {
    CVec v(3);
    v << a, b, c;
    return v;
}

DiscretePath flat_circle_loop(int N) {
    DiscretePath p;
    p.samples.resize(N + 1, 3);
    for (int k = 0; k <= N; ++k) {
        Complex z = std::exp(Complex(0, 2 * M_PI * k / N));
        p.samples.row(k) = (z * vec3(1, Complex(0, 1), 0)).transpose();
    }
    p.samples.row(N) = p.samples.row(0);
    p.closed = true;
    return p;
}

PathFamily one_loop_family(int N = 2048) {
    PathFamily fam;
    fam.n = 3;
    fam.paths.push_back(flat_circle_loop(N));
    return fam;
}

} // namespace

TEST_CASE("convex blend") {
    DiscretePath sigma = flat_circle_loop(64);
    CVec target = vec3(0.5, Complex(0, 0.5), 0);

    CMat full = convex_blend(sigma, target, 1.0);
    CHECK((full - sigma.samples).norm() == 0);  // chi = 1 keeps the path

    CMat pure = convex_blend(sigma, CVec::Zero(3), 0.0);
    CHECK(pure.norm() == 0);  // chi = 0 with zero target collapses

    CMat mixed = convex_blend(sigma, target, 0.25);
    CVec expect = 0.25 * path_quadrature(sigma) + 0.75 * target;
    CHECK((path_quadrature(mixed) - expect).norm() < 1e-12);
}

TEST_CASE("frozen parameters force a constant schedule") {
    PathFamily fam = one_loop_family(512);
    fam.frozen = {0};
    TargetSchedule sched = TargetSchedule::linear(fam, {vec3(1, 0, 0)});
    // frozen members ignore the requested final target
    CVec alpha0 = path_quadrature(fam.paths[0]);
    for (const auto& a : sched.targets[0]) CHECK((a - alpha0).norm() < 1e-12);
    sched.validate(fam);
}

TEST_CASE("endpoint splice") {
    DiscretePath sigma = flat_circle_loop(64);
    CVec start = sigma.samples.row(0).transpose();
    CVec end = sigma.samples.row(64).transpose();

    CHECK_THROWS_AS(endpoint_splice(sigma.samples, start, end, 0.4, 64), BadMargin);

    // matching endpoints: the path passes through unchanged
    CMat same = endpoint_splice(sigma.samples, start, end, 0.05, 64);
    CHECK((same - sigma.samples).norm() == 0);

    // a genuinely different target path gets straight end runs
    CMat blended = convex_blend(sigma, vec3(0.5, Complex(0, 0.5), 0), 0.0);
    int n_out = 4096;
    double margin = 1.0 / 128;
    CMat spliced = endpoint_splice(blended, start, end, margin, n_out);
    CHECK(CVec(spliced.row(0).transpose()) == start);
    CHECK(CVec(spliced.row(n_out).transpose()) == end);
    // integral shift stays within the 2 * margin * diameter bound
    double diam = std::max(start.norm(), blended.row(0).norm());
    CVec shift = path_quadrature(spliced) - path_quadrature(blended);
    CHECK(shift.norm() <= 2 * margin * 2 * diam);
}

TEST_CASE("convex decomposition") {
    ShellConfig shell{0.1, 4.0, 1e-2};

    // zero decomposes into an antipodal pair
    ConvexDecomposition zero = convex_decompose(CVec::Zero(3), shell, 24);
    REQUIRE(zero.points.rows() == 2);
    CHECK((zero.points.row(0) + zero.points.row(1)).norm() < 1e-15);
    CHECK(zero.weights(0) == doctest::Approx(0.5));

    // a shell point is its own decomposition
    CVec on = 0.9 * vec3(1, Complex(0, 1), 0);
    ConvexDecomposition self = convex_decompose(on, shell, 24);
    REQUIRE(self.points.rows() == 1);
    CHECK((CVec(self.points.row(0).transpose()) - on).norm() == 0);
    CHECK(self.weights(0) == 1.0);

    // the stated example: (1, 0, 0) with m = 24 phases
    CVec c = vec3(1, 0, 0);
    ConvexDecomposition dec = convex_decompose(c, shell, 24);
    CVec achieved = CVec::Zero(3);
    for (Eigen::Index r = 0; r < dec.points.rows(); ++r) {
        CHECK(dec.weights(r) >= 0);
        CHECK(std::abs(residual(dec.points.row(r).transpose())) < 1e-12);
        double nrm = dec.points.row(r).norm();
        CHECK(nrm > shell.r0);
        CHECK(nrm < shell.r1);
        achieved += dec.weights(r) * dec.points.row(r).transpose();
    }
    CHECK((achieved - c).norm() < 1e-8);
    CHECK(std::abs(dec.weights.sum() - 1.0) < 1e-8);

    // far outside the hull of the shell: infeasible
    CHECK_THROWS_AS(convex_decompose(vec3(50, 0, 0), shell, 24), Infeasible);
}

TEST_CASE("oscillate") {
    ShellConfig shell{0.5, 4.0, 1e-2};

    DiscretePath on_quadric = flat_circle_loop(2048);
    DiscretePath same = oscillate(on_quadric, shell, 8, 1e-3);
    CHECK((same.samples - on_quadric.samples).norm() == 0);  // already inside Omega_delta

    CHECK_THROWS(oscillate(on_quadric, shell, 4, 1e-3));

    // an impossible budget is reported, not silently absorbed
    DiscretePath hull;
    hull.samples = CMat::Zero(2049, 3);
    CVec anchor9 = 0.7 * vec3(1, Complex(0, 1), 0);
    hull.samples.row(0) = anchor9.transpose();
    hull.samples.row(2048) = anchor9.transpose();
    CHECK_THROWS_AS(oscillate(hull, shell, 8, 0.0), BudgetExceeded);

    // constant hull path at the origin: sawtooth between antipodes
    DiscretePath zero;
    int K = 32, M = 128;
    zero.samples = CMat::Zero(K * M + 1, 3);
    // keep the global endpoints on the quadric so they may stay fixed
    CVec anchor = 0.7 * vec3(1, Complex(0, 1), 0);
    zero.samples.row(0) = anchor.transpose();
    zero.samples.row(K * M) = anchor.transpose();
    double budget = 1e-2 / 4;
    DiscretePath saw = oscillate(zero, shell, K, budget);
    CHECK((path_quadrature(saw) - path_quadrature(zero)).norm() < budget);
    int flips = 0;
    for (int k = 1; k < K * M; ++k) {
        CVec v = saw.samples.row(k).transpose();
        CHECK(std::abs(residual(v)) < shell.delta);
        CHECK(v.norm() > shell.r0);
        CHECK(v.norm() < shell.r1);
        if ((saw.samples.row(k) - saw.samples.row(k - 1)).norm() > 1e-12) ++flips;
    }
    CHECK(flips >= K);  // at least one traversal switch per cell
}

TEST_CASE("retract_path") {
    DiscretePath loop = flat_circle_loop(256);
    double drift = -1;
    DiscretePath same = retract_path(loop, &drift);
    CHECK((same.samples - loop.samples).norm() == 0);  // identity on the quadric
    CHECK(drift == 0);

    DiscretePath wobbled = loop;
    for (int k = 1; k < 256; ++k) wobbled.samples(k, 0) += 1e-3;
    DiscretePath fixed = retract_path(wobbled, &drift);
    CHECK(fixed.max_quadric_residual() < 1e-11);
    CHECK(drift < 1e-2);
    CHECK(fixed.samples.row(0) == wobbled.samples.row(0));

    DiscretePath dead;
    dead.samples = CMat::Zero(9, 3);
    CHECK_THROWS_AS(retract_path(dead), OutsideRetractionDomain);
}

TEST_CASE("deform_paths identity when everything is frozen") {
    PathFamily fam = one_loop_family(512);
    fam.frozen = {0};
    TargetSchedule sched = TargetSchedule::linear(fam, {path_quadrature(fam.paths[0])});
    HomotopyOfPaths h = deform_paths(fam, sched, 1e-3);
    for (int k = 0; k <= h.T; ++k)
        CHECK((h.snapshots[0][k].samples - fam.paths[0].samples).norm() == 0);
}

TEST_CASE("deform_paths drives the flat loop to the stated target") {
    PathFamily fam = one_loop_family();
    const double eps = 1e-3;
    TargetSchedule sched = TargetSchedule::linear(fam, {vec3(0.5, Complex(0, 0.5), 0)});
    HomotopyOfPaths h = deform_paths(fam, sched, eps);

    // (i) initial snapshot bit-identical
    CHECK((h.snapshots[0][0].samples - fam.paths[0].samples).norm() == 0);
    // (ii) endpoints bit-identical at every t
    for (int k = 0; k <= h.T; ++k) {
        const CMat& s = h.snapshots[0][k].samples;
        CHECK(CVec(s.row(0)) == CVec(fam.paths[0].samples.row(0)));
        CHECK(CVec(s.row(s.rows() - 1)) ==
              CVec(fam.paths[0].samples.row(fam.paths[0].samples.rows() - 1)));
    }
    // (iii) integral within eps of the schedule at every snapshot
    for (int k = 0; k <= h.T; ++k) {
        CVec got = path_quadrature(h.snapshots[0][k]);
        CHECK((got - sched.targets[0][k]).norm() < eps);
    }
    CHECK(h.max_integral_error < eps);
    // snapshots stay on the quadric
    for (int k = 0; k <= h.T; ++k)
        CHECK(h.snapshots[0][k].max_quadric_residual() < 1e-8);
}

TEST_CASE("closed-curve schedule with vanishing final imaginary part") {
    PathFamily fam = one_loop_family();
    TargetSchedule sched = TargetSchedule::linear(fam, {CVec::Zero(3)});
    // Re alpha^t = 0 along the whole schedule, Im alpha^1 = 0
    for (const auto& a : sched.targets[0]) CHECK(a.real().norm() < 1e-12);
    HomotopyOfPaths h = deform_paths(fam, sched, 1e-3);
    CVec final_int = path_quadrature(h.snapshots[0][h.T]);
    CHECK(final_int.norm() < 1e-3);
}

TEST_CASE("halving epsilon at most doubles the cell count") {
    PathFamily fam = one_loop_family(1024);
    TargetSchedule sched = TargetSchedule::linear(fam, {vec3(0.5, Complex(0, 0.5), 0)});
    HomotopyOfPaths coarse = deform_paths(fam, sched, 2e-3);
    HomotopyOfPaths fine = deform_paths(fam, sched, 1e-3);
    CHECK(fine.cells <= 2 * coarse.cells);
    CHECK(fine.cells >= coarse.cells);
}

TEST_CASE("deform_paths is deterministic") {
    PathFamily fam = one_loop_family(1024);
    TargetSchedule sched = TargetSchedule::linear(fam, {vec3(0.5, Complex(0, 0.5), 0)});
    HomotopyOfPaths a = deform_paths(fam, sched, 1e-2);
    HomotopyOfPaths b = deform_paths(fam, sched, 1e-2);
    for (int k = 0; k <= a.T; ++k)
        CHECK((a.snapshots[0][k].samples - b.snapshots[0][k].samples).norm() == 0);
}

TEST_CASE("deform_paths rejects invalid input") {
    PathFamily fam = one_loop_family(512);
    TargetSchedule sched = TargetSchedule::linear(fam, {vec3(0.5, Complex(0, 0.5), 0)});
    CHECK_THROWS(deform_paths(fam, sched, -1.0));

    TargetSchedule broken = sched;
    broken.targets[0][0] = vec3(9, 9, 9);  // alpha^0 must match the path integral
    CHECK_THROWS(deform_paths(fam, broken, 1e-3));

    PathFamily off = fam;
    off.paths[0].samples(5, 0) += 1.0;
    CHECK_THROWS_AS(deform_paths(off, sched, 1e-3), NotOnQuadric);
}
