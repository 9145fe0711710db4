#include "nullcurve/quadric.hpp"

#include <Eigen/SVD>

#include "nullcurve/errors.hpp"

namespace nullcurve {

Complex residual(const CVec& z) {
    Complex s(0);
    for (Eigen::Index j = 0; j < z.size(); ++j) s += z(j) * z(j);
    return s;
}

CMat tangent_frame(const CVec& z) {
    double zn = z.norm();
    if (zn < 1e-8) throw NearOrigin("point too close to the cone vertex");
    if (std::abs(residual(z)) > 1e-8 * zn * zn)
        throw NotOnQuadric("residual " + std::to_string(std::abs(residual(z))));
    Eigen::Index n = z.size();
    // kernel of the 1 x n row z^T: right singular vectors beyond the first
    CMat row(1, n);
    row.row(0) = z.transpose();
    Eigen::JacobiSVD<CMat> svd(row, Eigen::ComputeFullV);
    CMat frame(n - 1, n);
    for (Eigen::Index k = 1; k < n; ++k) frame.row(k - 1) = svd.matrixV().col(k).transpose();
    return frame;
}

CMat tangent_frame(const DirectionVariety& variety, const CVec& z) {
    if (variety.kind == DirectionVariety::Kind::full_space) {
        if (z.norm() < 1e-8) throw NearOrigin("point too close to the origin");
        return CMat::Identity(z.size(), z.size());
    }
    return tangent_frame(z);
}

CVec retract(CVec z, double tol) {
    double zn = z.norm();
    if (zn <= 1e-6) throw OutsideRetractionDomain("|z| too small");
    Complex res = residual(z);
    if (std::abs(res) >= 0.25 * zn * zn)
        throw OutsideRetractionDomain("residual " + std::to_string(std::abs(res)) +
                                      " outside the retraction neighborhood");
    if (res == Complex(0, 0)) return z;  // exact fixed point
    for (int it = 0; it < 50; ++it) {
        res = residual(z);
        if (std::abs(res) <= tol) return z;
        // minimal-norm Newton step for the complex constraint sum z_j^2 = 0
        double n2 = z.squaredNorm();
        z -= z.conjugate() * (res / (2 * n2));
    }
    throw NoConvergence("retraction did not converge in 50 iterations");
}

Eigen::Vector3cd spinor_project(Complex u, Complex v) {
    if (u == Complex(0, 0) && v == Complex(0, 0)) throw ZeroSpinor();
    Eigen::Vector3cd z;
    z << u * u - v * v, Complex(0, 1) * (u * u + v * v), 2.0 * u * v;
    return z;
}

SpinorLift spinor_lift(const Eigen::Vector3cd& z, const SpinorLift& near) {
    Complex a = z(0) - Complex(0, 1) * z(1);  // 2 u^2
    Complex b = z(0) + Complex(0, 1) * z(1);  // -2 v^2
    Complex u, v;
    if (std::abs(a) >= std::abs(b)) {
        u = std::sqrt(a / 2.0);
        v = (u != Complex(0, 0)) ? z(2) / (2.0 * u) : std::sqrt(-b / 2.0);
    } else {
        v = std::sqrt(-b / 2.0);
        u = (v != Complex(0, 0)) ? z(2) / (2.0 * v) : std::sqrt(a / 2.0);
    }
    double keep = std::abs(u - near.u) + std::abs(v - near.v);
    double flip = std::abs(u + near.u) + std::abs(v + near.v);
    if (flip < keep) return {-u, -v};
    return {u, v};
}

bool spinor_monodromy(const DiscretePath& path) {
    if (path.dim() != 3) throw DimensionNot3("spinor cover requires n = 3");
    if (!path.closed) throw Error("spinor_monodromy: path must be closed");
    if (!path.on_quadric_relative())
        throw NotOnQuadric("path leaves the quadric by " +
                           std::to_string(path.max_relative_quadric_residual()));
    Eigen::Index N = path.segments();
    for (Eigen::Index k = 0; k < N; ++k) {
        double step = (path.samples.row(k + 1) - path.samples.row(k)).norm();
        if (step >= 0.25 * path.samples.row(k).norm())
            throw SamplesTooCoarse("step " + std::to_string(step) + " at sample " +
                                   std::to_string(k));
    }
    Eigen::Vector3cd z0 = path.samples.row(0).transpose();
    SpinorLift start = spinor_lift(z0, SpinorLift{1.0, 0.0});
    SpinorLift lift = start;
    for (Eigen::Index k = 1; k <= N; ++k)
        lift = spinor_lift(path.samples.row(k).transpose(), lift);
    double closed_up = std::abs(lift.u - start.u) + std::abs(lift.v - start.v);
    double flipped = std::abs(lift.u + start.u) + std::abs(lift.v + start.v);
    return flipped < closed_up;
}

int nondegeneracy_rank(const std::vector<CVec>& samples) {
    DirectionVariety quadric;
    quadric.n = samples.empty() ? 3 : static_cast<int>(samples.front().size());
    return nondegeneracy_rank(quadric, samples);
}

int nondegeneracy_rank(const DirectionVariety& variety, const std::vector<CVec>& samples) {
    if (samples.empty()) throw Error("nondegeneracy_rank: need at least one sample");
    Eigen::Index n = samples.front().size();
    CMat stacked(static_cast<Eigen::Index>(samples.size()) * (variety.kind == DirectionVariety::Kind::full_space ? n : n - 1), n);
    Eigen::Index row = 0;
    for (const CVec& z : samples) {
        CMat frame = tangent_frame(variety, z);
        stacked.middleRows(row, frame.rows()) = frame;
        row += frame.rows();
    }
    Eigen::JacobiSVD<CMat> svd(stacked);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) ++rank;
    return rank;
}

bool is_nonflat(const CMat& rows, double tol) {
    if (rows.rows() < 2) return false;
    Eigen::JacobiSVD<CMat> svd(rows);
    const auto& sv = svd.singularValues();
    if (sv.size() < 2) return false;
    return sv(1) > tol * sv(0);
}

bool is_nonflat(const std::vector<CVec>& samples, double tol) {
    if (samples.empty()) return false;
    CMat rows(static_cast<Eigen::Index>(samples.size()), samples.front().size());
    for (size_t k = 0; k < samples.size(); ++k) rows.row(static_cast<Eigen::Index>(k)) = samples[k].transpose();
    return is_nonflat(rows, tol);
}

} // namespace nullcurve
