#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "nullcurve/rational_map.hpp"

namespace nullcurve {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

enum class DomainKind { punctured_plane, annulus };

/// Finitely-punctured plane or annulus; punctures are exact points of Q(i).
struct PuncturedDomain {
    DomainKind kind = DomainKind::punctured_plane;
    std::vector<GaussQ> punctures;
    mpq_class r_inner{0}, r_outer{0};  // annulus only
    std::string label;

    int rank() const {
        return kind == DomainKind::annulus ? 1 : static_cast<int>(punctures.size());
    }
};

PuncturedDomain make_domain(std::vector<GaussQ> punctures, DomainKind kind = DomainKind::punctured_plane,
                            mpq_class r_inner = 0, mpq_class r_outer = 0,
                            std::string label = "");

/// Counterclockwise circle around one puncture (or the core circle of an annulus).
struct BasisLoop {
    GaussQ center;
    mpq_class radius;
    int orientation = +1;
    int index = 1;

    Complex center_c() const { return center.to_complex(); }
    double radius_d() const { return radius.get_d(); }
    Complex point(double s) const {  // s in [0,1]
        return center_c() + radius_d() * std::exp(Complex(0, 2 * M_PI * s));
    }
};

/// One loop per puncture, radius 7/16 of the distance to the nearest other
/// puncture (exact dyadic lower bound), or radius 1 for a lone puncture.
/// Radii are perturbed by a dyadic sweep to keep every loop farther than
/// 1e-3 * radius from each exceptional point. An explicit radius overrides
/// the distance policy.
std::vector<BasisLoop> homology_basis(const PuncturedDomain& domain,
                                      const std::vector<Complex>& exceptional = {},
                                      std::optional<mpq_class> radius_override = {});

/// Uniform samples of a path [0,1] -> C^n. Row k is the value at s_k = k/N.
struct DiscretePath {
    CMat samples;             // (N+1) x n
    bool closed = false;
    double quadric_tol = 1e-8;

    // set when the path is a sampled circle; enables exact-derivative quadrature
    bool is_circle = false;
    Complex circle_center{0, 0};
    double circle_radius = 0;

    int segments() const { return static_cast<int>(samples.rows()) - 1; }
    int dim() const { return static_cast<int>(samples.cols()); }

    /// max_k |sum_j z_j^2| over samples (the nullity defect)
    double max_quadric_residual() const;
    /// the same defect scaled by max(1, |z|^2) per sample
    double max_relative_quadric_residual() const;
    double min_norm() const;
    bool on_quadric() const { return max_quadric_residual() <= quadric_tol && min_norm() > 0; }
    bool on_quadric_relative() const {
        return max_relative_quadric_residual() <= quadric_tol && min_norm() > 0;
    }
};

DiscretePath sample_loop(const BasisLoop& loop, int N);

/// Trapezoid value of the parameter integral \int_0^1 path(s) ds
/// (the exact integral of the piecewise-linear interpolant).
CVec path_quadrature(const DiscretePath& path);
CVec path_quadrature(const CMat& samples);

/// \int h(gamma(s)) gamma'(s) ds with exact gamma' for sampled circles and
/// chordwise trapezoid otherwise. integrand rows must match the path grid.
CVec contour_integral(const CMat& integrand_samples, const DiscretePath& path);

/// Round of (1/2pi i) \oint r'/r; NonIntegralWinding if the residue >= 0.1.
int winding_number(const RationalMap& r, const BasisLoop& loop, int N = 512);

} // namespace nullcurve
