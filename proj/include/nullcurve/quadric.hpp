#pragma once

#include "nullcurve/domain.hpp"

namespace nullcurve {

/// Directed variety A: the punctured null quadric {sum z_j^2 = 0} \ {0} in C^n,
/// or the punctured full space C^n \ {0}.
struct DirectionVariety {
    enum class Kind { null_quadric, full_space };
    Kind kind = Kind::null_quadric;
    int n = 3;
};

/// sum_j z_j^2 (the nullity defect of an ambient vector)
Complex residual(const CVec& z);

/// Orthonormal frame of {w : sum z_j w_j = 0}, one row per frame vector.
/// For the full space all of C^n is tangent and the frame is the identity.
CMat tangent_frame(const CVec& z);
CMat tangent_frame(const DirectionVariety& variety, const CVec& z);

/// Newton projection onto the quadric: minimal-norm steps for the two real
/// constraints Re residual = Im residual = 0. Identity on exact quadric points.
CVec retract(CVec z, double tol = 1e-12);

/// The 2-to-1 cover (u,v) -> (u^2 - v^2, i(u^2 + v^2), 2uv) of the punctured
/// quadric in C^3.
Eigen::Vector3cd spinor_project(Complex u, Complex v);

/// A point of the double cover: spinor_project(u, v) reproduces the covered
/// quadric point to 1e-10 relative error.
struct SpinorLift {
    Complex u, v;
};

/// Local inverse of the cover at z, on the branch nearest `near`. Solves the
/// larger of u^2 = (z1 - i z2)/2 and v^2 = -(z1 + i z2)/2 and divides for the
/// other component, avoiding the small factor.
SpinorLift spinor_lift(const Eigen::Vector3cd& z, const SpinorLift& near);

/// Z_2 monodromy of a closed quadric-valued path in C^3 by branch continuation
/// of the spinor cover. Returns true for the nontrivial class.
bool spinor_monodromy(const DiscretePath& path);

/// Rank of the stacked tangent frames over the samples; the map is
/// nondegenerate iff the rank equals n.
int nondegeneracy_rank(const std::vector<CVec>& samples);
int nondegeneracy_rank(const DirectionVariety& variety, const std::vector<CVec>& samples);

/// True iff the samples do not lie on a single complex ray (second singular
/// value above tol * first).
bool is_nonflat(const std::vector<CVec>& samples, double tol = 1e-8);
bool is_nonflat(const CMat& sample_rows, double tol = 1e-8);

} // namespace nullcurve
