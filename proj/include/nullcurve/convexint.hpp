#pragma once

#include <algorithm>

#include "nullcurve/quadric.hpp"

namespace nullcurve {

/// Shell around the punctured quadric: Omega_delta = {z : |sum z_j^2| < delta,
/// r0 < |z| < r1}. All deformations stay inside it.
struct ShellConfig {
    double r0 = 0.1, r1 = 4.0, delta = 1e-2;

    bool contains(const CVec& z) const {
        double nrm = z.norm();
        return std::abs(residual(z)) < delta && r0 < nrm && nrm < r1;
    }
};

/// Family of on-quadric paths over a finite parameter set with a frozen subset.
struct PathFamily {
    int n = 3;
    std::vector<DiscretePath> paths;
    std::vector<int> frozen;  // indices into paths

    bool is_frozen(int p) const {
        return std::find(frozen.begin(), frozen.end(), p) != frozen.end();
    }
    void validate() const;
};

/// Targets alpha^t_p on the uniform snapshot grid t_k = k/T. Required:
/// alpha^0_p = \int sigma_p, and alpha^t_q constant for frozen q.
struct TargetSchedule {
    int T = 16;
    std::vector<std::vector<CVec>> targets;  // [p][k], k = 0..T

    void validate(const PathFamily& family) const;
    static TargetSchedule linear(const PathFamily& family, const std::vector<CVec>& final_targets,
                                 int T = 16);
};

/// Tent cutoff: 1 at t = 0 and on the frozen set, 0 for t >= width.
struct CutoffProfile {
    double width = 0.25;
    double operator()(bool frozen, double t) const {
        if (frozen) return 1.0;
        return std::max(0.0, 1.0 - t / width);
    }
};

/// Snapshots of the deformation with the achieved condition residuals.
struct HomotopyOfPaths {
    int T = 16;
    std::vector<std::vector<DiscretePath>> snapshots;  // [p][k]
    double epsilon = 0;

    // achieved residuals, one entry per (p,k) reduced to the max
    double max_integral_error = 0;   // |quadrature - alpha^t|
    double max_quadric_residual = 0;
    double max_retract_drift = 0;
    double max_oscillation_error = 0;
    double max_splice_shift = 0;
    int oversampling = 0;            // samples per oscillation cell actually used
    int cells = 0;
};

struct DeformConfig {
    CutoffProfile cutoff;
    double margin = 1.0 / 20;       // endpoint splice margin (shrunk to fit the budget)
    int frame_phases = 24;
    int snapshots = 16;
    uint64_t seed = 0;              // interface compatibility; the pipeline is deterministic
    std::optional<ShellConfig> shell;
};

/// Blend sigma~^t_p(s) = chi(p,t) sigma_p(s) + (1 - chi) alpha^t_p, evaluated
/// on the sample grid of the input paths.
CMat convex_blend(const DiscretePath& path, const CVec& target, double chi);

/// Endpoint splice: straight runs of length `margin` from the original
/// endpoints onto the blended path, the middle reparameterized. Returns
/// samples on a grid of n_out segments.
CMat endpoint_splice(const CMat& blended, const CVec& start, const CVec& end, double margin,
                     int n_out);

/// Convex decomposition of c into on-quadric shell points: weights >= 0,
/// sum = 1, sum lambda_i a_i = c to 1e-8. The frame consists of phased
/// coordinate-pair null vectors at a fixed shell radius.
struct ConvexDecomposition {
    Eigen::VectorXd weights;
    CMat points;  // one row per frame point used
};
ConvexDecomposition convex_decompose(const CVec& c, const ShellConfig& shell, int frame_phases);

/// Frame of n(n-1)*m exact null vectors of norm rho used by the decomposition.
CMat quadric_frame(int n, int phases, double rho);

/// Replace a hull-valued path by a rapid traversal of decomposition points
/// inside Omega_delta, cell by cell, endpoints kept. The trapezoid integral
/// moves by less than `budget`, else BudgetExceeded.
DiscretePath oscillate(const DiscretePath& hull_path, const ShellConfig& shell, int K,
                       double budget, int frame_phases = 24);

/// Samplewise Newton retraction onto the quadric; reports the integral drift.
DiscretePath retract_path(const DiscretePath& path, double* drift_out = nullptr);

/// Full deformation: blend -> splice -> oscillate -> retract with the budget
/// split across stages. Guarantees, for every snapshot:
///   - t = 0 and frozen parameters: bit-identical to the inputs,
///   - endpoints bit-identical at every t,
///   - |quadrature - alpha^t| < epsilon.
HomotopyOfPaths deform_paths(const PathFamily& family, const TargetSchedule& schedule,
                             double epsilon, const DeformConfig& config = {});

} // namespace nullcurve
