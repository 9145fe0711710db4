#pragma once

#include "nullcurve/weierstrass.hpp"

namespace nullcurve {

using ScalarFn = std::function<Complex(Complex)>;

/// Complete holomorphic fields tangent to the quadric: the coordinate-plane
/// rotations and the Euler (scaling) field. Their flows preserve sum z_j^2
/// exactly.
struct TangentFlow {
    enum class Kind { rotation, scaling };
    Kind kind = Kind::scaling;
    int j = 0, k = 1;  // rotation plane

    static TangentFlow rotation(int j, int k) { return {Kind::rotation, j, k}; }
    static TangentFlow scaling() { return {Kind::scaling, 0, 0}; }
};

/// Flow for complex time t applied to an ambient vector; residual is preserved.
CVec apply_flow(const TangentFlow& flow, Complex t, const CVec& z);

/// Spray Psi(x, zeta) = phi^1_{zeta_1 h_1(x)} o ... o phi^N_{zeta_N h_N(x)}(f(x))
/// with Laurent-monomial coefficients h_j(x) = x^{m_j}.
struct SprayConfig {
    std::vector<TangentFlow> flows;
    std::vector<int> exponents;  // one monomial exponent per flow
    double ball_radius = 8.0;

    int size() const { return static_cast<int>(flows.size()); }
};

/// N = 4 n ell flows with kinds cycled over the rotation planes plus scaling
/// and exponents swept over -2..2.
SprayConfig default_spray_config(int n, int ell);

CVec evaluate_spray(const MapCn& f, const SprayConfig& config, const Eigen::VectorXcd& zeta,
                    Complex x, double beta = 1.0);
MapCn sprayed_map(const MapCn& f, const SprayConfig& config, Eigen::VectorXcd zeta,
                  double beta = 1.0);

struct PeriodJacobian {
    Eigen::MatrixXd matrix;  // 2 n ell x 2 N, real coordinates
    int rank = 0;
    bool submersive = false;
};

/// Central finite-difference Jacobian of zeta -> P(Psi(., zeta)) at zeta = 0.
/// Requires f nonflat on every basis loop.
PeriodJacobian period_jacobian(const MapCn& f, const ScalarFn& theta, int n,
                               const SprayConfig& config, const std::vector<BasisLoop>& basis,
                               double fd_step = 0.0, int N = 512);

/// Doubles the spray size (widening the exponent sweep) until the period map
/// is submersive; throws RankDeficient after max_growth attempts.
SprayConfig ensure_submersive(const MapCn& f, const ScalarFn& theta, int n, SprayConfig config,
                              const std::vector<BasisLoop>& basis, int max_growth = 3);

struct CorrectionResult {
    Eigen::VectorXcd zeta_star;
    double period_norm = 0;   // re-verified by an independent quadrature
    int iterations = 0;
    // homotopy trace through the parameter ball: zeta(t) = t * zeta_star
    Eigen::VectorXcd zeta_at(double t) const { return t * zeta_star; }
};

/// Damped least-norm Newton for P(Psi(., zeta)) = target inside the ball.
CorrectionResult solve_periods(const MapCn& f, const ScalarFn& theta, int n,
                               const SprayConfig& config, const std::vector<BasisLoop>& basis,
                               const PeriodVector& target, double tol,
                               Eigen::VectorXcd zeta0 = {}, int N = 512);

/// Exact null-curve correction along a scheduled period homotopy: the
/// imaginary periods are driven to zero through 16 solved knots while the
/// real periods stay at zero, so every snapshot is conformal-minimal data.
struct NullCorrection {
    MapCn f1;
    SprayConfig config;
    Eigen::VectorXcd zeta_star;
    std::vector<Eigen::VectorXcd> knots;      // zeta at t_k, k = 0..16
    std::vector<double> real_period_by_knot;  // max |Re P| per snapshot
    std::vector<double> period_by_knot;       // max |P| per snapshot
    IsotopyClass isotopy_class;
    double final_period_norm = 0;
    bool identity = false;  // input already had vanishing periods

    MapCn snapshot(int k) const;

private:
    friend NullCorrection correct_to_null(const MapCn&, const ScalarFn&, int,
                                          const std::vector<BasisLoop>&, double, double,
                                          std::optional<SprayConfig>);
    MapCn core_;
};

NullCorrection correct_to_null(const MapCn& f, const ScalarFn& theta, int n,
                               const std::vector<BasisLoop>& basis, double epsilon, double tol,
                               std::optional<SprayConfig> config = {});
NullCorrection correct_to_null(const WeierstrassData& data, const std::vector<BasisLoop>& basis,
                               double epsilon, double tol,
                               std::optional<SprayConfig> config = {});

/// A family member for the finite-parameter isotopy driver.
struct FamilyMember {
    MapCn map;
    std::string name;
};

/// Desk-scale family version: every non-frozen member is corrected to exact
/// null data; frozen members pass through untouched. Checks the four
/// conditions: fixed frozen/initial snapshots, sup-distance approximation,
/// vanishing real periods throughout, exact periods at t = 1.
struct FamilyIsotopy {
    std::vector<std::vector<MapCn>> snapshots;  // [member][knot]
    std::vector<bool> frozen;
    double max_sup_distance = 0;   // on the basis-loop reference grid
    double max_real_period = 0;
    double max_final_period = 0;
    int knot_count = 0;
};

FamilyIsotopy isotope_family(const std::vector<FamilyMember>& members,
                             const std::vector<int>& frozen, const ScalarFn& theta, int n,
                             const std::vector<BasisLoop>& basis, double epsilon, double tol,
                             std::optional<SprayConfig> config = {});

} // namespace nullcurve
