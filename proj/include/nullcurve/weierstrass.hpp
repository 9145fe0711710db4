#pragma once

#include <array>
#include <functional>

#include "nullcurve/quadric.hpp"

namespace nullcurve {

/// Evaluable map M -> C^n (rational data, sprayed data, ...).
using MapCn = std::function<CVec(Complex)>;

/// Holomorphic data (f_1,...,f_n) with a 1-form theta = r(z) dz on a
/// punctured planar domain. For n = 3 the Weierstrass pair (g, eta) that
/// produced f is kept when known.
struct WeierstrassData {
    int n = 3;
    std::vector<RationalMap> f;
    RationalMap theta = RationalMap::one();
    PuncturedDomain domain;
    std::string name;
    std::optional<RationalMap> g, eta;

    /// f as a plain evaluable map (coefficients lifted to doubles once).
    MapCn map() const;
    /// f * theta as an evaluable map (the 1-form integrand).
    MapCn form() const;

    /// Throws unless every f_j is pole-free on the domain (denominator roots
    /// are punctures, checked by exact factor removal) and the nullity defect
    /// on probe samples is below 1e-10.
    void validate(bool require_null = true) const;
};

/// Osserman form: ((1-g^2) eta, i(1+g^2) eta, 2 g eta), reduced exactly.
std::array<RationalMap, 3> from_gw(const RationalMap& g, const RationalMap& eta);
WeierstrassData data_from_gw(const RationalMap& g, const RationalMap& eta,
                             PuncturedDomain domain, std::string name = "",
                             RationalMap theta = RationalMap::one());

/// max_k |sum_j f_j(z_k)^2| over the given sample points
double nullity_residual(const std::vector<RationalMap>& f, const std::vector<Complex>& samples);

/// Contour integrals of f theta over the homology basis.
struct PeriodVector {
    std::vector<CVec> entries;  // one C^n vector per basis loop
    double max_abs() const;
    double max_abs_real() const;
};

/// Imaginary parts of the periods: the flux homomorphism on the basis.
struct FluxVector {
    std::vector<Eigen::VectorXd> entries;
    double max_abs() const;
};

PeriodVector periods(const MapCn& form, int n, const std::vector<BasisLoop>& basis, int N = 512);
PeriodVector periods(const WeierstrassData& data, const std::vector<BasisLoop>& basis, int N = 512);
FluxVector flux(const PeriodVector& periods);
FluxVector flux(const WeierstrassData& data, const std::vector<BasisLoop>& basis, int N = 512);

/// Z_2^l class of a quadric-valued map for n = 3 (trivial singleton for n >= 4).
/// The correspondence with isotopy classes of immersions needs nonflat data;
/// flat data still has a well-defined class of the map itself (flat_data is
/// set so callers can surface a notice).
struct IsotopyClass {
    std::vector<int> bits;          // one Z_2 bit per basis loop when n = 3
    bool trivial_by_dimension = false;  // n >= 4
    bool flat_data = false;

    bool trivial() const;
    std::string str() const;
    friend bool operator==(const IsotopyClass& a, const IsotopyClass& b) {
        return a.bits == b.bits && a.trivial_by_dimension == b.trivial_by_dimension;
    }
};

/// Sample f along each basis loop and read off the spinor monodromy bit.
IsotopyClass classify(const MapCn& f, int n, const std::vector<BasisLoop>& basis, int N = 256,
                      bool strict_nonflat = false);
IsotopyClass classify(const WeierstrassData& data, const std::vector<BasisLoop>& basis,
                      int N = 256, bool strict_nonflat = false);

/// Independent route for holomorphic g: bit i = parity of the winding of eta
/// around loop i (eta has a square root iff every winding is even).
IsotopyClass winding_parity_class(const WeierstrassData& data,
                                  const std::vector<BasisLoop>& basis, int N = 512);

/// Log-polar chart grid: nodes center + r_i e^{i theta_j} with geometric radii
/// (uniform in x = log r) and uniform angles. wrap identifies theta_1 with
/// theta_0 + full turn; an unwrapped chart is simply connected (universal
/// cover of the annulus when the angle span exceeds 2 pi).
struct GridSpec {
    Complex center{0, 0};
    double r_min = 0.5, r_max = 2.0;
    int n_r = 32, n_theta = 64;
    double theta0 = 0.0, theta1 = 2 * M_PI;
    bool wrap = true;

    int rows() const { return n_r + 1; }
    int cols() const { return wrap ? n_theta : n_theta + 1; }
    double dx() const { return std::log(r_max / r_min) / n_r; }
    double dy() const { return (theta1 - theta0) / n_theta; }
    Complex node(int i, int j) const;
};

/// Values of an integral F = \int f theta (or u = Re F) over a chart grid.
struct SurfaceGrid {
    GridSpec spec;
    CMat values;  // (rows*cols) x n, node (i,j) at row i*cols + j
    Complex base_point;
    CVec base_value;
    double max_plaquette_defect = 0;
    double seam_defect = 0;  // closure defect around the core circle (wrap grids)

    const Eigen::Block<const CMat, 1> value(int i, int j) const {
        return values.block<1, Eigen::Dynamic>(i * spec.cols() + j, 0, 1, values.cols());
    }
    Eigen::MatrixXd real_part() const { return values.real(); }
};

/// Integrate f theta over the spanning tree of the grid (ring 0 + radial
/// spokes), Gauss-Legendre on every edge. Throws NonzeroPeriods when the
/// closure defect around the core circle exceeds 1e-6.
SurfaceGrid integrate_complex(const MapCn& form, int n, const GridSpec& spec,
                              Complex base_point, const CVec& base_value);
SurfaceGrid integrate_complex(const WeierstrassData& data, const GridSpec& spec,
                              Complex base_point, const CVec& base_value);

/// Real-part integral: u = \int Re(f theta). Requires vanishing real periods
/// (seam closure of the real parts below 1e-6), else NonzeroRealPeriods.
SurfaceGrid integrate_real(const MapCn& form, int n, const GridSpec& spec,
                           Complex base_point, const Eigen::VectorXd& base_value);
SurfaceGrid integrate_real(const WeierstrassData& data, const GridSpec& spec,
                           Complex base_point, const Eigen::VectorXd& base_value);

/// Samples of f along a basis loop as an on-quadric discrete path.
DiscretePath sample_map_on_loop(const MapCn& f, int n, const BasisLoop& loop, int N);

} // namespace nullcurve
