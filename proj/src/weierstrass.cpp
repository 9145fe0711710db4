#include "nullcurve/weierstrass.hpp"

#include <cmath>
#include <memory>

#include "nullcurve/errors.hpp"

namespace nullcurve {

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes on [0,1] for edge integrals

namespace {

struct GaussRule {
    std::vector<double> nodes, weights;  // on [0,1]
};

const GaussRule& gauss64() {
    static const GaussRule rule = [] {
        constexpr int n = 64;
        GaussRule r;
        r.nodes.resize(n);
        r.weights.resize(n);
        for (int i = 0; i < n; ++i) {
            // Newton on P_n from the Chebyshev initial guess
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = 0;
                for (int j = 0; j < n; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
                }
                pp = n * (x * p0 - p1) / (x * x - 1);
                double dx = p0 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.nodes[i] = 0.5 * (1 - x);  // map [-1,1] -> [0,1], descending -> ascending
            r.weights[i] = 1.0 / ((1 - x * x) * pp * pp);
        }
        return r;
    }();
    return rule;
}

// \int_edge form(z) dz along a chart edge (radial segment or circular arc)
CVec edge_integral(const MapCn& form, int n, const GridSpec& spec, int i0, int j0, int i1,
                   int j1) {
    const GaussRule& gl = gauss64();
    CVec acc = CVec::Zero(n);
    Complex a = spec.node(i0, j0);
    if (i0 == i1) {
        // angular arc at fixed radius
        double r = std::abs(a - spec.center);
        double t0 = spec.theta0 + j0 * spec.dy();
        double t1 = spec.theta0 + j1 * spec.dy();
        for (size_t q = 0; q < gl.nodes.size(); ++q) {
            double th = t0 + gl.nodes[q] * (t1 - t0);
            Complex z = spec.center + r * std::exp(Complex(0, th));
            Complex dz = Complex(0, 1) * (z - spec.center) * (t1 - t0);
            acc += form(z) * (dz * gl.weights[q]);
        }
        return acc;
    }
    // radial segment at fixed angle
    Complex b = spec.node(i1, j1);
    for (size_t q = 0; q < gl.nodes.size(); ++q) {
        Complex z = a + gl.nodes[q] * (b - a);
        acc += form(z) * ((b - a) * gl.weights[q]);
    }
    return acc;
}

CVec straight_integral(const MapCn& form, int n, Complex a, Complex b) {
    const GaussRule& gl = gauss64();
    CVec acc = CVec::Zero(n);
    for (size_t q = 0; q < gl.nodes.size(); ++q) {
        Complex z = a + gl.nodes[q] * (b - a);
        acc += form(z) * ((b - a) * gl.weights[q]);
    }
    return acc;
}

} // namespace

// ---------------------------------------------------------------------------
// data and Osserman form

MapCn WeierstrassData::map() const {
    auto compiled = std::make_shared<std::vector<CompiledRational>>();
    for (const auto& fj : f) compiled->emplace_back(fj);
    int dim = n;
    return [compiled, dim](Complex z) {
        CVec v(dim);
        for (int j = 0; j < dim; ++j) v(j) = (*compiled)[j].eval(z);
        return v;
    };
}

MapCn WeierstrassData::form() const {
    auto compiled = std::make_shared<std::vector<CompiledRational>>();
    for (const auto& fj : f) compiled->emplace_back(fj);
    auto ctheta = std::make_shared<CompiledRational>(theta);
    int dim = n;
    return [compiled, ctheta, dim](Complex z) {
        Complex t = ctheta->eval(z);
        CVec v(dim);
        for (int j = 0; j < dim; ++j) v(j) = (*compiled)[j].eval(z) * t;
        return v;
    };
}

void WeierstrassData::validate(bool require_null) const {
    if (static_cast<int>(f.size()) != n)
        throw Error("WeierstrassData: expected " + std::to_string(n) + " components");
    for (const auto& fj : f) {
        Polynomial den = fj.den();
        for (const auto& p : domain.punctures) den = strip_root(den, p).second;
        if (den.degree() > 0)
            throw PoleAtSample("component " + fj.str() + " has a pole off the puncture set");
    }
    if (require_null && n >= 3) {
        std::vector<Complex> probes;
        for (int k = 0; k < 17; ++k) {
            Complex z = 0.37 + 1.31 * std::exp(Complex(0, 2 * M_PI * k / 17.0));
            bool near_puncture = false;
            for (const auto& p : domain.punctures)
                if (std::abs(z - p.to_complex()) < 1e-3) near_puncture = true;
            if (!near_puncture) probes.push_back(z);
        }
        double defect = nullity_residual(f, probes);
        if (defect > 1e-10)
            throw NotOnQuadric("nullity defect " + std::to_string(defect) + " on probe samples");
    }
}

std::array<RationalMap, 3> from_gw(const RationalMap& g, const RationalMap& eta) {
    RationalMap one = RationalMap::one();
    RationalMap i_const = RationalMap::constant(GaussQ::unit_i());
    RationalMap two = RationalMap::constant(GaussQ(2));
    RationalMap g2 = g * g;
    return {(one - g2) * eta, i_const * (one + g2) * eta, two * g * eta};
}

WeierstrassData data_from_gw(const RationalMap& g, const RationalMap& eta,
                             PuncturedDomain domain, std::string name, RationalMap theta) {
    WeierstrassData d;
    d.n = 3;
    auto fs = from_gw(g, eta);
    d.f.assign(fs.begin(), fs.end());
    d.theta = std::move(theta);
    d.domain = std::move(domain);
    d.name = std::move(name);
    d.g = g;
    d.eta = eta;
    d.validate();
    return d;
}

double nullity_residual(const std::vector<RationalMap>& f, const std::vector<Complex>& samples) {
    double worst = 0;
    for (Complex z : samples) {
        Complex s(0);
        for (const auto& fj : f) {
            Complex v = fj.eval(z);  // throws PoleAtSample at poles
            s += v * v;
        }
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// periods and flux

double PeriodVector::max_abs() const {
    double m = 0;
    for (const auto& e : entries) m = std::max(m, e.lpNorm<Eigen::Infinity>());
    return m;
}

double PeriodVector::max_abs_real() const {
    double m = 0;
    for (const auto& e : entries) m = std::max(m, e.real().lpNorm<Eigen::Infinity>());
    return m;
}

double FluxVector::max_abs() const {
    double m = 0;
    for (const auto& e : entries) m = std::max(m, e.lpNorm<Eigen::Infinity>());
    return m;
}

PeriodVector periods(const MapCn& form, int n, const std::vector<BasisLoop>& basis, int N) {
    PeriodVector out;
    for (const auto& loop : basis) {
        DiscretePath path = sample_loop(loop, N);
        CMat integrand(N + 1, n);
        for (int k = 0; k <= N; ++k)
            integrand.row(k) = form(path.samples(k, 0)).transpose();
        out.entries.push_back(contour_integral(integrand, path));
    }
    return out;
}

PeriodVector periods(const WeierstrassData& data, const std::vector<BasisLoop>& basis, int N) {
    return periods(data.form(), data.n, basis, N);
}

FluxVector flux(const PeriodVector& p) {
    FluxVector out;
    for (const auto& e : p.entries) out.entries.push_back(e.imag());
    return out;
}

FluxVector flux(const WeierstrassData& data, const std::vector<BasisLoop>& basis, int N) {
    return flux(periods(data, basis, N));
}

// ---------------------------------------------------------------------------
// classification

bool IsotopyClass::trivial() const {
    if (trivial_by_dimension) return true;
    for (int b : bits)
        if (b) return false;
    return true;
}

std::string IsotopyClass::str() const {
    if (trivial_by_dimension) return "trivial (n >= 4)";
    std::string s = "[";
    for (size_t i = 0; i < bits.size(); ++i) {
        if (i) s += ",";
        s += bits[i] ? "1" : "0";
    }
    return s + "]";
}

DiscretePath sample_map_on_loop(const MapCn& f, int n, const BasisLoop& loop, int N) {
    DiscretePath circle = sample_loop(loop, N);
    DiscretePath path;
    path.samples.resize(N + 1, n);
    for (int k = 0; k < N; ++k)
        path.samples.row(k) = f(circle.samples(k, 0)).transpose();
    path.samples.row(N) = path.samples.row(0);
    path.closed = true;
    return path;
}

IsotopyClass classify(const MapCn& f, int n, const std::vector<BasisLoop>& basis, int N,
                      bool strict_nonflat) {
    IsotopyClass cls;
    if (n != 3) {
        if (n < 3) throw DimensionNot3("classification needs n >= 3");
        cls.trivial_by_dimension = true;  // the punctured quadric is simply connected
        return cls;
    }
    std::vector<CVec> all_samples;
    std::vector<DiscretePath> loops;
    for (const auto& loop : basis) {
        DiscretePath path = sample_map_on_loop(f, n, loop, N);
        double max_mag = 0, min_mag = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= N; ++k) {
            double m = path.samples.row(k).norm();
            max_mag = std::max(max_mag, m);
            min_mag = std::min(min_mag, m);
            all_samples.push_back(path.samples.row(k).transpose());
        }
        if (min_mag < 1e-9 * std::max(max_mag, 1.0))
            throw ZeroOnContour("f has a zero on basis loop " + std::to_string(loop.index));
        loops.push_back(std::move(path));
    }
    cls.flat_data = !basis.empty() && !is_nonflat(all_samples);
    if (cls.flat_data && strict_nonflat)
        throw FlatData("samples lie on a single complex ray");
    for (auto& path : loops) cls.bits.push_back(spinor_monodromy(path) ? 1 : 0);
    return cls;
}

IsotopyClass classify(const WeierstrassData& data, const std::vector<BasisLoop>& basis, int N,
                      bool strict_nonflat) {
    return classify(data.map(), data.n, basis, N, strict_nonflat);
}

IsotopyClass winding_parity_class(const WeierstrassData& data,
                                  const std::vector<BasisLoop>& basis, int N) {
    if (!data.g || !data.eta)
        throw GNotHolomorphic("no (g, eta) decomposition attached to the data");
    Polynomial gden = data.g->den();
    for (const auto& p : data.domain.punctures) gden = strip_root(gden, p).second;
    if (gden.degree() > 0)
        throw GNotHolomorphic("g = " + data.g->str() + " has a pole off the puncture set");
    IsotopyClass cls;
    for (const auto& loop : basis) {
        int w = winding_number(*data.eta, loop, N);
        cls.bits.push_back(((w % 2) + 2) % 2);
    }
    return cls;
}

// ---------------------------------------------------------------------------
// grid integration

Complex GridSpec::node(int i, int j) const {
    double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / n_r);
    double th = theta0 + j * dy();
    return center + r * std::exp(Complex(0, th));
}

namespace {

SurfaceGrid integrate_tree(const MapCn& form, int n, const GridSpec& spec, Complex base_point,
                           const CVec& base_value, bool real_only) {
    if (spec.n_r < 1 || spec.n_theta < 3) throw GridTooSmall();
    const int rows = spec.rows(), cols = spec.cols();
    SurfaceGrid grid;
    grid.spec = spec;
    grid.base_point = base_point;
    grid.base_value = base_value;
    grid.values.resize(rows * cols, n);

    // edge integrals: ang(i,j) = edge (i,j)->(i,j+1), rad(i,j) = (i,j)->(i+1,j)
    std::vector<CVec> ang(rows * spec.n_theta), rad((rows - 1) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < spec.n_theta; ++j)
            ang[i * spec.n_theta + j] = edge_integral(form, n, spec, i, j, i, j + 1);
    for (int i = 0; i + 1 < rows; ++i)
        for (int j = 0; j < cols; ++j)
            rad[i * cols + j] = edge_integral(form, n, spec, i, j, i + 1, j);

    // closure around the core circle: the homology defect of the grid
    if (spec.wrap) {
        CVec ring = CVec::Zero(n);
        for (int j = 0; j < spec.n_theta; ++j) ring += ang[j];
        grid.seam_defect = real_only ? ring.real().template lpNorm<Eigen::Infinity>()
                                     : ring.template lpNorm<Eigen::Infinity>();
        if (grid.seam_defect > 1e-6) {
            if (real_only)
                throw NonzeroRealPeriods("real period defect " + std::to_string(grid.seam_defect));
            throw NonzeroPeriods("period defect " + std::to_string(grid.seam_defect));
        }
    }

    auto accumulate = [&](const CVec& base, const CVec& delta) -> CVec {
        if (real_only) return base + CVec(delta.real().template cast<Complex>());
        return base + delta;
    };

    // anchor: value at node (0,0) comes from a straight segment off base_point
    CVec anchor = accumulate(base_value, straight_integral(form, n, base_point, spec.node(0, 0)));
    grid.values.row(0) = anchor.transpose();
    for (int j = 1; j < cols; ++j)
        grid.values.row(j) =
            accumulate(grid.values.row(j - 1).transpose(), ang[j - 1]).transpose();
    for (int i = 1; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            grid.values.row(i * cols + j) =
                accumulate(grid.values.row((i - 1) * cols + j).transpose(),
                           rad[(i - 1) * cols + j])
                    .transpose();

    // plaquette defects: tree-independent closure of every grid cell
    double worst = 0;
    for (int i = 0; i + 1 < rows; ++i) {
        for (int j = 0; j < spec.n_theta; ++j) {
            int jp = spec.wrap ? (j + 1) % cols : j + 1;
            CVec cyc = ang[i * spec.n_theta + j] + rad[i * cols + jp] -
                       ang[(i + 1) * spec.n_theta + j] - rad[i * cols + j];
            double d = real_only ? cyc.real().template lpNorm<Eigen::Infinity>()
                                 : cyc.template lpNorm<Eigen::Infinity>();
            worst = std::max(worst, d);
        }
    }
    grid.max_plaquette_defect = worst;
    return grid;
}

} // namespace

SurfaceGrid integrate_complex(const MapCn& form, int n, const GridSpec& spec,
                              Complex base_point, const CVec& base_value) {
    return integrate_tree(form, n, spec, base_point, base_value, false);
}

SurfaceGrid integrate_complex(const WeierstrassData& data, const GridSpec& spec,
                              Complex base_point, const CVec& base_value) {
    return integrate_tree(data.form(), data.n, spec, base_point, base_value, false);
}

SurfaceGrid integrate_real(const MapCn& form, int n, const GridSpec& spec, Complex base_point,
                           const Eigen::VectorXd& base_value) {
    return integrate_tree(form, n, spec, base_point, base_value.cast<Complex>(), true);
}

SurfaceGrid integrate_real(const WeierstrassData& data, const GridSpec& spec,
                           Complex base_point, const Eigen::VectorXd& base_value) {
    return integrate_tree(data.form(), data.n, spec, base_point, base_value.cast<Complex>(),
                          true);
}

} // namespace nullcurve
