#include "nullcurve/domain.hpp"

#include <cmath>

#include "nullcurve/errors.hpp"

namespace nullcurve {

PuncturedDomain make_domain(std::vector<GaussQ> punctures, DomainKind kind,
                            mpq_class r_inner, mpq_class r_outer, std::string label) {
    PuncturedDomain d;
    d.kind = kind;
    d.label = std::move(label);
    for (size_t i = 0; i < punctures.size(); ++i)
        for (size_t j = i + 1; j < punctures.size(); ++j)
            if (punctures[i] == punctures[j])
                throw DuplicatePuncture("puncture " + punctures[i].str() + " repeated");
    d.punctures = std::move(punctures);
    if (kind == DomainKind::annulus) {
        if (!(r_inner > 0 && r_inner < r_outer))
            throw Error("annulus radii must satisfy 0 < r_inner < r_outer");
        if (!d.punctures.empty())
            throw Error("annulus domain does not take punctures");
        d.r_inner = std::move(r_inner);
        d.r_outer = std::move(r_outer);
    }
    return d;
}

namespace {

bool radius_admissible(const GaussQ& center, const mpq_class& radius,
                       const std::vector<Complex>& exceptional) {
    Complex c = center.to_complex();
    double r = radius.get_d();
    for (Complex e : exceptional) {
        double d = std::abs(std::abs(e - c) - r);
        if (d <= 1e-3 * r) return false;
    }
    return true;
}

mpq_class choose_radius(const GaussQ& center, const mpq_class& base,
                        const std::vector<Complex>& exceptional) {
    if (radius_admissible(center, base, exceptional)) return base;
    // dyadic sweep below the base radius: 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ...
    int attempts = 0;
    for (long denom = 2; attempts < 64; denom *= 2) {
        for (long k = 1; k < denom && attempts < 64; k += 2) {
            ++attempts;
            mpq_class cand = base * mpq_class(k, denom);
            if (radius_admissible(center, cand, exceptional)) return cand;
        }
    }
    throw NoAdmissibleRadius("no admissible loop radius around " + center.str() +
                             " after 64 attempts");
}

} // namespace

std::vector<BasisLoop> homology_basis(const PuncturedDomain& domain,
                                      const std::vector<Complex>& exceptional,
                                      std::optional<mpq_class> radius_override) {
    for (Complex e : exceptional)
        for (const GaussQ& p : domain.punctures)
            if (std::abs(e - p.to_complex()) < 1e-12)
                throw Error("exceptional point coincides with puncture " + p.str());

    std::vector<BasisLoop> loops;
    if (domain.kind == DomainKind::annulus) {
        BasisLoop core;
        core.center = GaussQ(0);
        core.radius = radius_override ? *radius_override
                                      : mpq_class((domain.r_inner + domain.r_outer) / 2);
        core.index = 1;
        core.radius = choose_radius(core.center, core.radius, exceptional);
        loops.push_back(std::move(core));
        return loops;
    }

    const auto& ps = domain.punctures;
    for (size_t i = 0; i < ps.size(); ++i) {
        mpq_class base;
        if (radius_override) {
            base = *radius_override;
        } else if (ps.size() == 1) {
            base = 1;
        } else {
            mpq_class min_sq(-1);
            for (size_t j = 0; j < ps.size(); ++j) {
                if (j == i) continue;
                mpq_class d2 = (ps[j] - ps[i]).norm();
                if (min_sq < 0 || d2 < min_sq) min_sq = d2;
            }
            // 7/16 of the nearest distance: strictly under the half-distance
            // bound so neighboring loops cannot touch
            base = rational_sqrt_lower(min_sq) * mpq_class(7, 16);
        }
        BasisLoop loop;
        loop.center = ps[i];
        loop.index = static_cast<int>(i) + 1;
        loop.radius = choose_radius(loop.center, base, exceptional);
        loops.push_back(std::move(loop));
    }
    return loops;
}

double DiscretePath::max_quadric_residual() const {
    double worst = 0;
    for (Eigen::Index k = 0; k < samples.rows(); ++k) {
        Complex s(0);
        for (Eigen::Index j = 0; j < samples.cols(); ++j) s += samples(k, j) * samples(k, j);
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

double DiscretePath::max_relative_quadric_residual() const {
    double worst = 0;
    for (Eigen::Index k = 0; k < samples.rows(); ++k) {
        Complex s(0);
        for (Eigen::Index j = 0; j < samples.cols(); ++j) s += samples(k, j) * samples(k, j);
        worst = std::max(worst, std::abs(s) / std::max(1.0, samples.row(k).squaredNorm()));
    }
    return worst;
}

double DiscretePath::min_norm() const {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < samples.rows(); ++k)
        best = std::min(best, samples.row(k).norm());
    return best;
}

DiscretePath sample_loop(const BasisLoop& loop, int N) {
    if (N < 8 || N % 2 != 0) throw Error("sample_loop: N must be even and >= 8");
    DiscretePath path;
    path.samples.resize(N + 1, 1);
    Complex c = loop.center_c();
    double r = loop.radius_d();
    for (int k = 0; k < N; ++k)
        path.samples(k, 0) = c + r * std::exp(Complex(0, 2 * M_PI * k / N));
    path.samples(N, 0) = path.samples(0, 0);
    path.closed = true;
    path.is_circle = true;
    path.circle_center = c;
    path.circle_radius = r;
    return path;
}

CVec path_quadrature(const CMat& samples) {
    Eigen::Index N = samples.rows() - 1;
    CVec acc = 0.5 * (samples.row(0) + samples.row(N)).transpose();
    for (Eigen::Index k = 1; k < N; ++k) acc += samples.row(k).transpose();
    return acc / static_cast<double>(N);
}

CVec path_quadrature(const DiscretePath& path) { return path_quadrature(path.samples); }

CVec contour_integral(const CMat& integrand, const DiscretePath& path) {
    if (integrand.rows() != path.samples.rows())
        throw SampleCountMismatch("integrand sampled at " + std::to_string(integrand.rows()) +
                                  " points, path has " + std::to_string(path.samples.rows()));
    Eigen::Index N = path.segments();
    CVec acc = CVec::Zero(integrand.cols());
    if (path.is_circle && path.closed) {
        // gamma'(s_k) = 2 pi i (gamma(s_k) - center); periodic trapezoid
        for (Eigen::Index k = 0; k < N; ++k) {
            Complex dgamma = Complex(0, 2 * M_PI) * (path.samples(k, 0) - path.circle_center);
            acc += integrand.row(k).transpose() * dgamma;
        }
        return acc / static_cast<double>(N);
    }
    for (Eigen::Index k = 0; k < N; ++k) {
        Complex dz = path.samples(k + 1, 0) - path.samples(k, 0);
        acc += 0.5 * (integrand.row(k) + integrand.row(k + 1)).transpose() * dz;
    }
    return acc;
}

int winding_number(const RationalMap& r, const BasisLoop& loop, int N) {
    DiscretePath path = sample_loop(loop, N);
    RationalMap dr = r.derivative();
    CompiledRational cr(r), cdr(dr);

    double max_mag = 0, min_mag = std::numeric_limits<double>::infinity();
    std::vector<Complex> vals(N + 1);
    for (int k = 0; k <= N; ++k) {
        Complex z = path.samples(k, 0);
        if (r.is_pole(z, 1e-9)) throw ZeroOnContour("pole of r on the loop");
        Complex v = cr.eval(z);
        vals[k] = v;
        max_mag = std::max(max_mag, std::abs(v));
        min_mag = std::min(min_mag, std::abs(v));
    }
    if (min_mag < 1e-9 * std::max(max_mag, 1.0))
        throw ZeroOnContour("zero of r on the loop");
    CMat integrand(N + 1, 1);
    for (int k = 0; k <= N; ++k)
        integrand(k, 0) = cdr.eval(path.samples(k, 0)) / vals[k];
    Complex w = contour_integral(integrand, path)(0) / Complex(0, 2 * M_PI);
    double rounded = std::round(w.real());
    if (std::abs(w - Complex(rounded, 0)) >= 0.1)
        throw NonIntegralWinding("winding residue " + std::to_string(std::abs(w - Complex(rounded, 0))));
    return static_cast<int>(rounded);
}

} // namespace nullcurve
