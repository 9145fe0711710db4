#include "nullcurve/spray.hpp"

#include <Eigen/QR>

#include "nullcurve/errors.hpp"

namespace nullcurve {

CVec apply_flow(const TangentFlow& flow, Complex t, const CVec& z) {
    double zn = z.norm();
    if (zn > 0 && std::abs(residual(z)) > 1e-8 * zn * zn)
        throw NotOnQuadric("flow applied off the quadric");
    if (flow.kind == TangentFlow::Kind::scaling) return std::exp(t) * z;
    CVec out = z;
    Complex c = std::cos(t), s = std::sin(t);
    out(flow.j) = c * z(flow.j) - s * z(flow.k);
    out(flow.k) = s * z(flow.j) + c * z(flow.k);
    return out;
}

SprayConfig default_spray_config(int n, int ell) {
    SprayConfig config;
    std::vector<TangentFlow> kinds;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) kinds.push_back(TangentFlow::rotation(j, k));
    kinds.push_back(TangentFlow::scaling());
    const int N = 4 * n * ell;
    const int exponent_span = 2;
    for (int idx = 0; idx < N; ++idx) {
        config.flows.push_back(kinds[idx % kinds.size()]);
        config.exponents.push_back(idx % (2 * exponent_span + 1) - exponent_span);
    }
    return config;
}

namespace {

Complex monomial(Complex x, int m) {
    if (m == 0) return Complex(1, 0);
    Complex base = m > 0 ? x : Complex(1, 0) / x;
    int e = std::abs(m);
    Complex acc(1, 0);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

CVec apply_flow_unchecked(const TangentFlow& flow, Complex t, const CVec& z) {
    if (flow.kind == TangentFlow::Kind::scaling) return std::exp(t) * z;
    CVec out = z;
    Complex c = std::cos(t), s = std::sin(t);
    out(flow.j) = c * z(flow.j) - s * z(flow.k);
    out(flow.k) = s * z(flow.j) + c * z(flow.k);
    return out;
}

} // namespace

CVec evaluate_spray(const MapCn& f, const SprayConfig& config, const Eigen::VectorXcd& zeta,
                    Complex x, double beta) {
    if (zeta.size() != config.size()) throw Error("evaluate_spray: zeta size mismatch");
    if (zeta.norm() > config.ball_radius)
        throw BallExceeded("|zeta| = " + std::to_string(zeta.norm()));
    CVec v = f(x);
    for (int j = config.size() - 1; j >= 0; --j) {
        Complex t = zeta(j) * beta * monomial(x, config.exponents[j]);
        v = apply_flow_unchecked(config.flows[j], t, v);
    }
    return v;
}

MapCn sprayed_map(const MapCn& f, const SprayConfig& config, Eigen::VectorXcd zeta, double beta) {
    return [f, config, zeta = std::move(zeta), beta](Complex x) {
        return evaluate_spray(f, config, zeta, x, beta);
    };
}

namespace {

Eigen::VectorXcd flatten(const PeriodVector& p) {
    Eigen::Index total = 0;
    for (const auto& e : p.entries) total += e.size();
    Eigen::VectorXcd v(total);
    Eigen::Index at = 0;
    for (const auto& e : p.entries) {
        v.segment(at, e.size()) = e;
        at += e.size();
    }
    return v;
}

Eigen::VectorXd realify(const Eigen::VectorXcd& v) {
    Eigen::VectorXd r(2 * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        r(2 * i) = v(i).real();
        r(2 * i + 1) = v(i).imag();
    }
    return r;
}

Eigen::VectorXcd spray_period_flat(const MapCn& f, const ScalarFn& theta, int n,
                                   const SprayConfig& config, const Eigen::VectorXcd& zeta,
                                   const std::vector<BasisLoop>& basis, int N) {
    MapCn psi = sprayed_map(f, config, zeta);
    MapCn form = [psi, theta](Complex z) { return CVec(psi(z) * theta(z)); };
    return flatten(periods(form, n, basis, N));
}

void check_nonflat_on_loops(const MapCn& f, int n, const std::vector<BasisLoop>& basis) {
    for (const auto& loop : basis) {
        DiscretePath path = sample_map_on_loop(f, n, loop, 64);
        if (!is_nonflat(path.samples))
            throw FlatOnLoop("map is flat along basis loop " + std::to_string(loop.index));
    }
}

} // namespace

PeriodJacobian period_jacobian(const MapCn& f, const ScalarFn& theta, int n,
                               const SprayConfig& config, const std::vector<BasisLoop>& basis,
                               double fd_step, int N) {
    check_nonflat_on_loops(f, n, basis);
    const int ell = static_cast<int>(basis.size());
    const int cols = config.size();
    const double h = fd_step > 0 ? fd_step : 1e-6 * config.ball_radius;

    Eigen::MatrixXcd Jc(static_cast<Eigen::Index>(n) * ell, cols);
    for (int j = 0; j < cols; ++j) {
        Eigen::VectorXcd zp = Eigen::VectorXcd::Zero(cols), zm = Eigen::VectorXcd::Zero(cols);
        zp(j) = h;
        zm(j) = -h;
        Jc.col(j) = (spray_period_flat(f, theta, n, config, zp, basis, N) -
                     spray_period_flat(f, theta, n, config, zm, basis, N)) /
                    (2 * h);
    }
    PeriodJacobian out;
    out.matrix.resize(2 * n * ell, 2 * cols);
    for (int j = 0; j < cols; ++j) {
        // the spray is holomorphic in zeta: the Im-zeta column is i times the
        // Re-zeta column
        for (Eigen::Index r = 0; r < Jc.rows(); ++r) {
            out.matrix(2 * r, j) = Jc(r, j).real();
            out.matrix(2 * r + 1, j) = Jc(r, j).imag();
            Complex rotated = Complex(0, 1) * Jc(r, j);
            out.matrix(2 * r, cols + j) = rotated.real();
            out.matrix(2 * r + 1, cols + j) = rotated.imag();
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.matrix);
    const auto& sv = svd.singularValues();
    out.rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-6 * sv(0)) ++out.rank;
    out.submersive = (out.rank == 2 * n * ell);
    return out;
}

SprayConfig ensure_submersive(const MapCn& f, const ScalarFn& theta, int n, SprayConfig config,
                              const std::vector<BasisLoop>& basis, int max_growth) {
    for (int attempt = 0; attempt <= max_growth; ++attempt) {
        PeriodJacobian jac = period_jacobian(f, theta, n, config, basis);
        if (jac.submersive) return config;
        // enlarge: double the flow count and widen the monomial sweep
        const int old = config.size();
        int span = 2 + attempt + 1;
        std::vector<TangentFlow> kinds;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) kinds.push_back(TangentFlow::rotation(j, k));
        kinds.push_back(TangentFlow::scaling());
        config.flows.clear();
        config.exponents.clear();
        for (int idx = 0; idx < 2 * old; ++idx) {
            config.flows.push_back(kinds[idx % kinds.size()]);
            config.exponents.push_back(idx % (2 * span + 1) - span);
        }
    }
    throw RankDeficient("period map stayed rank-deficient after enlarging the spray");
}

CorrectionResult solve_periods(const MapCn& f, const ScalarFn& theta, int n,
                               const SprayConfig& config, const std::vector<BasisLoop>& basis,
                               const PeriodVector& target, double tol, Eigen::VectorXcd zeta0,
                               int N) {
    const int cols = config.size();
    if (zeta0.size() == 0) zeta0 = Eigen::VectorXcd::Zero(cols);
    Eigen::VectorXcd target_flat = flatten(target);

    {
        PeriodJacobian jac = period_jacobian(f, theta, n, config, basis);
        if (!jac.submersive)
            throw RankDeficient("period map not submersive (rank " + std::to_string(jac.rank) +
                                " of " + std::to_string(2 * n * static_cast<int>(basis.size())) + ")");
    }

    Eigen::VectorXcd zeta = zeta0;
    CorrectionResult result;
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXcd g = spray_period_flat(f, theta, n, config, zeta, basis, N) - target_flat;
        double gn = realify(g).norm();
        result.iterations = it;
        if (gn <= tol) {
            result.zeta_star = zeta;
            // independent certificate: recompute at doubled quadrature
            Eigen::VectorXcd fine =
                spray_period_flat(f, theta, n, config, zeta, basis, 2 * N) - target_flat;
            result.period_norm = realify(fine).norm();
            if (result.period_norm > 10 * std::max(tol, 1e-14))
                throw NoConvergence("period certificate failed at doubled quadrature");
            return result;
        }

        // Jacobian at the current zeta
        const double h = 1e-6 * config.ball_radius;
        Eigen::MatrixXcd Jc(target_flat.size(), cols);
        for (int j = 0; j < cols; ++j) {
            Eigen::VectorXcd zp = zeta, zm = zeta;
            zp(j) += h;
            zm(j) -= h;
            Jc.col(j) = (spray_period_flat(f, theta, n, config, zp, basis, N) -
                         spray_period_flat(f, theta, n, config, zm, basis, N)) /
                        (2 * h);
        }
        Eigen::MatrixXd J(2 * target_flat.size(), 2 * cols);
        for (int j = 0; j < cols; ++j)
            for (Eigen::Index r = 0; r < Jc.rows(); ++r) {
                J(2 * r, j) = Jc(r, j).real();
                J(2 * r + 1, j) = Jc(r, j).imag();
                Complex rotated = Complex(0, 1) * Jc(r, j);
                J(2 * r, cols + j) = rotated.real();
                J(2 * r + 1, cols + j) = rotated.imag();
            }
        Eigen::VectorXd step_real = J.completeOrthogonalDecomposition().solve(-realify(g));
        Eigen::VectorXcd step(cols);
        for (int j = 0; j < cols; ++j) step(j) = Complex(step_real(j), step_real(cols + j));

        double lambda = 1.0;
        bool accepted = false;
        while (lambda > 1e-4) {
            Eigen::VectorXcd cand = zeta + lambda * step;
            if (cand.norm() > config.ball_radius) {
                lambda /= 2;
                continue;
            }
            double cand_gn =
                realify(spray_period_flat(f, theta, n, config, cand, basis, N) - target_flat)
                    .norm();
            if (cand_gn < (1 - 0.25 * lambda) * gn || cand_gn <= tol) {
                zeta = cand;
                accepted = true;
                break;
            }
            lambda /= 2;
        }
        if (!accepted)
            throw NoConvergence("Newton stalled at |P - target| = " + std::to_string(gn) +
                                " inside the parameter ball");
    }
    throw NoConvergence("period correction did not converge in 50 iterations");
}

MapCn NullCorrection::snapshot(int k) const {
    return sprayed_map(core_, config, knots.at(k));
}

NullCorrection correct_to_null(const MapCn& f, const ScalarFn& theta, int n,
                               const std::vector<BasisLoop>& basis, double epsilon, double tol,
                               std::optional<SprayConfig> config_opt) {
    NullCorrection out;
    out.core_ = f;

    check_nonflat_on_loops(f, n, basis);

    MapCn form = [f, theta](Complex z) { return CVec(f(z) * theta(z)); };
    PeriodVector p0 = periods(form, n, basis, 512);
    if (p0.max_abs_real() > 1e-6)
        throw NonzeroRealPeriods("input real periods " + std::to_string(p0.max_abs_real()));

    IsotopyClass base_class = classify(f, n, basis, 256);
    out.isotopy_class = base_class;

    if (p0.max_abs() <= tol) {
        out.identity = true;
        out.config = config_opt.value_or(default_spray_config(n, static_cast<int>(basis.size())));
        out.zeta_star = Eigen::VectorXcd::Zero(out.config.size());
        out.knots.assign(1, out.zeta_star);
        out.real_period_by_knot.assign(1, p0.max_abs_real());
        out.period_by_knot.assign(1, p0.max_abs());
        out.final_period_norm = p0.max_abs();
        out.f1 = f;
        return out;
    }

    SprayConfig config = ensure_submersive(
        f, theta, n, config_opt.value_or(default_spray_config(n, static_cast<int>(basis.size()))),
        basis);
    out.config = config;

    // scheduled targets: keep Re P = 0, shrink Im P linearly to zero
    PeriodVector schedule_base;
    for (const auto& e : p0.entries) {
        CVec proj(e.size());
        for (Eigen::Index i = 0; i < e.size(); ++i) proj(i) = Complex(0, e(i).imag());
        schedule_base.entries.push_back(std::move(proj));
    }

    const int knots = 16;
    Eigen::VectorXcd zeta = Eigen::VectorXcd::Zero(config.size());
    out.knots.push_back(zeta);
    out.real_period_by_knot.push_back(p0.max_abs_real());
    out.period_by_knot.push_back(p0.max_abs());

    for (int k = 1; k <= knots; ++k) {
        double t = static_cast<double>(k) / knots;
        PeriodVector target;
        for (const auto& e : schedule_base.entries) target.entries.push_back(CVec((1 - t) * e));
        CorrectionResult step = solve_periods(f, theta, n, config, basis, target, tol, zeta);
        zeta = step.zeta_star;
        out.knots.push_back(zeta);

        MapCn psi = sprayed_map(f, config, zeta);
        MapCn psi_form = [psi, theta](Complex z) { return CVec(psi(z) * theta(z)); };
        PeriodVector pk = periods(psi_form, n, basis, 512);
        out.real_period_by_knot.push_back(pk.max_abs_real());
        out.period_by_knot.push_back(pk.max_abs());
        if (pk.max_abs_real() > epsilon)
            throw Error("snapshot " + std::to_string(k) + " has real periods " +
                        std::to_string(pk.max_abs_real()) + " above epsilon");

        IsotopyClass knot_class = classify(psi, n, basis, 256);
        if (!(knot_class == base_class))
            throw ClassChanged("isotopy class changed at snapshot " + std::to_string(k));
        check_nonflat_on_loops(psi, n, basis);
    }

    out.zeta_star = zeta;
    out.f1 = sprayed_map(f, config, zeta);
    MapCn f1_form = [f1 = out.f1, theta](Complex z) { return CVec(f1(z) * theta(z)); };
    out.final_period_norm = periods(f1_form, n, basis, 1024).max_abs();
    if (out.final_period_norm > tol)
        throw NoConvergence("final periods " + std::to_string(out.final_period_norm) +
                            " above tolerance");
    return out;
}

NullCorrection correct_to_null(const WeierstrassData& data, const std::vector<BasisLoop>& basis,
                               double epsilon, double tol, std::optional<SprayConfig> config) {
    CompiledRational ct(data.theta);
    ScalarFn theta = [ct](Complex z) { return ct.eval(z); };
    return correct_to_null(data.map(), theta, data.n, basis, epsilon, tol, std::move(config));
}

FamilyIsotopy isotope_family(const std::vector<FamilyMember>& members,
                             const std::vector<int>& frozen, const ScalarFn& theta, int n,
                             const std::vector<BasisLoop>& basis, double epsilon, double tol,
                             std::optional<SprayConfig> config) {
    FamilyIsotopy out;
    out.snapshots.resize(members.size());
    out.frozen.assign(members.size(), false);
    for (int q : frozen) {
        if (q < 0 || q >= static_cast<int>(members.size()))
            throw Error("isotope_family: frozen index out of range");
        out.frozen[q] = true;
    }

    // reference grid for the sup-distance condition: the basis-loop samples
    std::vector<Complex> reference;
    for (const auto& loop : basis) {
        DiscretePath circle = sample_loop(loop, 256);
        for (int k = 0; k < 256; ++k) reference.push_back(circle.samples(k, 0));
    }

    int knot_count = 0;
    for (size_t p = 0; p < members.size(); ++p) {
        const MapCn& f = members[p].map;
        if (out.frozen[p]) {
            MapCn form = [f, theta](Complex z) { return CVec(f(z) * theta(z)); };
            PeriodVector pf = periods(form, n, basis, 512);
            if (pf.max_abs() > tol)
                throw Error("frozen member '" + members[p].name + "' has periods " +
                            std::to_string(pf.max_abs()) + " above tolerance");
            out.max_final_period = std::max(out.max_final_period, pf.max_abs());
            out.max_real_period = std::max(out.max_real_period, pf.max_abs_real());
            continue;
        }
        NullCorrection corr = correct_to_null(f, theta, n, basis, epsilon, tol, config);
        std::vector<MapCn> snaps;
        for (size_t k = 0; k < corr.knots.size(); ++k) snaps.push_back(corr.snapshot(static_cast<int>(k)));
        for (const auto& snap : snaps)
            for (Complex x : reference)
                out.max_sup_distance = std::max(out.max_sup_distance, (snap(x) - f(x)).norm());
        for (double r : corr.real_period_by_knot)
            out.max_real_period = std::max(out.max_real_period, r);
        out.max_final_period = std::max(out.max_final_period, corr.final_period_norm);
        knot_count = std::max<int>(knot_count, static_cast<int>(snaps.size()));
        out.snapshots[p] = std::move(snaps);
    }
    out.knot_count = knot_count;

    // frozen members keep their map at every knot, bitwise
    for (size_t p = 0; p < members.size(); ++p)
        if (out.frozen[p]) out.snapshots[p].assign(std::max(knot_count, 1), members[p].map);

    if (out.max_sup_distance >= epsilon)
        throw Error("family correction moved a member by " +
                    std::to_string(out.max_sup_distance) + " on the reference grid (epsilon " +
                    std::to_string(epsilon) + ")");
    if (out.max_real_period >= epsilon)
        throw Error("family correction left real periods " + std::to_string(out.max_real_period));
    return out;
}

} // namespace nullcurve
