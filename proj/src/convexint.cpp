#include "nullcurve/convexint.hpp"

#include <algorithm>
#include <cmath>

#include "nullcurve/errors.hpp"
#include "nullcurve/nnls.hpp"

namespace nullcurve {

namespace {

long pow2ceil(double x) {
    long k = 1;
    while (k < x) k *= 2;
    return k;
}

CVec trapezoid(const CMat& samples) { return path_quadrature(samples); }

} // namespace

void PathFamily::validate() const {
    if (paths.empty()) throw Error("PathFamily: empty parameter set");
    Eigen::Index N = paths.front().samples.rows();
    for (const auto& p : paths) {
        if (p.samples.rows() != N) throw SampleCountMismatch("family paths must share N");
        if (p.dim() != n) throw Error("PathFamily: dimension mismatch");
        if (!p.on_quadric())
            throw NotOnQuadric("family path leaves the quadric by " +
                               std::to_string(p.max_quadric_residual()));
    }
    for (int q : frozen)
        if (q < 0 || q >= static_cast<int>(paths.size()))
            throw Error("PathFamily: frozen index out of range");
}

void TargetSchedule::validate(const PathFamily& family) const {
    if (targets.size() != family.paths.size())
        throw Error("TargetSchedule: one target row per parameter required");
    for (size_t p = 0; p < targets.size(); ++p) {
        if (static_cast<int>(targets[p].size()) != T + 1)
            throw Error("TargetSchedule: expected T+1 snapshots");
        CVec alpha0 = path_quadrature(family.paths[p]);
        double scale = 1.0 + alpha0.norm();
        if ((targets[p][0] - alpha0).norm() > 1e-10 * scale)
            throw Error("TargetSchedule: alpha^0 must equal the path integral (parameter " +
                        std::to_string(p) + ")");
        if (family.is_frozen(static_cast<int>(p)))
            for (const auto& a : targets[p])
                if ((a - alpha0).norm() > 1e-10 * scale)
                    throw Error("TargetSchedule: frozen parameters need constant targets");
    }
}

TargetSchedule TargetSchedule::linear(const PathFamily& family,
                                      const std::vector<CVec>& final_targets, int T) {
    TargetSchedule s;
    s.T = T;
    for (size_t p = 0; p < family.paths.size(); ++p) {
        CVec alpha0 = path_quadrature(family.paths[p]);
        CVec alpha1 = family.is_frozen(static_cast<int>(p)) ? alpha0 : final_targets.at(p);
        std::vector<CVec> row;
        for (int k = 0; k <= T; ++k) {
            double t = static_cast<double>(k) / T;
            row.push_back((1 - t) * alpha0 + t * alpha1);
        }
        s.targets.push_back(std::move(row));
    }
    return s;
}

CMat convex_blend(const DiscretePath& path, const CVec& target, double chi) {
    CMat out(path.samples.rows(), path.samples.cols());
    for (Eigen::Index k = 0; k < out.rows(); ++k)
        out.row(k) = chi * path.samples.row(k) + (1 - chi) * target.transpose();
    return out;
}

namespace {

// value of the piecewise-linear interpolant of `samples` at s in [0,1]
CVec interp(const CMat& samples, double s) {
    Eigen::Index N = samples.rows() - 1;
    double x = std::clamp(s, 0.0, 1.0) * N;
    Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(x), N - 1);
    double w = x - k;
    return ((1 - w) * samples.row(k) + w * samples.row(k + 1)).transpose();
}

} // namespace

CMat endpoint_splice(const CMat& blended, const CVec& start, const CVec& end, double margin,
                     int n_out) {
    if (!(margin > 0 && margin < 1.0 / 3)) throw BadMargin("margin must lie in (0, 1/3)");
    CVec b0 = blended.row(0).transpose(), b1 = blended.row(blended.rows() - 1).transpose();
    if (b0 == start && b1 == end && blended.rows() == n_out + 1) return blended;
    CMat out(n_out + 1, blended.cols());
    for (int k = 0; k <= n_out; ++k) {
        double s = static_cast<double>(k) / n_out;
        if (s <= margin) {
            double w = s / margin;
            out.row(k) = ((1 - w) * start + w * b0).transpose();
        } else if (s >= 1 - margin) {
            double w = (s - (1 - margin)) / margin;
            out.row(k) = ((1 - w) * b1 + w * end).transpose();
        } else {
            out.row(k) = interp(blended, (s - margin) / (1 - 2 * margin)).transpose();
        }
    }
    out.row(0) = start.transpose();
    out.row(n_out) = end.transpose();
    return out;
}

CMat quadric_frame(int n, int phases, double rho) {
    const double base = rho / std::sqrt(2.0);
    CMat frame(static_cast<Eigen::Index>(n) * (n - 1) * phases, n);
    Eigen::Index row = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int sgn = 0; sgn < 2; ++sgn)
                for (int j = 0; j < phases; ++j) {
                    CVec v = CVec::Zero(n);
                    Complex phase = base * std::exp(Complex(0, 2 * M_PI * j / phases));
                    v(a) = phase;
                    v(b) = (sgn ? -1.0 : 1.0) * Complex(0, 1) * phase;
                    frame.row(row++) = v.transpose();
                }
    return frame;
}

namespace {

double frame_radius(const ShellConfig& shell) {
    double rho = 0.7 * shell.r1;
    if (rho <= shell.r0) rho = 0.5 * (shell.r0 + shell.r1);
    return rho;
}

} // namespace

ConvexDecomposition convex_decompose(const CVec& c, const ShellConfig& shell, int frame_phases) {
    const int n = static_cast<int>(c.size());
    const double rho = frame_radius(shell);
    CMat frame = quadric_frame(n, frame_phases, rho);
    ConvexDecomposition out;

    if (c.norm() < 1e-14 * shell.r1) {  // antipodal pair around the origin
        out.points.resize(2, n);
        out.points.row(0) = frame.row(0);
        out.points.row(1) = -frame.row(0).transpose();
        out.weights = Eigen::Vector2d(0.5, 0.5);
        return out;
    }
    double nrm = c.norm();
    if (std::abs(residual(c)) < 0.9 * shell.delta && shell.r0 < nrm && nrm < shell.r1) {
        out.points.resize(1, n);  // c is already an admissible shell point
        out.points.row(0) = c.transpose();
        out.weights = Eigen::VectorXd::Ones(1);
        return out;
    }

    const Eigen::Index F = frame.rows();
    const double w = std::max(1.0, frame.lpNorm<Eigen::Infinity>());
    Eigen::MatrixXd A(2 * n + 1, F);
    Eigen::VectorXd b(2 * n + 1);
    A.topRows(n) = frame.transpose().real();
    A.middleRows(n, n) = frame.transpose().imag();
    A.row(2 * n).setConstant(w);
    b.head(n) = c.real();
    b.segment(n, n) = c.imag();
    b(2 * n) = w;

    Eigen::VectorXd lam = nnls(A, b);

    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < F; ++i)
        if (lam(i) > 1e-12) support.push_back(i);
    if (!support.empty()) {
        // polish on the support: exact equality + unit mass by least squares
        Eigen::MatrixXd As(2 * n + 1, static_cast<Eigen::Index>(support.size()));
        for (size_t k = 0; k < support.size(); ++k) As.col(static_cast<Eigen::Index>(k)) = A.col(support[k]);
        Eigen::VectorXd polished = As.completeOrthogonalDecomposition().solve(b);
        if (polished.minCoeff() >= 0)
            for (size_t k = 0; k < support.size(); ++k) lam(support[k]) = polished(static_cast<Eigen::Index>(k));
    }

    double scale = std::max(1.0, c.norm());
    CVec achieved = CVec::Zero(n);
    double mass = 0;
    for (Eigen::Index i : support) {
        achieved += lam(i) * frame.row(i).transpose();
        mass += lam(i);
    }
    if ((achieved - c).norm() + std::abs(mass - 1.0) > 1e-8 * scale)
        throw Infeasible("decomposition residual " +
                         std::to_string((achieved - c).norm() + std::abs(mass - 1.0)) +
                         "; try larger frame_phases or a larger shell");

    out.points.resize(static_cast<Eigen::Index>(support.size()), n);
    out.weights.resize(static_cast<Eigen::Index>(support.size()));
    for (size_t k = 0; k < support.size(); ++k) {
        out.points.row(static_cast<Eigen::Index>(k)) = frame.row(support[k]);
        out.weights(static_cast<Eigen::Index>(k)) = lam(support[k]);
    }
    return out;
}

DiscretePath oscillate(const DiscretePath& hull_path, const ShellConfig& shell, int K,
                       double budget, int frame_phases) {
    if (K < 8) throw Error("oscillate: K too small (need K >= 8 cells)");
    const Eigen::Index N = hull_path.segments();
    const int n = hull_path.dim();
    if (N % K != 0) throw Error("oscillate: sample count must be divisible by K");
    const Eigen::Index M = N / K;

    bool all_inside = true;
    for (Eigen::Index k = 0; k <= N && all_inside; ++k)
        all_inside = shell.contains(hull_path.samples.row(k).transpose());
    if (all_inside) return hull_path;

    const double rho = frame_radius(shell);
    CMat frame = quadric_frame(n, frame_phases, rho);
    const Eigen::Index F = frame.rows();
    Eigen::VectorXd desired = Eigen::VectorXd::Zero(F);
    Eigen::VectorXi allocated = Eigen::VectorXi::Zero(F);

    DiscretePath out = hull_path;
    for (int j = 0; j < K; ++j) {
        Eigen::Index lo = static_cast<Eigen::Index>(j) * M;
        Eigen::Index slots_lo = (j == 0) ? 1 : lo;  // global start sample stays
        Eigen::Index slots = lo + M - slots_lo;
        bool cell_inside = true;
        for (Eigen::Index k = lo; k <= lo + M && cell_inside; ++k)
            cell_inside = shell.contains(hull_path.samples.row(k).transpose());
        if (cell_inside) continue;

        CVec mean = CVec::Zero(n);
        for (Eigen::Index k = slots_lo; k < lo + M; ++k) mean += hull_path.samples.row(k).transpose();
        mean /= static_cast<double>(slots);

        ConvexDecomposition dec = convex_decompose(mean, shell, frame_phases);

        // map decomposition points back to global frame rows (or the two
        // special-case forms) so the running allocation stays telescoping
        std::vector<Eigen::Index> rows_of_points(dec.points.rows(), -1);
        for (Eigen::Index r = 0; r < dec.points.rows(); ++r)
            for (Eigen::Index i = 0; i < F; ++i)
                if ((frame.row(i) - dec.points.row(r)).norm() < 1e-14 * rho) {
                    rows_of_points[r] = i;
                    break;
                }

        std::vector<std::pair<Eigen::Index, long>> plan;  // (point row, count)
        long total = 0;
        for (Eigen::Index r = 0; r < dec.points.rows(); ++r) {
            long cnt;
            Eigen::Index fi = rows_of_points[r];
            if (fi >= 0) {
                desired(fi) += dec.weights(r) * static_cast<double>(slots);
                cnt = std::lround(std::floor(desired(fi) + 0.5)) - allocated(fi);
                if (cnt < 0) cnt = 0;
                allocated(fi) += static_cast<int>(cnt);
            } else {
                cnt = std::lround(dec.weights(r) * static_cast<double>(slots));
            }
            plan.emplace_back(r, cnt);
            total += cnt;
        }
        // force the exact slot count, correcting the largest allocation
        Eigen::Index biggest = 0;
        for (size_t r = 1; r < plan.size(); ++r)
            if (dec.weights(plan[r].first) > dec.weights(plan[biggest].first)) biggest = static_cast<Eigen::Index>(r);
        plan[biggest].second += slots - total;
        if (plan[biggest].second < 0) throw BudgetExceeded("oscillation cell allocation failed");
        if (rows_of_points[plan[biggest].first] >= 0)
            allocated(rows_of_points[plan[biggest].first]) += static_cast<int>(slots - total);

        Eigen::Index pos = slots_lo;
        for (const auto& [r, cnt] : plan)
            for (long c = 0; c < cnt; ++c) out.samples.row(pos++) = dec.points.row(r);
    }

    CVec drift = trapezoid(out.samples) - trapezoid(hull_path.samples);
    if (drift.norm() >= budget)
        throw BudgetExceeded("oscillation moved the integral by " + std::to_string(drift.norm()) +
                             " (budget " + std::to_string(budget) + ")");
    out.is_circle = false;
    return out;
}

DiscretePath retract_path(const DiscretePath& path, double* drift_out) {
    DiscretePath out = path;
    for (Eigen::Index k = 0; k < out.samples.rows(); ++k) {
        CVec z = out.samples.row(k).transpose();
        double tol = 1e-12 * std::max(1.0, z.squaredNorm());
        out.samples.row(k) = retract(z, tol).transpose();
    }
    if (drift_out)
        *drift_out = (trapezoid(out.samples) - trapezoid(path.samples)).norm();
    out.is_circle = false;
    return out;
}

HomotopyOfPaths deform_paths(const PathFamily& family, const TargetSchedule& schedule,
                             double epsilon, const DeformConfig& config) {
    if (!(epsilon > 0)) throw Error("deform_paths: epsilon must be positive");
    family.validate();
    schedule.validate(family);
    const int T = schedule.T;
    const int n = family.n;

    // shell containing every family value and every target
    ShellConfig shell;
    if (config.shell) {
        shell = *config.shell;
    } else {
        double vmax = 0, vmin = std::numeric_limits<double>::infinity();
        for (const auto& p : family.paths) {
            for (Eigen::Index k = 0; k < p.samples.rows(); ++k) {
                double m = p.samples.row(k).norm();
                vmax = std::max(vmax, m);
                vmin = std::min(vmin, m);
            }
        }
        for (const auto& row : schedule.targets)
            for (const auto& a : row) vmax = std::max(vmax, a.norm());
        shell.r1 = 2 * vmax + 1;
        shell.r0 = std::min(0.5 * vmin, 0.1 * shell.r1);
        shell.delta = 1e-2;
    }

    double bound = 1e-9;
    for (const auto& p : family.paths) {
        bound = std::max(bound, p.samples.row(0).norm());
        bound = std::max(bound, p.samples.row(p.samples.rows() - 1).norm());
    }
    for (const auto& row : schedule.targets)
        for (const auto& a : row) bound = std::max(bound, a.norm());

    const long K = std::max<long>(8, pow2ceil(1.0 / (4 * epsilon)));
    const double eta_req = std::min(config.margin, (epsilon / 4) / (8 * bound));
    const long M0 = std::max<long>(64, pow2ceil(2.0 / (eta_req * static_cast<double>(K))));
    const double snapshot_width = std::min(config.cutoff.width, 1.0 / T);

    HomotopyOfPaths out;
    out.T = T;
    out.epsilon = epsilon;
    out.cells = static_cast<int>(K);
    out.snapshots.resize(family.paths.size());

    for (size_t p = 0; p < family.paths.size(); ++p) {
        const DiscretePath& sigma = family.paths[p];
        const bool frozen = family.is_frozen(static_cast<int>(p));
        out.snapshots[p].resize(T + 1);
        out.snapshots[p][0] = sigma;  // bit-identical at t = 0
        if (frozen) {
            for (int k = 1; k <= T; ++k) out.snapshots[p][k] = sigma;
            continue;
        }
        const CVec start = sigma.samples.row(0).transpose();
        const CVec end = sigma.samples.row(sigma.samples.rows() - 1).transpose();

        for (int k = 1; k <= T; ++k) {
            const double t = static_cast<double>(k) / T;
            const CVec& target = schedule.targets[p][k];
            // tent cutoff, width clipped to the snapshot spacing so the blend
            // is exact at every stored snapshot
            CutoffProfile cutoff{snapshot_width};
            const double chi_eff = cutoff(false, t);

            long M = M0;
            double delta = shell.delta;
            DiscretePath result;
            double osc_err = 0, drift = 0, splice_shift = 0;
            for (int attempt = 0;; ++attempt) {
                const long Nout = K * M;
                const long keta = std::max<long>(1, std::lround(eta_req * Nout));
                const double eta = static_cast<double>(keta) / Nout;

                CMat blended(Nout + 1, n);
                if (chi_eff == 0.0) {
                    blended.rowwise() = target.transpose();
                } else {
                    for (long s = 0; s <= Nout; ++s)
                        blended.row(s) =
                            chi_eff * interp(sigma.samples, static_cast<double>(s) / Nout).transpose() +
                            (1 - chi_eff) * target.transpose();
                }
                CMat spliced = endpoint_splice(blended, start, end, eta, static_cast<int>(Nout));
                CVec alpha_spliced = trapezoid(spliced);
                splice_shift = (alpha_spliced - (chi_eff * path_quadrature(sigma) +
                                                 (1 - chi_eff) * target))
                                   .norm();

                DiscretePath hull;
                hull.samples = std::move(spliced);
                hull.closed = sigma.closed;
                ShellConfig local = shell;
                local.delta = delta;
                try {
                    DiscretePath osc =
                        oscillate(hull, local, static_cast<int>(K), epsilon / 4, config.frame_phases);
                    osc_err = (trapezoid(osc.samples) - alpha_spliced).norm();
                    result = retract_path(osc, &drift);
                    if (drift >= epsilon / 4 && delta > 1e-8) {
                        delta /= 2;  // tighten the shell and redo the pipeline
                        continue;
                    }
                } catch (const BudgetExceeded&) {
                    if (attempt >= 6) throw;
                    M *= 2;
                    continue;
                }
                break;
            }
            result.samples.row(0) = start.transpose();
            result.samples.row(result.samples.rows() - 1) = end.transpose();
            result.quadric_tol = sigma.quadric_tol;

            double err = (path_quadrature(result) - target).norm();
            if (err >= epsilon)
                throw BudgetExceeded("snapshot integral misses its target by " +
                                     std::to_string(err));
            out.max_integral_error = std::max(out.max_integral_error, err);
            out.max_oscillation_error = std::max(out.max_oscillation_error, osc_err);
            out.max_retract_drift = std::max(out.max_retract_drift, drift);
            out.max_splice_shift = std::max(out.max_splice_shift, splice_shift);
            out.max_quadric_residual =
                std::max(out.max_quadric_residual, result.max_quadric_residual());
            out.oversampling = static_cast<int>(result.samples.rows() - 1) / static_cast<int>(K);
            out.snapshots[p][k] = std::move(result);
        }
        // t = 0 contributes its own (exact) integral residual
        double err0 = (path_quadrature(sigma) - schedule.targets[p][0]).norm();
        out.max_integral_error = std::max(out.max_integral_error, err0);
    }
    return out;
}

} // namespace nullcurve
