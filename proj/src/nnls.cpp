#include "nullcurve/nnls.hpp"

#include <limits>
#include <vector>

namespace nullcurve {

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter) {
    const Eigen::Index m = A.rows(), n = A.cols();
    if (max_iter <= 0) max_iter = static_cast<int>(3 * n) + 50;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(n, false);
    const double wtol = 1e-12 * std::max(1.0, b.lpNorm<Eigen::Infinity>()) *
                        std::max(1.0, A.lpNorm<Eigen::Infinity>());

    auto solve_passive = [&](Eigen::VectorXd& s) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[j]) idx.push_back(j);
        s.setZero();
        if (idx.empty()) return;
        Eigen::MatrixXd Ap(m, static_cast<Eigen::Index>(idx.size()));
        for (size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
        Eigen::VectorXd sp = Ap.colPivHouseholderQr().solve(b);
        for (size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Eigen::Index>(k));
    };

    for (int outer = 0; outer < max_iter; ++outer) {
        Eigen::VectorXd w = A.transpose() * (b - A * x);
        Eigen::Index best = -1;
        double best_w = wtol;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!passive[j] && w(j) > best_w) { best_w = w(j); best = j; }
        if (best < 0) break;
        passive[best] = true;

        Eigen::VectorXd s(n);
        for (int inner = 0; inner < max_iter; ++inner) {
            solve_passive(s);
            double smin = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j]) smin = std::min(smin, s(j));
            if (smin > 1e-14) break;
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && s(j) <= 1e-14)
                    alpha = std::min(alpha, x(j) / (x(j) - s(j)));
            x += alpha * (s - x);
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[j] && x(j) <= 1e-13) { passive[j] = false; x(j) = 0; }
        }
        x = s;
        for (Eigen::Index j = 0; j < n; ++j)
            if (x(j) < 0) x(j) = 0;
    }
    return x;
}

} // namespace nullcurve
