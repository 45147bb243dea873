#include "cml/qp.hpp"

#include <algorithm>
#include <cmath>

namespace cml {

int QpSolver::add_row(QpRow row, double lambda0) {
    row.norm2 = 0;
    for (auto& [v, c] : row.terms) row.norm2 += static_cast<double>(c) * c;
    rows_.push_back(std::move(row));
    lambda_.push_back(lambda0);
    if (lambda0 != 0.0) {
        const QpRow& r = rows_.back();
        for (auto& [v, c] : r.terms) x_[static_cast<size_t>(v)] += 0.5 * lambda0 * c;
    }
    return static_cast<int>(rows_.size()) - 1;
}

double QpSolver::row_value(int r) const {
    double s = 0;
    for (auto& [v, c] : rows_[static_cast<size_t>(r)].terms) s += c * x_[static_cast<size_t>(v)];
    return s;
}

double QpSolver::objective() const {
    double s = 0;
    for (double v : x_) s += v * v;
    return s;
}

void QpSolver::rebuild_x() {
    std::fill(x_.begin(), x_.end(), 0.0);
    for (size_t r = 0; r < rows_.size(); ++r) {
        if (lambda_[r] == 0.0) continue;
        for (auto& [v, c] : rows_[r].terms) x_[static_cast<size_t>(v)] += 0.5 * lambda_[r] * c;
    }
}

QpResult QpSolver::solve(const QpOptions& opt) {
    QpResult res;
    if (rows_.empty()) {
        res.converged = true;
        return res;
    }
    const int m = num_rows();
    // screening: most rows stay inactive (lambda 0, satisfied); sweep the
    // active set and rescan everything on every eighth pass, where the
    // convergence criteria are also evaluated over all rows
    std::vector<int> active;
    active.reserve(static_cast<size_t>(m));
    auto update_row = [&](int r, double& max_step) {
        const QpRow& row = rows_[static_cast<size_t>(r)];
        if (row.norm2 == 0.0) return;
        const double g = 1.0 - row_value(r);
        double t = 2.0 * g / row.norm2;
        if (t < -lambda_[static_cast<size_t>(r)]) t = -lambda_[static_cast<size_t>(r)];
        if (t == 0.0) return;
        max_step = std::max(max_step, std::abs(t));
        lambda_[static_cast<size_t>(r)] += t;
        const double half_t = 0.5 * t;
        for (auto& [v, c] : row.terms) x_[static_cast<size_t>(v)] += half_t * c;
    };
    bool force_full = true;
    for (long long sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        ++res.sweeps;
        double max_step = 0;
        const bool full = ((sweep & 7) == 0) || force_full;
        force_full = false;
        if (full) {
            active.clear();
            for (int r = 0; r < m; ++r) {
                update_row(r, max_step);
                if (lambda_[static_cast<size_t>(r)] != 0.0) active.push_back(r);
            }
        } else {
            for (int r : active) update_row(r, max_step);
            // active set went stationary: verify against all rows next sweep
            if (max_step == 0.0) force_full = true;
            continue;
        }
        if ((sweep & 0xFF) == 0xFF) rebuild_x();
        double maxviol = 0, lam_sum = 0;
        for (int r = 0; r < m; ++r) {
            maxviol = std::max(maxviol, 1.0 - row_value(r));
            lam_sum += lambda_[static_cast<size_t>(r)];
        }
        const double obj = objective();
        const double gap = 2.0 * obj - lam_sum;
        const bool ok = maxviol <= opt.tol_feas && gap <= opt.tol_gap * std::max(1.0, obj);
        if (ok || max_step == 0.0) {
            rebuild_x();
            res.converged = true;
            res.max_violation = std::max(0.0, maxviol);
            res.gap = gap;
            return res;
        }
    }
    rebuild_x();
    double maxviol = 0, lam_sum = 0;
    for (int r = 0; r < m; ++r) {
        maxviol = std::max(maxviol, 1.0 - row_value(r));
        lam_sum += lambda_[static_cast<size_t>(r)];
    }
    res.max_violation = std::max(0.0, maxviol);
    res.gap = 2.0 * objective() - lam_sum;
    res.converged = false;
    return res;
}

} // namespace cml
