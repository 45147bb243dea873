#pragma once

#include <cstdint>
#include <vector>

namespace cml {

// minimize sum_v x_v^2  subject to  A x >= 1, x >= 0, with A >= 0 integer.
// Since rows are nonnegative, x = A^T lambda / 2 with lambda >= 0 stays
// feasible for x >= 0, so projected coordinate ascent on the dual suffices.
struct QpRow {
    std::vector<std::pair<int, int>> terms; // (var, coeff), sorted by var
    double norm2 = 0;                       // sum coeff^2
};

struct QpOptions {
    double tol_feas = 1e-11; // max allowed 1 - a.x at exit
    double tol_gap = 1e-10;  // duality/complementarity gap at exit
    long long max_sweeps = 200000;
};

struct QpResult {
    bool converged = false;
    long long sweeps = 0;
    double max_violation = 0; // max(0, 1 - a.x) over rows
    double gap = 0;           // 2|x|^2 - sum lambda
};

class QpSolver {
  public:
    explicit QpSolver(int num_vars) : x_(static_cast<size_t>(num_vars), 0.0) {}

    int num_vars() const { return static_cast<int>(x_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& lambda() const { return lambda_; }

    // returns the new row index; lambda starts at lambda0
    int add_row(QpRow row, double lambda0 = 0.0);

    QpResult solve(const QpOptions& opt);

    double objective() const;
    double row_value(int r) const;

  private:
    void rebuild_x();

    std::vector<QpRow> rows_;
    std::vector<double> lambda_;
    std::vector<double> x_;
};

} // namespace cml
