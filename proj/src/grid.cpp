#include "cml/grid.hpp"

#include <numeric>

#include "cml/errors.hpp"

namespace cml {

bool digit_in_hole(const CarpetSpec& spec, int a, int b) {
    const int p = spec.offset();
    const int r = spec.hole_ext();
    if (spec.corner_pattern()) {
        const int q = spec.base() - p - r;
        auto in_band = [&](int t) { return (t >= p && t < p + r) || (t >= q && t < q + r); };
        return in_band(a) && in_band(b);
    }
    return a == p && b == p;
}

bool cell_occupied(const CarpetSpec& spec, int level, long long i, long long j) {
    const long long n = spec.base();
    long long scale = 1;
    for (int t = 1; t < level; ++t) scale *= n;
    // digits from most significant down
    for (int t = 0; t < level; ++t) {
        const int a = static_cast<int>((i / scale) % n);
        const int b = static_cast<int>((j / scale) % n);
        if (digit_in_hole(spec, a, b)) return false;
        scale /= n;
    }
    return true;
}

bool hole_anchor_at(const CarpetSpec& spec, int g, long long x0, long long y0) {
    if (g < 1) return false;
    const long long n = spec.base();
    if (x0 < 0 || y0 < 0 || x0 >= ipow(n, g) || y0 >= ipow(n, g)) return false;
    // anchor digit must be the hole's own anchor, not an interior column of a wide hole
    const int p = spec.offset();
    const int q = spec.corner_pattern() ? spec.base() - p - spec.hole_ext() : p;
    const int a = static_cast<int>(x0 % n);
    const int b = static_cast<int>(y0 % n);
    if (!((a == p || a == q) && (b == p || b == q))) return false;
    return cell_occupied(spec, g - 1, x0 / n, y0 / n);
}

long long CellGrid::count() const {
    long long c = 0;
    for (uint8_t v : occ) c += v;
    return c;
}

CellGrid generate(const CarpetSpec& spec, int level, long long cell_budget) {
    validate_spec(spec);
    if (level < 0) throw ConstraintViolation("level must be >= 0");
    const long long n = spec.base();
    long long side = 1;
    for (int t = 0; t < level; ++t) {
        side *= n;
        if (side * side > cell_budget)
            throw BudgetExceeded("grid of " + std::to_string(side) + "^2 cells exceeds budget", side * side);
    }
    CellGrid grid;
    grid.spec = spec;
    grid.level = level;
    grid.side = side;
    grid.occ.assign(static_cast<size_t>(side) * side, 0);
    // fill row by row, reusing the parent row's digit test via direct evaluation
    for (long long j = 0; j < side; ++j)
        for (long long i = 0; i < side; ++i)
            grid.occ[static_cast<size_t>(j) * side + i] = cell_occupied(spec, level, i, j) ? 1 : 0;
    return grid;
}

} // namespace cml
