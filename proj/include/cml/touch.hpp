#pragma once

#include <cstdint>
#include <vector>

#include "cml/catalog.hpp"

namespace cml {

// Per traversable cell, the sorted ids of circles whose closed square meets
// the closed cell. With corner_touch off, single-point contact does not
// count. Exact integer tests at the level-k scale N = n^k.
struct TouchIncidence {
    int level = 0;
    long long side = 0;
    bool corner_touch = true;
    std::vector<std::vector<int32_t>> cell_circles; // index j*side + i

    const std::vector<int32_t>& at(long long i, long long j) const {
        return cell_circles[static_cast<size_t>(j) * side + i];
    }
};

// Circle box scaled to level-k integer coordinates (catalog gen <= k).
struct LevelBox {
    long long x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};
LevelBox circle_box_at_level(const CircleCatalog& cat, int id, int level);

// closed cell vs closed box contact; `point_only` reports degenerate contact
bool cell_touches_box(long long i, long long j, const LevelBox& box, bool& point_only);

// cell contained in the closed box
bool cell_inside_box(long long i, long long j, const LevelBox& box);

TouchIncidence build_touch_incidence(const CircleCatalog& cat, int level, bool corner_touch,
                                     bool parallel = false);

} // namespace cml
