#include "cml/touch.hpp"

#include <algorithm>

#include "cml/errors.hpp"
#include "cml/parallel.hpp"

namespace cml {

LevelBox circle_box_at_level(const CircleCatalog& cat, int id, int level) {
    const PeripheralCircle& c = cat.at(id);
    if (c.generation > level) throw LevelMismatch("circle generation exceeds level");
    const long long s = ipow(cat.spec.base(), level - c.generation);
    return LevelBox{c.box.x0 * s, (c.box.x0 + c.box.ext) * s, c.box.y0 * s, (c.box.y0 + c.box.ext) * s};
}

bool cell_touches_box(long long i, long long j, const LevelBox& box, bool& point_only) {
    const long long xlo = std::max(i, box.x0), xhi = std::min(i + 1, box.x1);
    const long long ylo = std::max(j, box.y0), yhi = std::min(j + 1, box.y1);
    point_only = false;
    if (xlo > xhi || ylo > yhi) return false;
    point_only = (xlo == xhi) && (ylo == yhi);
    return true;
}

bool cell_inside_box(long long i, long long j, const LevelBox& box) {
    return box.x0 <= i && i + 1 <= box.x1 && box.y0 <= j && j + 1 <= box.y1;
}

TouchIncidence build_touch_incidence(const CircleCatalog& cat, int level, bool corner_touch, bool parallel) {
    const CarpetSpec& spec = cat.spec;
    const long long n = spec.base();
    const long long N = ipow(n, level);
    TouchIncidence inc;
    inc.level = level;
    inc.side = N;
    inc.corner_touch = corner_touch;
    inc.cell_circles.assign(static_cast<size_t>(N) * N, {});

    const int ext = spec.hole_ext();
    parallel_for(N * N, parallel, [&](long long idx) {
        const long long i = idx % N, j = idx / N;
        auto& lst = inc.cell_circles[static_cast<size_t>(idx)];
        if (i == 0 || j == 0 || i == N - 1 || j == N - 1) lst.push_back(0); // outer circle
        for (int g = 1; g <= level; ++g) {
            const long long S = ipow(n, level - g); // cell units per gen-g unit
            // candidate anchors x0 with [x0*S, (x0+ext)*S] meeting [i, i+1]
            const long long xlo = i - ext * S, ylo = j - ext * S;
            const long long xa = xlo <= 0 ? 0 : (xlo + S - 1) / S;
            const long long xb = (i + 1) / S;
            const long long ya = ylo <= 0 ? 0 : (ylo + S - 1) / S;
            const long long yb = (j + 1) / S;
            for (long long y0 = ya; y0 <= yb; ++y0) {
                for (long long x0 = xa; x0 <= xb; ++x0) {
                    if (!hole_anchor_at(spec, g, x0, y0)) continue;
                    LevelBox box{x0 * S, (x0 + ext) * S, y0 * S, (y0 + ext) * S};
                    bool point_only = false;
                    if (!cell_touches_box(i, j, box, point_only)) continue;
                    if (point_only && !corner_touch) continue;
                    const int id = cat.find(g, x0, y0);
                    if (id >= 0) lst.push_back(id);
                }
            }
        }
        std::sort(lst.begin(), lst.end());
    });
    return inc;
}

} // namespace cml
