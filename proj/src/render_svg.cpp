#include "cml/render_svg.hpp"

#include <algorithm>
#include <cstdio>

namespace cml {

namespace {

std::string heat_color(double t) {
    // light yellow to dark red
    t = std::clamp(t, 0.0, 1.0);
    const int r = 255 - static_cast<int>(75 * t);
    const int g = 235 - static_cast<int>(195 * t);
    const int b = 200 - static_cast<int>(180 * t);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace

std::string render_svg(const CellGrid& grid, const CircleCatalog& catalog,
                       const std::vector<double>* rho) {
    const long long N = grid.side;
    const long long n = grid.spec.base();
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + std::to_string(N + (rho ? N / 3 + 2 : 0)) +
           " " + std::to_string(N) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(N) + "\" height=\"" + std::to_string(N) +
           "\" fill=\"#ffffff\"/>\n";

    // occupied cells as horizontal runs (y flipped: SVG grows downward)
    out += "<g fill=\"#404040\">\n";
    for (long long j = 0; j < N; ++j) {
        long long i = 0;
        while (i < N) {
            if (!grid.occupied(i, j)) {
                ++i;
                continue;
            }
            long long run = i;
            while (run < N && grid.occupied(run, j)) ++run;
            out += "<rect x=\"" + std::to_string(i) + "\" y=\"" + std::to_string(N - 1 - j) + "\" width=\"" +
                   std::to_string(run - i) + "\" height=\"1\"/>\n";
            i = run;
        }
    }
    out += "</g>\n";

    double max_rho = 0;
    if (rho)
        for (double v : *rho) max_rho = std::max(max_rho, v);

    out += "<g stroke=\"#c03020\" stroke-width=\"0.08\">\n";
    for (const PeripheralCircle& c : catalog.circles) {
        if (c.role != CircleRole::Hole) continue;
        const long long s = ipow(n, grid.level - c.generation);
        const long long x = c.box.x0 * s;
        const long long w = c.box.ext * s;
        const long long ytop = N - (c.box.y0 + c.box.ext) * s;
        std::string fill = "none";
        if (rho && max_rho > 0) fill = heat_color((*rho)[static_cast<size_t>(c.id)] / max_rho);
        out += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(ytop) + "\" width=\"" +
               std::to_string(w) + "\" height=\"" + std::to_string(w) + "\" fill=\"" + fill + "\"/>\n";
    }
    out += "</g>\n";

    if (rho && max_rho > 0) {
        // legend: vertical gradient bar with min/max labels
        const long long lx = N + 1, lw = std::max<long long>(1, N / 12);
        out += "<g>\n";
        const int steps = 16;
        for (int t = 0; t < steps; ++t) {
            const long long y0 = N - (t + 1) * N / steps;
            const long long y1 = N - t * N / steps;
            out += "<rect x=\"" + std::to_string(lx) + "\" y=\"" + std::to_string(y0) + "\" width=\"" +
                   std::to_string(lw) + "\" height=\"" + std::to_string(y1 - y0) + "\" fill=\"" +
                   heat_color((t + 0.5) / steps) + "\"/>\n";
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", max_rho);
        out += "<text x=\"" + std::to_string(lx + lw + 1) + "\" y=\"2\" font-size=\"" +
               std::to_string(std::max<long long>(1, N / 16)) + "\">" + buf + "</text>\n";
        out += "<text x=\"" + std::to_string(lx + lw + 1) + "\" y=\"" + std::to_string(N) + "\" font-size=\"" +
               std::to_string(std::max<long long>(1, N / 16)) + "\">0</text>\n";
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace cml
