#include "cml/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cml/errors.hpp"
#include "cml/parallel.hpp"

namespace cml {

double theta_of_square(const SquareRat& sq) {
    if (sq.x0.num < 0 || sq.y0.num < 0 || !(Rat(0) < sq.side))
        throw UnmappedCircle("theta needs a square in the closed first quadrant");
    if (sq.x0.num == 0 && sq.y0.num == 0)
        throw UnmappedCircle("theta undefined for a square at the origin");
    const double xmax = (sq.x0 + sq.side).to_double();
    const double ymax = (sq.y0 + sq.side).to_double();
    // widest corner direction minus narrowest: upper-left vs lower-right
    return std::atan2(ymax, sq.x0.to_double()) - std::atan2(sq.y0.to_double(), xmax);
}

std::vector<SquareRat> annulus_circles(const CarpetSpec& spec, int d) {
    validate_spec(spec);
    if (d < 1) return {};
    CircleCatalog cat = CircleCatalog::build(spec, d);
    const long long n = spec.base();
    std::vector<SquareRat> out;
    for (const PeripheralCircle& c : cat.circles) {
        if (c.role != CircleRole::Hole) continue;
        const long long inner = ipow(n, c.generation - 1);
        if (c.box.x0 < inner && c.box.y0 < inner) continue; // scaled copy overlaps the unit square
        // scale by n: denominator drops one power
        out.push_back(SquareRat{Rat(c.box.x0, inner), Rat(c.box.y0, inner), Rat(c.box.ext, inner)});
    }
    return out;
}

TangentWindow build_window(const CarpetSpec& spec, int w, int d, WindowKind kind, long long budget) {
    validate_spec(spec);
    if (w < 0 || d < 0) throw ConstraintViolation("window exponent and depth must be >= 0");
    const long long n = spec.base();
    if (CircleCatalog::expected_count(spec, d) * (w + 1) > budget)
        throw BudgetExceeded("window circle count exceeds budget",
                             CircleCatalog::expected_count(spec, d) * (w + 1));

    CircleCatalog cat = CircleCatalog::build(spec, d);
    TangentWindow win;
    win.spec = spec;
    win.w = w;
    win.d = d;
    win.kind = kind;

    std::set<SquareRat> seen;
    for (int j = 0; j <= w; ++j) {
        const long long scale = ipow(n, j);
        for (const PeripheralCircle& c : cat.circles) {
            if (c.role != CircleRole::Hole) continue;
            SquareRat sq{Rat(c.box.x0 * scale, c.den), Rat(c.box.y0 * scale, c.den),
                         Rat(c.box.ext * scale, c.den)};
            if (!seen.insert(sq).second) continue;
            WinCircle wc;
            wc.sq = sq;
            wc.quadrant = 0;
            wc.scale_j = j;
            wc.gen = c.generation;
            // inside closure(n Q0 minus Q0): within [0,n]^2, interior disjoint
            // from the open unit square
            wc.in_annulus = (sq.x0 + sq.side <= Rat(n)) && (sq.y0 + sq.side <= Rat(n)) &&
                            !(sq.x0 < Rat(1) && sq.y0 < Rat(1));
            win.circles.push_back(wc);
        }
    }
    if (kind == WindowKind::Corner) {
        std::vector<WinCircle> corner;
        corner.reserve(win.circles.size() * 3);
        for (const WinCircle& wc : win.circles) {
            auto copies = quadrant_copies(wc.sq);
            for (int q = 0; q < 3; ++q) {
                WinCircle cc = wc;
                cc.sq = copies[static_cast<size_t>(q)];
                cc.quadrant = q + 1;
                cc.in_annulus = false;
                corner.push_back(cc);
            }
        }
        win.circles = std::move(corner);
    }
    return win;
}

ProjectionMassReport projection_mass(const CarpetSpec& spec, int depth, bool parallel) {
    ProjectionMassReport rep;
    rep.spec = spec;
    rep.depth = depth;
    std::vector<SquareRat> reps = annulus_circles(spec, depth);
    rep.entries.resize(reps.size());
    parallel_for(static_cast<long long>(reps.size()), parallel, [&](long long i) {
        ProjectionEntry& e = rep.entries[static_cast<size_t>(i)];
        e.sq = reps[static_cast<size_t>(i)];
        e.theta = theta_of_square(e.sq);
        e.rho = 2.0 * e.theta / M_PI;
        e.ell = e.sq.side.to_double();
        // gamma from side = r / n^gamma
        Rat side = e.sq.side;
        int gamma = 0;
        const Rat r(spec.hole_ext());
        while (side < r) {
            side = side * Rat(spec.base());
            ++gamma;
        }
        e.gamma = gamma;
    });
    rep.mass_by_gamma.assign(static_cast<size_t>(depth), 0.0);
    for (const ProjectionEntry& e : rep.entries) {
        rep.mass += e.rho * e.rho;
        rep.K = std::max(rep.K, e.theta / e.ell);
        if (e.gamma < depth) rep.mass_by_gamma[static_cast<size_t>(e.gamma)] += e.rho * e.rho;
    }
    const double n2 = static_cast<double>(spec.base()) * spec.base();
    rep.bound = (2.0 * rep.K / M_PI) * (2.0 * rep.K / M_PI) * (n2 - 1.0);
    rep.slack = rep.bound - rep.mass;
    return rep;
}

nlohmann::json projection_report_to_json(const ProjectionMassReport& rep) {
    nlohmann::json j;
    j["schema"] = "tg-report/1";
    j["spec"] = rep.spec.slug();
    j["depth"] = rep.depth;
    j["K"] = rep.K;
    j["mass"] = rep.mass;
    j["bound"] = rep.bound;
    j["slack"] = rep.slack;
    j["mass_by_gamma"] = rep.mass_by_gamma;
    nlohmann::json entries = nlohmann::json::array();
    for (const ProjectionEntry& e : rep.entries) {
        entries.push_back({{"anchor", {e.sq.x0.num, e.sq.x0.den, e.sq.y0.num, e.sq.y0.den}},
                           {"side", {e.sq.side.num, e.sq.side.den}},
                           {"gamma", e.gamma},
                           {"theta", e.theta},
                           {"rho", e.rho}});
    }
    j["entries"] = std::move(entries);
    return j;
}

std::vector<SamplePath> default_sample_paths(const CarpetSpec& spec, int w, int d, uint64_t seed) {
    // Staircase arcs: both legs ride the finest bottom hole band of the n F
    // copy, where consecutive shadows overlap enough to close the quarter
    // angle. Thin true arcs thread between the finitely many visible shadows
    // and are exceptional at fixed depth, so they make poor witnesses.
    if (d < 2) throw ConstraintViolation("sample paths need window depth >= 2");
    const long long n = spec.base();
    std::vector<SamplePath> out;
    // band center height of the depth-d bottom hole row of the unit copy;
    // the run of shadows along that row alone sums past the quarter angle
    const Rat delta(2 * spec.offset() + spec.hole_ext(), 2 * ipow(n, d));
    const long long phase = static_cast<long long>(seed % 8);
    for (int i = 0; i < 32; ++i) {
        const Rat r = Rat(1) + (Rat(2 * i + 1, 64) + Rat(phase, 512)) * Rat(n - 1); // in (1, n)
        SamplePath p;
        p.kind = SamplePath::Kind::Polyline;
        p.points = {{r, Rat(0)}, {r, delta}, {delta, delta}, {delta, r}, {Rat(0), r}};
        p.label = "staircase-arc-" + std::to_string(i);
        out.push_back(std::move(p));
    }
    // axis hugs at large radius, one per window scale up to w
    const long long W = ipow(n, std::max(1, w));
    for (int t = 1; t <= 2; ++t) {
        const Rat R = Rat(W * (2 * n - 1), 2 * n * t);
        SamplePath p;
        p.kind = SamplePath::Kind::Polyline;
        p.points = {{R, Rat(0)}, {R, delta}, {delta, delta}, {delta, R}, {Rat(0), R}};
        p.label = "axis-hug-" + std::to_string(t);
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

bool segment_meets_square(const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b,
                          const SquareRat& sq) {
    const Rat x1 = sq.x0 + sq.side, y1 = sq.y0 + sq.side;
    if (a.first == b.first) { // vertical
        if (a.first < sq.x0 || x1 < a.first) return false;
        const Rat lo = rat_min(a.second, b.second), hi = rat_max(a.second, b.second);
        return !(hi < sq.y0 || y1 < lo);
    }
    if (a.second == b.second) { // horizontal
        if (a.second < sq.y0 || y1 < a.second) return false;
        const Rat lo = rat_min(a.first, b.first), hi = rat_max(a.first, b.first);
        return !(hi < sq.x0 || x1 < lo);
    }
    throw ConstraintViolation("sample polylines must be axis-parallel");
}

Rat dist2_min(const SquareRat& sq) {
    // squares in the open quadrant: nearest point is the anchor corner
    return sq.x0 * sq.x0 + sq.y0 * sq.y0;
}

Rat dist2_max(const SquareRat& sq) {
    const Rat x1 = sq.x0 + sq.side, y1 = sq.y0 + sq.side;
    return x1 * x1 + y1 * y1;
}

SquareRat reflect_to_q1(const SquareRat& sq) {
    SquareRat out = sq;
    if (out.x0.num < 0) out.x0 = -(out.x0 + out.side);
    if (out.y0.num < 0) out.y0 = -(out.y0 + out.side);
    return out;
}

} // namespace

bool sample_meets_square(const SamplePath& path, const SquareRat& sq) {
    const SquareRat q1 = reflect_to_q1(sq);
    if (path.kind == SamplePath::Kind::Arc)
        return dist2_min(q1) <= path.r2 && path.r2 <= dist2_max(q1);
    for (size_t t = 0; t + 1 < path.points.size(); ++t)
        if (segment_meets_square(path.points[t], path.points[t + 1], q1)) return true;
    return false;
}

AdmissibilityReport admissibility_sample(const TangentWindow& window,
                                         const std::vector<SamplePath>& paths, double rho_scale,
                                         double tol) {
    AdmissibilityReport rep;
    rep.min_sum = std::numeric_limits<double>::infinity();
    for (const SamplePath& p : paths) {
        AdmissibilityRow row;
        row.label = p.label;
        for (const WinCircle& wc : window.circles) {
            if (!sample_meets_square(p, wc.sq)) continue;
            ++row.met;
            const double scale = (window.kind == WindowKind::Corner) ? (1.0 / 3.0) : 1.0;
            row.sum += rho_scale * scale * 2.0 * theta_of_square(reflect_to_q1(wc.sq)) / M_PI;
        }
        rep.min_sum = std::min(rep.min_sum, row.sum);
        rep.rows.push_back(std::move(row));
    }
    rep.violation = rep.min_sum < 1.0 - tol;
    return rep;
}

std::array<SquareRat, 3> quadrant_copies(const SquareRat& sq) {
    if (!(Rat(0) < sq.x0) || !(Rat(0) < sq.y0))
        throw UnmappedCircle("square must lie strictly inside the open first quadrant");
    const Rat x1 = sq.x0 + sq.side, y1 = sq.y0 + sq.side;
    // i*F, (-1)*F, (-i)*F images of the first-quadrant square
    SquareRat q2{-y1, sq.x0, sq.side};
    SquareRat q3{-x1, -y1, sq.side};
    SquareRat q4{sq.y0, -x1, sq.side};
    return {q2, q3, q4};
}

ThirdTransferReport third_transfer(const CarpetSpec& spec, int depth, int w, bool parallel) {
    ThirdTransferReport rep;
    ProjectionMassReport proj = projection_mass(spec, depth, parallel);
    rep.entries.reserve(proj.entries.size());
    for (const ProjectionEntry& e : proj.entries) {
        TransferEntry te;
        te.origin_sq = e.sq;
        te.rho_origin = e.rho;
        te.corner_sqs = quadrant_copies(e.sq);
        te.rho_corner = e.rho / 3.0;
        rep.entries.push_back(std::move(te));
        rep.mass_origin += e.rho * e.rho;
        // three corner copies at a third of the weight each
        rep.mass_corner += 3.0 * (e.rho / 3.0) * (e.rho / 3.0);
    }
    TangentWindow corner = build_window(spec, w, depth, WindowKind::Corner);
    // three-quadrant versions of the quarter-plane staircases: each reflected
    // copy contributes one subpath per quadrant, at a third of the weight
    rep.corner_samples = admissibility_sample(corner, default_sample_paths(spec, w, depth));
    return rep;
}

} // namespace cml
