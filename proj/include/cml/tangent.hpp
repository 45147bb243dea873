#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "cml/carpet_spec.hpp"
#include "cml/catalog.hpp"
#include "cml/rational.hpp"

namespace cml {

// Signed rational square [x0, x0+side] x [y0, y0+side].
struct SquareRat {
    Rat x0, y0, side;
    friend bool operator==(const SquareRat& a, const SquareRat& b) {
        return a.x0 == b.x0 && a.y0 == b.y0 && a.side == b.side;
    }
    friend bool operator<(const SquareRat& a, const SquareRat& b) {
        if (a.y0 != b.y0) return a.y0 < b.y0;
        if (a.x0 != b.x0) return a.x0 < b.x0;
        return a.side < b.side;
    }
};

// Angular width of the square's radial shadow seen from the origin, for a
// square in the closed first quadrant away from the origin. Closed form from
// the two extreme corners; no numerical integration.
double theta_of_square(const SquareRat& sq);

enum class WindowKind { Origin, Corner };

// One circle of a finite weak-tangent window. quadrant 0 is the first
// quadrant (the origin window); 1..3 are the i*F, (-1)*F, (-i)*F copies of
// the corner window.
struct WinCircle {
    SquareRat sq;
    int quadrant = 0;
    int scale_j = 0; // copy n^j F the circle came from (smallest j)
    int gen = 0;     // generation within that copy
    bool in_annulus = false; // inside closure(n Q0 minus Q0), origin kind only
};

// Finite window of a weak tangent: copies n^j F for 0 <= j <= w, each
// resolved to depth d. The point at infinity is never materialized.
struct TangentWindow {
    CarpetSpec spec;
    int w = 0, d = 0;
    WindowKind kind = WindowKind::Origin;
    std::vector<WinCircle> circles;
};

TangentWindow build_window(const CarpetSpec& spec, int w, int d, WindowKind kind,
                           long long budget = kDefaultCellBudget);

// One representative square per scaling orbit: the holes of nF at depth d
// that avoid the open unit square. Exactly kept_per_step^(d-1) * holes_per_step
// squares.
std::vector<SquareRat> annulus_circles(const CarpetSpec& spec, int d);

struct ProjectionEntry {
    SquareRat sq;
    int gamma = 0;    // annulus generation: side = r / n^gamma
    double theta = 0;
    double rho = 0;   // 2 theta / pi
    double ell = 0;
};

struct ProjectionMassReport {
    CarpetSpec spec;
    int depth = 0;
    std::vector<ProjectionEntry> entries;
    double K = 0;      // measured max theta / ell
    double mass = 0;   // sum rho^2 over orbit representatives
    double bound = 0;  // (2K/pi)^2 (n^2 - 1)
    double slack = 0;  // bound - mass
    std::vector<double> mass_by_gamma;
};

ProjectionMassReport projection_mass(const CarpetSpec& spec, int depth, bool parallel = false);

// schema "tg-report/1"
nlohmann::json projection_report_to_json(const ProjectionMassReport& rep);

// Deterministic admissibility witnesses: 32 staircase arcs riding the finest
// visible hole band, plus axis-hugging rectangular paths. Sampled evidence,
// not a proof. The seed only phase-shifts the radius grid; 0 is the
// documented default.
struct SamplePath {
    enum class Kind { Arc, Polyline } kind = Kind::Arc;
    Rat r2;                                   // arc: squared radius
    std::vector<std::pair<Rat, Rat>> points;  // polyline: axis-parallel corners
    std::string label;
};

std::vector<SamplePath> default_sample_paths(const CarpetSpec& spec, int w, int d,
                                             uint64_t seed = 0);

bool sample_meets_square(const SamplePath& path, const SquareRat& sq);

struct AdmissibilityRow {
    std::string label;
    double sum = 0;
    int met = 0;
};

struct AdmissibilityReport {
    std::vector<AdmissibilityRow> rows;
    double min_sum = 0;
    bool violation = false; // some row below 1 - tol
};

// Sums the projection weights 2 theta / pi over the distinct window circles
// each sample meets; rho_scale rescales the distribution (0 gives the zero
// distribution, which must be flagged).
AdmissibilityReport admissibility_sample(const TangentWindow& window,
                                         const std::vector<SamplePath>& paths,
                                         double rho_scale = 1.0, double tol = 1e-9);

// Reflections of a first-quadrant square into the three corner-window
// quadrants. Throws UnmappedCircle unless the square is strictly inside the
// open quadrant.
std::array<SquareRat, 3> quadrant_copies(const SquareRat& sq);

struct TransferEntry {
    SquareRat origin_sq;
    double rho_origin = 0;
    std::array<SquareRat, 3> corner_sqs;
    double rho_corner = 0; // rho_origin / 3
};

struct ThirdTransferReport {
    std::vector<TransferEntry> entries; // one per annulus orbit representative
    Rat mass_ratio{1, 3};               // exact per-orbit transfer ratio
    double mass_origin = 0;
    double mass_corner = 0;             // sums 3 (rho/3)^2 per orbit
    AdmissibilityReport corner_samples; // three-quadrant arcs
};

ThirdTransferReport third_transfer(const CarpetSpec& spec, int depth, int w = 1,
                                   bool parallel = false);

} // namespace cml
