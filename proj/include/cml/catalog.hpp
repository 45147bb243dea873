#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cml/carpet_spec.hpp"
#include "cml/grid.hpp"
#include "cml/rational.hpp"
#include "cml/symmetry.hpp"

namespace cml {

enum class CircleRole { Outer, Hole };

// Integer square [x0, x0+ext] x [y0, y0+ext] at scale n^gen.
struct CircleBox {
    int gen = 0;
    long long x0 = 0, y0 = 0, ext = 1;

    friend bool operator==(const CircleBox& a, const CircleBox& b) {
        return a.gen == b.gen && a.x0 == b.x0 && a.y0 == b.y0 && a.ext == b.ext;
    }
};

// One boundary square, or the outer boundary O (id 0).
struct PeripheralCircle {
    int id = 0;
    CircleRole role = CircleRole::Outer;
    int generation = 0;
    CircleBox box;       // outer: gen 0, (0,0), ext 1
    long long den = 1;   // n^generation, the box scale

    Rat anchor_x() const { return Rat(box.x0, den); }
    Rat anchor_y() const { return Rat(box.y0, den); }
    Rat side() const { return Rat(box.ext, den); }
};

enum class PairClass { Adjacent, Nonadjacent };

// Outer circle plus every hole of generation <= level. Ids are assigned
// generation-major, then row-major by anchor (y, then x); stable across runs
// and reused as cache-key components.
class CircleCatalog {
  public:
    CarpetSpec spec;
    int level = 0;
    std::vector<PeripheralCircle> circles; // index == id

    static CircleCatalog build(const CarpetSpec& spec, int level, long long budget = kDefaultCellBudget);

    // assemble a catalog from externally produced hole boxes (already in
    // generation-major, row-major order); used for extracted subcarpet copies
    static CircleCatalog from_holes(const CarpetSpec& spec, int level, const std::vector<CircleBox>& holes);

    int size() const { return static_cast<int>(circles.size()); }
    const PeripheralCircle& at(int id) const { return circles.at(static_cast<size_t>(id)); }
    bool is_outer(int id) const { return at(id).role == CircleRole::Outer; }

    // id of the hole with this exact box, or -1
    int find(int gen, long long x0, long long y0) const;

    // Paper-order names: O, and M1..M4 counterclockwise from the lower-left
    // generation-1 hole (M1 = LL, M2 = LR, M3 = UR, M4 = UL); Sm has a single
    // M. Raw ids are accepted as "#<id>".
    int resolve_name(const std::string& name) const;
    std::string display_name(int id) const;

    // dihedral action as a permutation of ids
    int apply_symmetry(const Dih& g, int id) const;
    std::vector<int> orbit(const std::vector<Dih>& generators, int id) const;

    static long long expected_count(const CarpetSpec& spec, int level);

  private:
    std::vector<int> gen_offset_; // first id of each generation block
};

PairClass classify_pair(const CircleCatalog& catalog, int c1, int c2);

CellGrid apply_symmetry(const Dih& g, const CellGrid& grid);

// Scaled copy of the carpet: point -> anchor + point / n^scale_pow, anchored
// at an occupied cell of level scale_pow.
struct AffineCopy {
    CarpetSpec spec;
    int scale_pow = 0;     // copy side = n^{-scale_pow}
    long long ax = 0, ay = 0; // anchor cell coords at level scale_pow

    // gen-g' circle box of the copy -> full-carpet circle box (gen g' + scale_pow)
    CircleBox to_full(const CircleBox& local) const {
        CircleBox full;
        full.gen = local.gen + scale_pow;
        full.x0 = ax * ipow(spec.base(), local.gen) + local.x0;
        full.y0 = ay * ipow(spec.base(), local.gen) + local.y0;
        full.ext = local.ext;
        return full;
    }

    // outer circle C0 of the copy (the anchor cell's boundary)
    CircleBox outer_box() const { return CircleBox{scale_pow, ax, ay, 1}; }
};

// For a hole C of generation m >= 1: the copy of scale n^{-(m-1)} whose
// generation-1 inner circles include C. Throws NotAHole for the outer circle.
AffineCopy subcarpet_map(const CircleCatalog& catalog, int circle_id);

} // namespace cml
