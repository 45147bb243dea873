#pragma once

#include <memory>
#include <vector>

#include "cml/catalog.hpp"
#include "cml/solver.hpp"
#include "cml/touch.hpp"

namespace cml {

// The path family between a pair of peripheral circles, discretized at one
// level. Paths are 4-adjacent cell walks: the first cell touches c1, the last
// touches c2, and everything in between avoids both excluded closed holes
// entirely. Interiors of other holes stay traversable. Constraint rows charge
// the distinct circles met, never c1 or c2 (open paths do not meet the
// excluded closed regions, so their weights are pinned to zero).
struct PathFamilySpec {
    CarpetSpec spec;
    int level = 0;
    int c1 = 0, c2 = 0;
    bool corner_touch = true;
};

struct FamilyInstance {
    PathFamilySpec fam;
    long long side = 0;
    NodeGraph graph; // nodes = cells, groups = circle ids
    std::vector<NodeClass> classes() const { return graph.cls; }
};

FamilyInstance build_family_instance(const CircleCatalog& cat, const TouchIncidence& inc, int c1, int c2);

// Canonical dihedral representative of an unordered pair: the lexicographically
// smallest (min id, max id) over all 8 images. Returns the mapping element g
// with (g c1, g c2) canonical.
struct CanonicalPair {
    int a = 0, b = 0;
    Dih g;
};
CanonicalPair canonicalize_pair(const CircleCatalog& cat, int c1, int c2);

} // namespace cml
