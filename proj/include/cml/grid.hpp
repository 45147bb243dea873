#pragma once

#include <cstdint>
#include <vector>

#include "cml/carpet_spec.hpp"
#include "cml/rational.hpp"

namespace cml {

// Default size rail: N^2 cells per generated grid.
inline constexpr long long kDefaultCellBudget = 1LL << 24;

// Whether the base-b digit pair (a, b_) lands inside a removed hole of one
// subdivision step.
bool digit_in_hole(const CarpetSpec& spec, int a, int b);

// Occupancy of cell (i, j) at the given level, straight from the digits:
// a cell survives iff no prefix digit pair falls in a hole.
bool cell_occupied(const CarpetSpec& spec, int level, long long i, long long j);

// Whether a hole of generation g is anchored at integer coords (x0, y0) on
// the n^g grid (digit pair is a hole anchor and the parent cell survived).
bool hole_anchor_at(const CarpetSpec& spec, int g, long long x0, long long y0);

// Exact level-k occupancy of the carpet approximation. Immutable after
// construction; safe to share across threads.
struct CellGrid {
    CarpetSpec spec;
    int level = 0;
    long long side = 1; // N = n^k
    std::vector<uint8_t> occ; // row-major, index j*side + i

    bool occupied(long long i, long long j) const { return occ[static_cast<size_t>(j) * side + i] != 0; }
    long long count() const;
};

CellGrid generate(const CarpetSpec& spec, int level, long long cell_budget = kDefaultCellBudget);

} // namespace cml
