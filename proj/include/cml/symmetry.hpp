#pragma once

#include <array>
#include <string>

#include "cml/rational.hpp"

namespace cml {

// One of the eight isometries of the unit square, stored as a signed
// permutation (swap, negate-x, negate-y); the translation making it map
// [0,1]^2 to itself is implied. Generated by rd (diagonal reflection) and
// rv (vertical midline reflection).
struct Dih {
    bool swap = false;
    bool negx = false;
    bool negy = false;

    // action on a point of [0,1]^2
    std::pair<Rat, Rat> apply(const Rat& x, const Rat& y) const {
        Rat u = swap ? y : x;
        Rat v = swap ? x : y;
        if (negx) u = Rat(1) - u;
        if (negy) v = Rat(1) - v;
        return {u, v};
    }

    // action on an integer box [x0,x1]x[y0,y1] inside [0,S]^2
    void apply_box(long long S, long long& x0, long long& x1, long long& y0, long long& y1) const {
        long long u0 = swap ? y0 : x0, u1 = swap ? y1 : x1;
        long long v0 = swap ? x0 : y0, v1 = swap ? x1 : y1;
        if (negx) { long long t0 = S - u1, t1 = S - u0; u0 = t0; u1 = t1; }
        if (negy) { long long t0 = S - v1, t1 = S - v0; v0 = t0; v1 = t1; }
        x0 = u0; x1 = u1; y0 = v0; y1 = v1;
    }

    // action on cell (i, j) of an S x S grid
    std::pair<long long, long long> apply_cell(long long S, long long i, long long j) const {
        long long x0 = i, x1 = i + 1, y0 = j, y1 = j + 1;
        apply_box(S, x0, x1, y0, y1);
        return {x0, y0};
    }

    int code() const { return (swap ? 4 : 0) | (negx ? 2 : 0) | (negy ? 1 : 0); }
    bool is_identity() const { return !swap && !negx && !negy; }

    friend bool operator==(const Dih& a, const Dih& b) { return a.code() == b.code(); }

    std::string name() const;
};

Dih dih_identity();
Dih dih_rd(); // reflection in the diagonal x = y
Dih dih_rv(); // reflection in the vertical midline x = 1/2
const std::array<Dih, 8>& dihedral_group();

// g after h: x -> g(h(x))
Dih compose(const Dih& g, const Dih& h);
Dih inverse(const Dih& g);

} // namespace cml
