#include "cml/symmetry.hpp"

namespace cml {

Dih dih_identity() { return Dih{false, false, false}; }
Dih dih_rd() { return Dih{true, false, false}; }
Dih dih_rv() { return Dih{false, true, false}; }

const std::array<Dih, 8>& dihedral_group() {
    static const std::array<Dih, 8> all = [] {
        std::array<Dih, 8> a{};
        int t = 0;
        for (int s = 0; s <= 1; ++s)
            for (int nx = 0; nx <= 1; ++nx)
                for (int ny = 0; ny <= 1; ++ny) a[t++] = Dih{s != 0, nx != 0, ny != 0};
        return a;
    }();
    return all;
}

Dih compose(const Dih& g, const Dih& h) {
    // determine the composite from its action on two probe points
    const Rat a(1, 3), b(1, 7);
    auto p1 = h.apply(a, b);
    auto q1 = g.apply(p1.first, p1.second);
    for (const Dih& c : dihedral_group()) {
        auto r = c.apply(a, b);
        if (r.first == q1.first && r.second == q1.second) return c;
    }
    throw std::logic_error("dihedral composition not closed");
}

Dih inverse(const Dih& g) {
    for (const Dih& c : dihedral_group())
        if (compose(g, c).is_identity()) return c;
    throw std::logic_error("dihedral inverse missing");
}

std::string Dih::name() const {
    switch (code()) {
        case 0: return "id";
        case 1: return "fy";   // horizontal midline
        case 2: return "fx";   // vertical midline
        case 3: return "r180";
        case 4: return "fd";   // main diagonal
        case 5: return "r270";
        case 6: return "r90";
        default: return "fa";  // anti-diagonal
    }
}

} // namespace cml
