#include "cml/catalog.hpp"

#include <algorithm>

#include "cml/errors.hpp"

namespace cml {

CircleCatalog CircleCatalog::build(const CarpetSpec& spec, int level, long long budget) {
    validate_spec(spec);
    if (level < 0) throw ConstraintViolation("level must be >= 0");
    const long long n = spec.base();
    const long long expected = expected_count(spec, level);
    if (expected > budget) throw BudgetExceeded("catalog of " + std::to_string(expected) + " circles exceeds budget", expected);

    CircleCatalog cat;
    cat.spec = spec;
    cat.level = level;
    cat.circles.reserve(static_cast<size_t>(expected));

    PeripheralCircle outer;
    outer.id = 0;
    outer.role = CircleRole::Outer;
    outer.generation = 0;
    outer.box = CircleBox{0, 0, 0, 1};
    outer.den = 1;
    cat.circles.push_back(outer);
    cat.gen_offset_.assign(static_cast<size_t>(level) + 2, 0);
    cat.gen_offset_[0] = 0;
    cat.gen_offset_[1] = 1;

    const int p = spec.offset();
    const int q = spec.corner_pattern() ? spec.base() - p - spec.hole_ext() : p;
    std::vector<int> bvals = {p};
    if (q != p) bvals.push_back(q);

    for (int g = 1; g <= level; ++g) {
        const long long S = ipow(n, g - 1); // parent grid side
        for (long long j = 0; j < S; ++j) {
            for (int b : bvals) {
                for (long long i = 0; i < S; ++i) {
                    if (!cell_occupied(spec, g - 1, i, j)) continue;
                    for (int a : bvals) {
                        PeripheralCircle c;
                        c.id = static_cast<int>(cat.circles.size());
                        c.role = CircleRole::Hole;
                        c.generation = g;
                        c.box = CircleBox{g, i * n + a, j * n + b, spec.hole_ext()};
                        c.den = ipow(n, g);
                        cat.circles.push_back(c);
                    }
                }
            }
        }
        cat.gen_offset_[static_cast<size_t>(g) + 1] = static_cast<int>(cat.circles.size());
    }
    return cat;
}

CircleCatalog CircleCatalog::from_holes(const CarpetSpec& spec, int level, const std::vector<CircleBox>& holes) {
    CircleCatalog cat;
    cat.spec = spec;
    cat.level = level;
    PeripheralCircle outer;
    outer.id = 0;
    outer.role = CircleRole::Outer;
    outer.generation = 0;
    outer.box = CircleBox{0, 0, 0, 1};
    outer.den = 1;
    cat.circles.push_back(outer);
    cat.gen_offset_.assign(static_cast<size_t>(level) + 2, 0);
    cat.gen_offset_[0] = 0;
    cat.gen_offset_[1] = 1;
    int g = 1;
    for (const CircleBox& b : holes) {
        if (b.gen < g)
            throw ConstraintViolation("holes must arrive generation-major");
        while (g < b.gen) cat.gen_offset_[static_cast<size_t>(++g)] = static_cast<int>(cat.circles.size());
        PeripheralCircle c;
        c.id = static_cast<int>(cat.circles.size());
        c.role = CircleRole::Hole;
        c.generation = b.gen;
        c.box = b;
        c.den = ipow(spec.base(), b.gen);
        cat.circles.push_back(c);
    }
    while (g <= level) cat.gen_offset_[static_cast<size_t>(++g)] = static_cast<int>(cat.circles.size());
    return cat;
}

long long CircleCatalog::expected_count(const CarpetSpec& spec, int level) {
    long long total = 1;
    long long cells = 1;
    for (int g = 1; g <= level; ++g) {
        total += spec.holes_per_step() * cells;
        cells *= spec.kept_per_step();
    }
    return total;
}

int CircleCatalog::find(int gen, long long x0, long long y0) const {
    if (gen == 0) return (x0 == 0 && y0 == 0) ? 0 : -1;
    if (gen < 1 || gen > level) return -1;
    const int lo = gen_offset_[static_cast<size_t>(gen)];
    const int hi = gen_offset_[static_cast<size_t>(gen) + 1];
    auto key_less = [](const PeripheralCircle& c, const std::pair<long long, long long>& k) {
        return std::make_pair(c.box.y0, c.box.x0) < k;
    };
    auto it = std::lower_bound(circles.begin() + lo, circles.begin() + hi, std::make_pair(y0, x0), key_less);
    if (it == circles.begin() + hi || it->box.x0 != x0 || it->box.y0 != y0) return -1;
    return it->id;
}

int CircleCatalog::resolve_name(const std::string& name) const {
    if (name == "O" || name == "o") return 0;
    if (!name.empty() && name[0] == '#') return std::stoi(name.substr(1));
    const int p = spec.offset();
    const int q = spec.corner_pattern() ? spec.base() - p - spec.hole_ext() : p;
    if (level < 1) throw InvalidPair("no generation-1 circles at level 0");
    if (name == "M" || name == "M1" || name == "m1") return find(1, p, p);
    if (!spec.corner_pattern()) throw InvalidPair("S_m has a single inner circle M");
    if (name == "M2" || name == "m2") return find(1, q, p);
    if (name == "M3" || name == "m3") return find(1, q, q);
    if (name == "M4" || name == "m4") return find(1, p, q);
    throw InvalidPair("unknown circle name: " + name);
}

std::string CircleCatalog::display_name(int id) const {
    if (id == 0) return "O";
    const PeripheralCircle& c = at(id);
    if (c.generation == 1) {
        const int p = spec.offset();
        const int q = spec.corner_pattern() ? spec.base() - p - spec.hole_ext() : p;
        if (!spec.corner_pattern()) return "M";
        if (c.box.x0 == p && c.box.y0 == p) return "M1";
        if (c.box.x0 == q && c.box.y0 == p) return "M2";
        if (c.box.x0 == q && c.box.y0 == q) return "M3";
        if (c.box.x0 == p && c.box.y0 == q) return "M4";
    }
    return "#" + std::to_string(id);
}

int CircleCatalog::apply_symmetry(const Dih& g, int id) const {
    const PeripheralCircle& c = at(id);
    if (c.role == CircleRole::Outer) return id;
    const long long S = ipow(spec.base(), c.generation);
    long long x0 = c.box.x0, x1 = c.box.x0 + c.box.ext;
    long long y0 = c.box.y0, y1 = c.box.y0 + c.box.ext;
    g.apply_box(S, x0, x1, y0, y1);
    const int image = find(c.generation, x0, y0);
    if (image < 0) throw std::logic_error("dihedral image of a hole is not a hole");
    return image;
}

std::vector<int> CircleCatalog::orbit(const std::vector<Dih>& generators, int id) const {
    std::vector<int> out = {id};
    std::vector<int> frontier = {id};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int c : frontier) {
            for (const Dih& g : generators) {
                int im = apply_symmetry(g, c);
                if (!std::binary_search(out.begin(), out.end(), im)) {
                    out.insert(std::lower_bound(out.begin(), out.end(), im), im);
                    next.push_back(im);
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

PairClass classify_pair(const CircleCatalog& catalog, int c1, int c2) {
    if (c1 == c2) throw InvalidPair("pair must be two distinct circles");
    const PeripheralCircle& a = catalog.at(c1);
    const PeripheralCircle& b = catalog.at(c2);
    if (a.role == CircleRole::Outer || b.role == CircleRole::Outer) return PairClass::Nonadjacent;
    if (a.generation != b.generation) return PairClass::Nonadjacent;
    const long long n = catalog.spec.base();
    // adjacent iff removed from the same parent cell
    const bool same_parent = (a.box.x0 / n == b.box.x0 / n) && (a.box.y0 / n == b.box.y0 / n);
    return same_parent ? PairClass::Adjacent : PairClass::Nonadjacent;
}

CellGrid apply_symmetry(const Dih& g, const CellGrid& grid) {
    CellGrid out;
    out.spec = grid.spec;
    out.level = grid.level;
    out.side = grid.side;
    out.occ.assign(grid.occ.size(), 0);
    for (long long j = 0; j < grid.side; ++j)
        for (long long i = 0; i < grid.side; ++i) {
            auto [ii, jj] = g.apply_cell(grid.side, i, j);
            out.occ[static_cast<size_t>(jj) * grid.side + ii] = grid.occ[static_cast<size_t>(j) * grid.side + i];
        }
    return out;
}

AffineCopy subcarpet_map(const CircleCatalog& catalog, int circle_id) {
    const PeripheralCircle& c = catalog.at(circle_id);
    if (c.role == CircleRole::Outer) throw NotAHole("subcarpet_map needs a hole, got the outer circle");
    const long long n = catalog.spec.base();
    AffineCopy copy;
    copy.spec = catalog.spec;
    copy.scale_pow = c.generation - 1;
    copy.ax = c.box.x0 / n;
    copy.ay = c.box.y0 / n;
    return copy;
}

} // namespace cml
