#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "cml/catalog.hpp"
#include "cml/errors.hpp"
#include "cml/grid.hpp"
#include "cml/symmetry.hpp"

using namespace cml;

TEST_CASE("spec validation") {
    CHECK_NOTHROW(validate_spec(CarpetSpec::fnp(5, 1)));
    CHECK_THROWS_AS(validate_spec(CarpetSpec::fnp(5, 2)), ConstraintViolation); // 2 < 5/2 - 1 fails
    CHECK_NOTHROW(validate_spec(CarpetSpec::fnpr(7, 1, 2)));
    CHECK_THROWS_AS(validate_spec(CarpetSpec::sm(4)), ConstraintViolation); // parity
    CHECK_THROWS_AS(validate_spec(CarpetSpec::fnp(4, 1)), ConstraintViolation);
    CHECK_THROWS_AS(validate_spec(CarpetSpec::fnpr(7, 0, 2)), ConstraintViolation);
    CHECK_THROWS_AS(validate_spec(CarpetSpec::fnpr(7, 2, 2)), ConstraintViolation); // p + r < n/2 fails
    CHECK_NOTHROW(validate_spec(CarpetSpec::sm(3)));
    CHECK_NOTHROW(validate_spec(CarpetSpec::fnp(6, 1)));
}

TEST_CASE("generation counts are exact") {
    CHECK(generate(CarpetSpec::fnp(5, 1), 0).count() == 1);
    CHECK(generate(CarpetSpec::fnp(5, 1), 1).count() == 21);
    CHECK(generate(CarpetSpec::fnpr(7, 1, 2), 1).count() == 33);
    CHECK(generate(CarpetSpec::sm(3), 2).count() == 64);
    for (int k = 0; k <= 3; ++k) {
        long long want = 1;
        for (int t = 0; t < k; ++t) want *= 21;
        CHECK(generate(CarpetSpec::fnp(5, 1), k).count() == want);
    }
    for (int k = 0; k <= 2; ++k) {
        long long want = 1;
        for (int t = 0; t < k; ++t) want *= 33;
        CHECK(generate(CarpetSpec::fnpr(7, 1, 2), k).count() == want);
    }
    CHECK_THROWS_AS(generate(CarpetSpec::fnp(5, 1), 9), BudgetExceeded);
}

TEST_CASE("occupancy invariant under the dihedral group") {
    for (auto spec : {CarpetSpec::fnp(5, 1), CarpetSpec::fnpr(7, 1, 2), CarpetSpec::sm(3)}) {
        CellGrid grid = generate(spec, 2);
        for (const Dih& g : dihedral_group()) {
            CellGrid image = apply_symmetry(g, grid);
            CHECK(image.occ == grid.occ);
        }
    }
}

TEST_CASE("catalog counts and ids") {
    CircleCatalog c1 = CircleCatalog::build(CarpetSpec::fnp(5, 1), 1);
    CHECK(c1.size() == 5);
    CircleCatalog c2 = CircleCatalog::build(CarpetSpec::fnp(5, 1), 2);
    CHECK(c2.size() == 89); // 1 + 4 + 4*21
    CircleCatalog s1 = CircleCatalog::build(CarpetSpec::sm(3), 1);
    CHECK(s1.size() == 2);

    for (int k = 0; k <= 3; ++k) {
        CircleCatalog c = CircleCatalog::build(CarpetSpec::fnp(5, 1), k);
        long long want = 1, cells = 1;
        for (int g = 1; g <= k; ++g) {
            want += 4 * cells;
            cells *= 21;
        }
        CHECK(c.size() == want);
        CHECK(c.size() == CircleCatalog::expected_count(CarpetSpec::fnp(5, 1), k));
    }

    // ids are stable: generation-major, then row-major by anchor
    for (int id = 1; id < c2.size(); ++id) {
        const auto& prev = c2.at(id - 1);
        const auto& cur = c2.at(id);
        CHECK(std::tie(prev.generation, prev.box.y0, prev.box.x0) <
              std::tie(cur.generation, cur.box.y0, cur.box.x0));
    }
}

TEST_CASE("generation-1 anchors are the dihedral images of (p/n, p/n)") {
    CircleCatalog cat = CircleCatalog::build(CarpetSpec::fnp(5, 1), 1);
    const int m1 = cat.resolve_name("M1");
    CHECK(cat.at(m1).anchor_x() == Rat(1, 5));
    CHECK(cat.at(m1).anchor_y() == Rat(1, 5));
    CHECK(cat.at(m1).side() == Rat(1, 5));

    std::set<std::pair<Rat, Rat>> images;
    for (const Dih& g : dihedral_group()) {
        auto [x, y] = g.apply(Rat(1, 5), Rat(1, 5));
        // image of the anchor corner of the square, normalized to the image square's anchor
        Rat ax = rat_min(x, g.apply(Rat(2, 5), Rat(2, 5)).first);
        Rat ay = rat_min(y, g.apply(Rat(2, 5), Rat(2, 5)).second);
        images.insert({ax, ay});
    }
    std::set<std::pair<Rat, Rat>> anchors;
    for (auto name : {"M1", "M2", "M3", "M4"}) {
        const auto& c = cat.at(cat.resolve_name(name));
        anchors.insert({c.anchor_x(), c.anchor_y()});
    }
    CHECK(images == anchors);
}

TEST_CASE("hole circles are disjoint and separated: dist >= min side, exactly") {
    for (auto spec : {CarpetSpec::fnp(5, 1), CarpetSpec::sm(3)}) {
        for (int k = 1; k <= 3; ++k) {
            CircleCatalog cat = CircleCatalog::build(spec, k);
            const long long n = spec.base();
            const long long N = ipow(n, k);
            // collect boxes at the common level-k scale
            std::vector<std::array<long long, 4>> boxes;
            for (const auto& c : cat.circles) {
                if (c.role != CircleRole::Hole) continue;
                const long long s = ipow(n, k - c.generation);
                boxes.push_back({c.box.x0 * s, (c.box.x0 + c.box.ext) * s, c.box.y0 * s, (c.box.y0 + c.box.ext) * s});
            }
            (void)N;
            for (size_t a = 0; a < boxes.size(); ++a) {
                for (size_t b = a + 1; b < boxes.size(); ++b) {
                    const long long dx = std::max({0LL, boxes[a][0] - boxes[b][1], boxes[b][0] - boxes[a][1]});
                    const long long dy = std::max({0LL, boxes[a][2] - boxes[b][3], boxes[b][2] - boxes[a][3]});
                    const long long la = boxes[a][1] - boxes[a][0];
                    const long long lb = boxes[b][1] - boxes[b][0];
                    const long long lmin = std::min(la, lb);
                    // disjoint: positive distance in at least one axis
                    CHECK((dx > 0 || dy > 0));
                    // dist(C1,C2) >= min side, via squared integer comparison
                    CHECK(dx * dx + dy * dy >= lmin * lmin);
                }
            }
        }
    }
}

TEST_CASE("dihedral group structure") {
    CHECK(dihedral_group().size() == 8);
    CHECK(compose(dih_rd(), dih_rd()).is_identity());
    CHECK(compose(dih_rv(), dih_rv()).is_identity());

    // generated by rd and rv
    std::set<int> seen = {dih_identity().code()};
    bool grew = true;
    while (grew) {
        grew = false;
        for (int code : std::set<int>(seen)) {
            Dih g;
            for (const Dih& h : dihedral_group())
                if (h.code() == code) g = h;
            for (const Dih& gen : {dih_rd(), dih_rv()}) {
                int c = compose(gen, g).code();
                if (seen.insert(c).second) grew = true;
            }
        }
    }
    CHECK(seen.size() == 8);

    // associativity of the action on circles, all 64 pairs, exact
    CircleCatalog cat = CircleCatalog::build(CarpetSpec::fnp(5, 1), 2);
    for (const Dih& g : dihedral_group())
        for (const Dih& h : dihedral_group())
            for (int id : {0, 1, 2, 5, 30, 60}) {
                const int lhs = cat.apply_symmetry(compose(g, h), id);
                const int rhs = cat.apply_symmetry(g, cat.apply_symmetry(h, id));
                CHECK(lhs == rhs);
            }
}

TEST_CASE("orbit of M1 is the four inner circles") {
    CircleCatalog cat = CircleCatalog::build(CarpetSpec::fnp(5, 1), 1);
    auto orb = cat.orbit({dih_rd(), dih_rv()}, cat.resolve_name("M1"));
    std::vector<int> want = {cat.resolve_name("M1"), cat.resolve_name("M2"), cat.resolve_name("M3"),
                             cat.resolve_name("M4")};
    std::sort(want.begin(), want.end());
    CHECK(orb == want);
}

namespace {

// independent adjacency oracle: enumerate every scaled copy and collect the
// pairs of its generation-1 inner circles
std::set<std::pair<int, int>> adjacency_by_enumeration(const CircleCatalog& cat) {
    const CarpetSpec& spec = cat.spec;
    const long long n = spec.base();
    std::set<std::pair<int, int>> adj;
    for (int j = 0; j + 1 <= cat.level; ++j) {
        const long long S = ipow(n, j);
        for (long long cy = 0; cy < S; ++cy)
            for (long long cx = 0; cx < S; ++cx) {
                if (!cell_occupied(spec, j, cx, cy)) continue;
                std::vector<int> inner;
                const int p = spec.offset();
                const int q = spec.corner_pattern() ? spec.base() - p - spec.hole_ext() : p;
                std::set<std::pair<int, int>> digs = {{p, p}, {q, p}, {q, q}, {p, q}};
                for (auto [a, b] : digs) {
                    int id = cat.find(j + 1, cx * n + a, cy * n + b);
                    if (id >= 0) inner.push_back(id);
                }
                for (size_t x = 0; x < inner.size(); ++x)
                    for (size_t y = x + 1; y < inner.size(); ++y)
                        adj.insert({std::min(inner[x], inner[y]), std::max(inner[x], inner[y])});
            }
    }
    return adj;
}

} // namespace

TEST_CASE("classify_pair matches the copy-enumeration oracle at k=2") {
    for (auto spec : {CarpetSpec::fnp(5, 1), CarpetSpec::sm(3)}) {
        CircleCatalog cat = CircleCatalog::build(spec, 2);
        auto adj = adjacency_by_enumeration(cat);
        for (int a = 0; a < cat.size(); ++a)
            for (int b = a + 1; b < cat.size(); ++b) {
                const bool is_adj = classify_pair(cat, a, b) == PairClass::Adjacent;
                CHECK(is_adj == (adj.count({a, b}) > 0));
                // symmetric in its arguments
                CHECK((classify_pair(cat, b, a) == PairClass::Adjacent) == is_adj);
            }
    }
}

TEST_CASE("classify_pair spec cases") {
    CircleCatalog cat = CircleCatalog::build(CarpetSpec::fnp(5, 1), 2);
    const int m1 = cat.resolve_name("M1"), m2 = cat.resolve_name("M2");
    CHECK(classify_pair(cat, m1, m2) == PairClass::Adjacent);
    CHECK(classify_pair(cat, 0, m1) == PairClass::Nonadjacent);
    CHECK_THROWS_AS(classify_pair(cat, m1, m1), InvalidPair);

    // a generation-2 hole inside the copy anchored at cell (0,1) is not
    // adjacent to M1 (different parent cells)
    const int deep = cat.find(2, 0 * 5 + 1, 1 * 5 + 1);
    REQUIRE(deep >= 0);
    CHECK(classify_pair(cat, m1, deep) == PairClass::Nonadjacent);

    // invariance under the dihedral action
    for (const Dih& g : dihedral_group())
        for (auto [a, b] : std::vector<std::pair<int, int>>{{m1, m2}, {0, m1}, {m1, deep}})
            CHECK(classify_pair(cat, cat.apply_symmetry(g, a), cat.apply_symmetry(g, b)) ==
                  classify_pair(cat, a, b));
}

TEST_CASE("subcarpet_map") {
    CircleCatalog cat = CircleCatalog::build(CarpetSpec::fnp(5, 1), 2);
    const int m1 = cat.resolve_name("M1");
    AffineCopy idcopy = subcarpet_map(cat, m1);
    CHECK(idcopy.scale_pow == 0);
    CHECK(idcopy.ax == 0);
    CHECK(idcopy.ay == 0);
    CHECK(idcopy.outer_box() == cat.at(0).box);
    CHECK_THROWS_AS(subcarpet_map(cat, 0), NotAHole);

    // a generation-2 hole maps to the copy anchored at its parent cell
    const int deep = cat.find(2, 11, 6); // parent cell (2, 1)
    REQUIRE(deep >= 0);
    AffineCopy copy = subcarpet_map(cat, deep);
    CHECK(copy.scale_pow == 1);
    CHECK(copy.ax == 2);
    CHECK(copy.ay == 1);

    // the copy maps the level-1 catalog bijectively onto the circles inside
    // the copy at level 2, id by id
    CircleCatalog base = CircleCatalog::build(CarpetSpec::fnp(5, 1), 1);
    std::set<int> images;
    for (const auto& hc : base.circles) {
        if (hc.role != CircleRole::Hole) continue;
        CircleBox full = copy.to_full(hc.box);
        const int fid = cat.find(full.gen, full.x0, full.y0);
        CHECK(fid >= 0);
        images.insert(fid);
    }
    // exactly the generation-2 holes inside cell (2,1)
    std::set<int> inside;
    for (const auto& c : cat.circles)
        if (c.generation == 2 && c.box.x0 / 5 == 2 && c.box.y0 / 5 == 1) inside.insert(c.id);
    CHECK(images == inside);
    CHECK(images.size() == 4);
}

TEST_CASE("display names follow the counterclockwise corner order") {
    CircleCatalog cat = CircleCatalog::build(CarpetSpec::fnp(5, 1), 1);
    CHECK(cat.display_name(0) == "O");
    CHECK(cat.at(cat.resolve_name("M1")).box.x0 == 1);
    CHECK(cat.at(cat.resolve_name("M2")).box.x0 == 3);
    CHECK(cat.at(cat.resolve_name("M2")).box.y0 == 1);
    CHECK(cat.at(cat.resolve_name("M3")).box.y0 == 3);
    CHECK(cat.at(cat.resolve_name("M4")).box.x0 == 1);
    CHECK(cat.at(cat.resolve_name("M4")).box.y0 == 3);
    CHECK(cat.resolve_name("#3") == 3);
    CircleCatalog sm = CircleCatalog::build(CarpetSpec::sm(3), 1);
    CHECK(sm.resolve_name("M") == 1);
    CHECK(sm.at(1).anchor_x() == Rat(1, 3));
}
