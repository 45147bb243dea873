#include "cml/carpet_family.hpp"

#include <algorithm>

#include "cml/errors.hpp"

namespace cml {

FamilyInstance build_family_instance(const CircleCatalog& cat, const TouchIncidence& inc, int c1, int c2) {
    if (c1 == c2) throw InvalidPair("pair must be two distinct circles");
    if (c1 < 0 || c2 < 0 || c1 >= cat.size() || c2 >= cat.size())
        throw InvalidPair("circle id not in catalog");
    const long long N = inc.side;
    const int level = inc.level;

    const bool o1 = cat.is_outer(c1), o2 = cat.is_outer(c2);
    LevelBox box1{}, box2{};
    if (!o1) box1 = circle_box_at_level(cat, c1, level);
    if (!o2) box2 = circle_box_at_level(cat, c2, level);

    FamilyInstance fi;
    fi.fam = PathFamilySpec{cat.spec, level, c1, c2, inc.corner_touch};
    fi.side = N;

    std::vector<NodeClass> cls(static_cast<size_t>(N) * N, NodeClass::Unusable);
    std::vector<std::vector<int>> groups(static_cast<size_t>(N) * N);
    for (long long j = 0; j < N; ++j) {
        for (long long i = 0; i < N; ++i) {
            const size_t idx = static_cast<size_t>(j) * N + i;
            const auto& touched = inc.at(i, j);
            const bool t1 = std::binary_search(touched.begin(), touched.end(), c1);
            const bool t2 = std::binary_search(touched.begin(), touched.end(), c2);
            NodeClass c = NodeClass::Unusable;
            if (!t1 && !t2) {
                c = NodeClass::Free;
            } else if (t1 && !t2) {
                if (o1 || !cell_inside_box(i, j, box1)) c = NodeClass::Source;
            } else if (t2 && !t1) {
                if (o2 || !cell_inside_box(i, j, box2)) c = NodeClass::Target;
            }
            cls[idx] = c;
            if (c == NodeClass::Unusable) continue;
            auto& gset = groups[idx];
            for (int id : touched)
                if (id != c1 && id != c2) gset.push_back(id);
        }
    }

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(2 * N * (N - 1)));
    for (long long j = 0; j < N; ++j)
        for (long long i = 0; i < N; ++i) {
            const int u = static_cast<int>(j * N + i);
            if (i + 1 < N) edges.push_back({u, u + 1});
            if (j + 1 < N) edges.push_back({u, u + static_cast<int>(N)});
        }

    fi.graph = NodeGraph::build(static_cast<int>(N * N), cat.size(), edges, groups, cls);
    return fi;
}

CanonicalPair canonicalize_pair(const CircleCatalog& cat, int c1, int c2) {
    CanonicalPair best;
    best.a = std::min(c1, c2);
    best.b = std::max(c1, c2);
    best.g = dih_identity();
    for (const Dih& g : dihedral_group()) {
        const int a = cat.apply_symmetry(g, c1);
        const int b = cat.apply_symmetry(g, c2);
        const int lo = std::min(a, b), hi = std::max(a, b);
        if (std::make_pair(lo, hi) < std::make_pair(best.a, best.b)) {
            best.a = lo;
            best.b = hi;
            best.g = g;
        }
    }
    return best;
}

} // namespace cml
