#include "cml/carpet_modulus.hpp"

#include <algorithm>
#include <map>

#include "cml/errors.hpp"
#include "cml/grid.hpp"

namespace cml {

namespace {

CarpetReport solve_family(const PathFamilySpec& fam, const CarpetSolveOptions& opt, bool brute,
                          long long path_budget) {
    validate_spec(fam.spec);
    const long long N = ipow(fam.spec.base(), fam.level);
    if (N * N > opt.cell_budget)
        throw BudgetExceeded("family instance of " + std::to_string(N) + "^2 cells exceeds budget", N * N);

    CircleCatalog cat = CircleCatalog::build(fam.spec, fam.level);
    CarpetReport rep;
    rep.fam = fam;
    rep.pair_class = classify_pair(cat, fam.c1, fam.c2);

    CanonicalPair canon;
    if (opt.canonicalize) {
        canon = canonicalize_pair(cat, fam.c1, fam.c2);
    } else {
        canon.a = std::min(fam.c1, fam.c2);
        canon.b = std::max(fam.c1, fam.c2);
        canon.g = dih_identity();
    }
    rep.canon = canon;

    TouchIncidence inc = build_touch_incidence(cat, fam.level, fam.corner_touch, opt.engine.parallel);
    FamilyInstance fi = build_family_instance(cat, inc, canon.a, canon.b);

    EngineReport core = brute ? brute_force_modulus(fi.graph, path_budget, opt.engine)
                              : solve_modulus(fi.graph, opt.engine);

    rep.status = core.status;
    rep.value = core.value;
    rep.active_paths = std::move(core.active_paths);
    rep.active_lengths = std::move(core.active_lengths);
    rep.rounds = core.rounds;
    rep.qp_sweeps = core.qp_sweeps;
    rep.rows = core.rows;
    rep.max_violation = core.max_violation;
    rep.wall_ms = core.wall_ms;

    // map the canonical solution back to the original labeling
    rep.rho.assign(static_cast<size_t>(cat.size()), 0.0);
    if (!core.rho.empty()) {
        for (int id = 0; id < cat.size(); ++id) {
            const int image = cat.apply_symmetry(canon.g, id);
            rep.rho[static_cast<size_t>(id)] = core.rho[static_cast<size_t>(image)];
        }
        rep.rho[static_cast<size_t>(fam.c1)] = 0.0;
        rep.rho[static_cast<size_t>(fam.c2)] = 0.0;
    }
    return rep;
}

} // namespace

CarpetReport carpet_modulus(const PathFamilySpec& fam, const CarpetSolveOptions& opt) {
    return solve_family(fam, opt, false, 0);
}

CarpetReport brute_force_carpet_modulus(const PathFamilySpec& fam, long long path_budget,
                                        const CarpetSolveOptions& opt) {
    // canonicalized like the main solver, so relabeled pairs enumerate the
    // identical instance and agree bitwise
    return solve_family(fam, opt, true, path_budget);
}

OrbitPartition orbit_partition(const CircleCatalog& cat, const std::vector<Dih>& generators) {
    OrbitPartition part;
    part.orbit_of.assign(static_cast<size_t>(cat.size()), -1);
    for (int id = 0; id < cat.size(); ++id) {
        if (part.orbit_of[static_cast<size_t>(id)] >= 0) continue;
        std::vector<int> orb = cat.orbit(generators, id);
        const int oi = static_cast<int>(part.orbits.size());
        for (int c : orb) part.orbit_of[static_cast<size_t>(c)] = oi;
        part.orbits.push_back(std::move(orb));
    }
    return part;
}

CarpetReport group_carpet_modulus(const PathFamilySpec& fam, const GroupQuotientSpec& q,
                                  const CarpetSolveOptions& opt) {
    validate_spec(fam.spec);
    const long long N = ipow(fam.spec.base(), fam.level);
    if (N * N > opt.cell_budget)
        throw BudgetExceeded("family instance of " + std::to_string(N) + "^2 cells exceeds budget", N * N);

    CircleCatalog cat = CircleCatalog::build(fam.spec, fam.level);
    OrbitPartition part = orbit_partition(cat, q.generators);
    for (int c : {fam.c1, fam.c2}) {
        const auto& orb = part.orbits[static_cast<size_t>(part.orbit_of[static_cast<size_t>(c)])];
        if (orb.size() > 1 && !q.allow_mixed_pair_orbits)
            throw InvalidPair("orbit of an excluded circle is not a singleton; flag allow_mixed_pair_orbits");
    }

    CarpetReport rep;
    rep.fam = fam;
    rep.pair_class = classify_pair(cat, fam.c1, fam.c2);
    rep.canon.a = fam.c1;
    rep.canon.b = fam.c2;
    rep.canon.g = dih_identity();

    TouchIncidence inc = build_touch_incidence(cat, fam.level, fam.corner_touch, opt.engine.parallel);
    FamilyInstance fi = build_family_instance(cat, inc, fam.c1, fam.c2);
    fi.graph.var_of_group = part.orbit_of;
    fi.graph.num_vars = static_cast<int>(part.orbits.size());

    EngineReport core = solve_modulus(fi.graph, opt.engine);

    rep.status = core.status;
    rep.value = core.value;
    rep.orbit_rho = core.vars;
    rep.active_paths = std::move(core.active_paths);
    rep.active_lengths = std::move(core.active_lengths);
    rep.rounds = core.rounds;
    rep.qp_sweeps = core.qp_sweeps;
    rep.rows = core.rows;
    rep.max_violation = core.max_violation;
    rep.wall_ms = core.wall_ms;
    rep.rho = core.rho;
    if (!rep.rho.empty()) {
        rep.rho[static_cast<size_t>(fam.c1)] = 0.0;
        rep.rho[static_cast<size_t>(fam.c2)] = 0.0;
    }
    return rep;
}

namespace {

struct ExtractedCopy {
    std::vector<CircleBox> local_holes; // sorted (gen, y0, x0)
    std::vector<uint8_t> occ;           // window occupancy, row-major
    long long side = 0;
    int m_pos_id = -1; // local id guess of the chosen circle (set later)
};

} // namespace

SelfSimilarityReport self_similarity_check(const CarpetSpec& spec, int level, int circle_id,
                                           int base_level, const CarpetSolveOptions& opt) {
    validate_spec(spec);
    CircleCatalog cat = CircleCatalog::build(spec, level);
    const PeripheralCircle& c = cat.at(circle_id);
    if (c.role == CircleRole::Outer) throw NotAHole("self-similarity check needs a hole");
    const int m = c.generation;
    if (base_level != level - m + 1)
        throw LevelMismatch("base level must be level - generation + 1 = " + std::to_string(level - m + 1) +
                            ", got " + std::to_string(base_level));

    const long long n = spec.base();
    AffineCopy copy = subcarpet_map(cat, circle_id);

    SelfSimilarityReport out;
    out.circle = circle_id;
    out.generation = m;
    out.base_level = base_level;

    // extract the copy's holes in local coordinates
    std::vector<CircleBox> local;
    for (const PeripheralCircle& h : cat.circles) {
        if (h.role != CircleRole::Hole || h.generation < m) continue;
        const int gl = h.generation - copy.scale_pow;
        const long long scale = ipow(n, gl);
        const long long wx0 = copy.ax * scale, wy0 = copy.ay * scale;
        if (h.box.x0 < wx0 || h.box.x0 + h.box.ext > wx0 + scale) continue;
        if (h.box.y0 < wy0 || h.box.y0 + h.box.ext > wy0 + scale) continue;
        local.push_back(CircleBox{gl, h.box.x0 - wx0, h.box.y0 - wy0, h.box.ext});
    }
    std::sort(local.begin(), local.end(), [](const CircleBox& a, const CircleBox& b) {
        return std::tie(a.gen, a.y0, a.x0) < std::tie(b.gen, b.y0, b.x0);
    });

    // extract the copy's occupancy window from the level-k grid
    CellGrid full = generate(spec, level, opt.cell_budget);
    const long long W = ipow(n, base_level);
    const long long ox = copy.ax * W, oy = copy.ay * W;
    std::vector<uint8_t> window(static_cast<size_t>(W) * W, 0);
    for (long long j = 0; j < W; ++j)
        for (long long i = 0; i < W; ++i)
            window[static_cast<size_t>(j) * W + i] = full.occupied(ox + i, oy + j) ? 1 : 0;

    // the base instance built directly
    CircleCatalog base_cat = CircleCatalog::build(spec, base_level);
    CellGrid base_grid = generate(spec, base_level, opt.cell_budget);

    bool iso = (static_cast<int>(local.size()) == base_cat.size() - 1);
    if (iso)
        for (size_t i = 0; i < local.size(); ++i)
            if (!(local[i] == base_cat.at(static_cast<int>(i) + 1).box)) {
                iso = false;
                break;
            }
    if (iso && window != base_grid.occ) iso = false;
    out.isomorphic = iso;

    // the local id of the chosen circle and its paper name
    const CircleBox local_c{1, c.box.x0 - copy.ax * n, c.box.y0 - copy.ay * n, c.box.ext};
    const int local_id = base_cat.find(1, local_c.x0, local_c.y0);
    out.base_pair = base_cat.display_name(local_id);

    // solve the base instance and the extracted instance through the same
    // uncanonicalized pipeline; identical data must produce identical bits
    CircleCatalog extr_cat = CircleCatalog::from_holes(spec, base_level, local);
    const int local_id_extr = extr_cat.find(1, local_c.x0, local_c.y0);
    if (local_id_extr < 0) throw LevelMismatch("chosen circle missing from the extracted copy");

    TouchIncidence base_inc = build_touch_incidence(base_cat, base_level, true, opt.engine.parallel);
    TouchIncidence extr_inc = build_touch_incidence(extr_cat, base_level, true, opt.engine.parallel);
    if (iso && base_inc.cell_circles != extr_inc.cell_circles) iso = false;
    out.isomorphic = iso;

    FamilyInstance base_fi = build_family_instance(base_cat, base_inc, 0, local_id);
    FamilyInstance extr_fi = build_family_instance(extr_cat, extr_inc, 0, local_id_extr);
    EngineReport base_core = solve_modulus(base_fi.graph, opt.engine);
    EngineReport extr_core = solve_modulus(extr_fi.graph, opt.engine);
    out.value_base = base_core.value;
    out.status_base = base_core.status;
    out.value_copy = extr_core.value;
    out.status_copy = extr_core.status;
    out.values_equal = iso && (out.value_copy == out.value_base) && (out.status_copy == out.status_base);
    return out;
}

nlohmann::json carpet_report_to_json(const CircleCatalog& cat, const CarpetReport& rep,
                                     const std::string& cache_key) {
    nlohmann::json j;
    j["schema"] = "cm-report/1";
    nlohmann::json spec;
    spec["family"] = rep.fam.spec.family == Family::Fnp ? "fnp" : (rep.fam.spec.family == Family::Fnpr ? "fnpr" : "sm");
    spec["n"] = rep.fam.spec.n;
    spec["p"] = rep.fam.spec.p;
    spec["r"] = rep.fam.spec.r;
    spec["m"] = rep.fam.spec.m;
    j["spec"] = spec;
    j["level"] = rep.fam.level;
    j["pair"] = {rep.fam.c1, rep.fam.c2};
    j["pair_names"] = {cat.display_name(rep.fam.c1), cat.display_name(rep.fam.c2)};
    j["pair_class"] = rep.pair_class == PairClass::Adjacent ? "adjacent" : "nonadjacent";
    j["corner_touch"] = rep.fam.corner_touch;
    j["status"] = to_string(rep.status);
    if (rep.status == SolveStatus::Ok || rep.status == SolveStatus::IterationLimit) {
        j["value"] = rep.value;
        nlohmann::json rho = nlohmann::json::array();
        for (size_t i = 0; i < rep.rho.size(); ++i)
            rho.push_back({{"circle_id", static_cast<int>(i)}, {"weight", rep.rho[i]}});
        j["rho"] = std::move(rho);
        if (!rep.orbit_rho.empty()) j["orbit_rho"] = rep.orbit_rho;
        j["active_paths"] = rep.active_paths;
        j["active_lengths"] = rep.active_lengths;
    }
    nlohmann::json diag;
    diag["rounds"] = rep.rounds;
    diag["qp_sweeps"] = rep.qp_sweeps;
    diag["rows"] = rep.rows;
    diag["max_violation"] = rep.max_violation;
    diag["wall_ms"] = rep.wall_ms;
    diag["canonical_pair"] = {rep.canon.a, rep.canon.b};
    diag["canonical_map"] = rep.canon.g.name();
    if (!cache_key.empty()) diag["cache_key"] = cache_key;
    j["diagnostics"] = std::move(diag);
    return j;
}

} // namespace cml
