#include "cml/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "cml/errors.hpp"
#include "cml/parallel.hpp"

namespace cml {

namespace {

std::vector<std::pair<std::pair<int, int>, int>> pair_orbits(const CircleCatalog& cat,
                                                             const ExperimentConfig& cfg) {
    std::map<std::pair<int, int>, int> orbits;
    const bool restricted = cfg.pair_policy == "o-or-inner";
    for (int a = 0; a < cat.size(); ++a) {
        if (cat.at(a).generation > cfg.max_generation) continue;
        for (int b = a + 1; b < cat.size(); ++b) {
            if (cat.at(b).generation > cfg.max_generation) continue;
            if (restricted && cat.at(a).generation > 1 && cat.at(b).generation > 1) continue;
            if (classify_pair(cat, a, b) != PairClass::Nonadjacent) continue;
            auto canon = canonicalize_pair(cat, a, b);
            orbits[{canon.a, canon.b}]++;
        }
    }
    return {orbits.begin(), orbits.end()};
}

bool is_outer_inner_orbit(const CircleCatalog& cat, std::pair<int, int> pr) {
    return cat.is_outer(pr.first) ? cat.at(pr.second).generation == 1
                                  : (cat.is_outer(pr.second) && cat.at(pr.first).generation == 1);
}

SignatureReport build_signature(const CircleCatalog& cat, const std::vector<TableRow>& rows,
                                double tie_tol) {
    SignatureReport sig;
    double best = -1;
    for (const TableRow& r : rows) {
        if (r.status == SolveStatus::Vacuous || r.status == SolveStatus::NoPath) {
            ++sig.vacuous_rows;
            continue;
        }
        best = std::max(best, r.value);
    }
    sig.max_value = best;
    for (const TableRow& r : rows) {
        if (r.status != SolveStatus::Ok) continue;
        if (r.value >= best - tie_tol * std::max(1.0, best)) {
            sig.maximizers.push_back({r.c1, r.c2});
            sig.multiplicity += r.orbit_size;
        } else {
            sig.runner_up = std::max(sig.runner_up, r.value);
        }
    }
    sig.margin = sig.max_value - sig.runner_up;
    sig.maximizer_is_outer_inner =
        sig.maximizers.size() == 1 && is_outer_inner_orbit(cat, sig.maximizers.front());
    return sig;
}

} // namespace

InterchangeReport interchange_table(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    validate_spec(cfg.spec);
    CircleCatalog cat = CircleCatalog::build(cfg.spec, cfg.level);
    auto orbits = pair_orbits(cat, cfg);

    InterchangeReport rep;
    rep.cfg = cfg;
    rep.rows.resize(orbits.size());

    // base values per level for the chain-bound column, computed up front
    std::map<int, double> base_value;
    {
        for (int lvl = 1; lvl <= cfg.level; ++lvl) {
            CircleCatalog bc = CircleCatalog::build(cfg.spec, lvl);
            PathFamilySpec fam{cfg.spec, lvl, 0, bc.resolve_name("M1"), cfg.corner_touch};
            CarpetReport r = carpet_modulus(fam, cfg.solve);
            base_value[lvl] = r.status == SolveStatus::Ok ? r.value : -1;
        }
    }

    parallel_for(static_cast<long long>(orbits.size()), cfg.parallel_rows, [&](long long i) {
        auto [pr, mult] = orbits[static_cast<size_t>(i)];
        TableRow row;
        row.c1 = pr.first;
        row.c2 = pr.second;
        row.name1 = cat.display_name(pr.first);
        row.name2 = cat.display_name(pr.second);
        row.orbit_size = mult;
        PathFamilySpec fam{cfg.spec, cfg.level, pr.first, pr.second, cfg.corner_touch};
        CarpetSolveOptions inner = cfg.solve;
        inner.engine.parallel = false; // rows already run in parallel
        CarpetReport r = carpet_modulus(fam, inner);
        row.status = r.status;
        row.value = r.status == SolveStatus::Ok ? r.value : 0;
        row.wall_ms = r.wall_ms;
        // smaller circle picks the subcarpet copy
        const auto& A = cat.at(pr.first);
        const auto& B = cat.at(pr.second);
        int small = pr.second;
        if (!cat.is_outer(pr.first) && (cat.is_outer(pr.second) || !(B.side() < A.side())))
            small = pr.first;
        row.small_generation = cat.at(small).generation;
        const int base_level = cfg.level - row.small_generation + 1;
        row.chain_bound = base_value.count(base_level) ? base_value.at(base_level) : -1;
        row.chain_bound_holds =
            row.status != SolveStatus::Ok || row.value <= row.chain_bound + 1e-9;
        rep.rows[static_cast<size_t>(i)] = std::move(row);
    });

    for (const TableRow& r : rep.rows)
        if (!r.chain_bound_holds) ++rep.chain_bound_violations;
    rep.signature = build_signature(cat, rep.rows, cfg.tie_tol);
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

SignatureReport maximizer_signature(const ExperimentConfig& cfg) {
    InterchangeReport rep = interchange_table(cfg);
    const SignatureReport& sig = rep.signature;
    if (sig.maximizers.empty())
        throw TieAmbiguity("no finite rows to rank");
    if (sig.maximizers.size() > 1)
        throw TieAmbiguity("maximum attained by " + std::to_string(sig.maximizers.size()) +
                           " distinct orbits within tie tolerance");
    return sig;
}

Fingerprint fingerprint(const ExperimentConfig& cfg) {
    Fingerprint fp;
    fp.spec = cfg.spec;
    fp.level = cfg.level;
    fp.dimension = std::log(static_cast<double>(cfg.spec.kept_per_step())) /
                   std::log(static_cast<double>(cfg.spec.base()));
    fp.catalog_count = CircleCatalog::expected_count(cfg.spec, cfg.level);
    ExperimentConfig c = cfg;
    c.pair_policy = "o-or-inner"; // keeps fingerprints cheap; includes the maximizer orbit
    InterchangeReport rep = interchange_table(c);
    std::vector<double> values;
    for (const TableRow& r : rep.rows)
        if (r.status == SolveStatus::Ok) values.push_back(r.value);
    std::sort(values.rbegin(), values.rend());
    fp.max_value = values.empty() ? 0 : values.front();
    for (size_t i = 0; i < values.size() && i < 5; ++i)
        fp.top_ratios.push_back(fp.max_value > 0 ? values[i] / fp.max_value : 0);
    return fp;
}

FingerprintComparison fingerprint_compare(const CarpetSpec& a, const CarpetSpec& b, int level,
                                          const ExperimentConfig& base_cfg) {
    ExperimentConfig ca = base_cfg, cb = base_cfg;
    ca.spec = a;
    ca.level = level;
    cb.spec = b;
    cb.level = level;
    FingerprintComparison cmp;
    cmp.a = fingerprint(ca);
    cmp.b = fingerprint(cb);
    auto rel = [](double x, double y) {
        const double s = std::max({std::abs(x), std::abs(y), 1e-12});
        return std::abs(x - y) / s;
    };
    cmp.same_dimension = rel(cmp.a.dimension, cmp.b.dimension) < 1e-12;
    double gap = 0;
    gap = std::max(gap, rel(cmp.a.dimension, cmp.b.dimension));
    gap = std::max(gap, cmp.a.catalog_count == cmp.b.catalog_count ? 0.0 : 1.0);
    const size_t nt = std::max(cmp.a.top_ratios.size(), cmp.b.top_ratios.size());
    for (size_t i = 0; i < nt; ++i) {
        const double x = i < cmp.a.top_ratios.size() ? cmp.a.top_ratios[i] : 0;
        const double y = i < cmp.b.top_ratios.size() ? cmp.b.top_ratios[i] : 0;
        gap = std::max(gap, rel(x, y));
    }
    cmp.max_rel_gap = gap;
    cmp.indistinguishable = gap < 1e-9;
    return cmp;
}

ConvergenceReport convergence_study(const CarpetSpec& spec, const std::string& c1,
                                    const std::string& c2, int k_min, int k_max,
                                    const CarpetSolveOptions& opt) {
    ConvergenceReport rep;
    rep.spec = spec;
    rep.pair_name1 = c1;
    rep.pair_name2 = c2;
    for (int k = k_min; k <= k_max; ++k) {
        CircleCatalog cat = CircleCatalog::build(spec, k);
        PathFamilySpec fam{spec, k, cat.resolve_name(c1), cat.resolve_name(c2), true};
        CarpetReport r = carpet_modulus(fam, opt);
        rep.levels.push_back(k);
        rep.values.push_back(r.status == SolveStatus::Ok ? r.value : 0);
        rep.statuses.push_back(r.status);
    }
    for (size_t i = 0; i + 1 < rep.values.size(); ++i)
        rep.diffs.push_back(std::abs(rep.values[i + 1] - rep.values[i]));
    return rep;
}

std::string interchange_csv(const InterchangeReport& rep) {
    std::string out = "c1,c2,name1,name2,orbit_size,status,value,small_generation,chain_bound,chain_bound_holds\n";
    char buf[64];
    for (const TableRow& r : rep.rows) {
        out += std::to_string(r.c1) + "," + std::to_string(r.c2) + "," + r.name1 + "," + r.name2 + "," +
               std::to_string(r.orbit_size) + "," + to_string(r.status) + ",";
        std::snprintf(buf, sizeof buf, "%.12g", r.value);
        out += buf;
        out += "," + std::to_string(r.small_generation) + ",";
        std::snprintf(buf, sizeof buf, "%.12g", r.chain_bound);
        out += buf;
        out += std::string(",") + (r.chain_bound_holds ? "1" : "0") + "\n";
    }
    return out;
}

namespace {

nlohmann::json spec_json(const CarpetSpec& s) {
    return {{"family", s.family == Family::Fnp ? "fnp" : (s.family == Family::Fnpr ? "fnpr" : "sm")},
            {"n", s.n},
            {"p", s.p},
            {"r", s.r},
            {"m", s.m},
            {"slug", s.slug()}};
}

nlohmann::json signature_json(const SignatureReport& sig) {
    nlohmann::json j;
    j["max_value"] = sig.max_value;
    j["multiplicity"] = sig.multiplicity;
    j["runner_up"] = sig.runner_up;
    j["margin"] = sig.margin;
    j["vacuous_rows"] = sig.vacuous_rows;
    j["maximizer_is_outer_inner"] = sig.maximizer_is_outer_inner;
    nlohmann::json ms = nlohmann::json::array();
    for (auto [a, b] : sig.maximizers) ms.push_back({a, b});
    j["maximizers"] = std::move(ms);
    return j;
}

} // namespace

nlohmann::json interchange_to_json(const InterchangeReport& rep) {
    nlohmann::json j;
    j["schema"] = "exp-report/1";
    j["kind"] = "interchange";
    j["spec"] = spec_json(rep.cfg.spec);
    j["level"] = rep.cfg.level;
    j["max_generation"] = rep.cfg.max_generation;
    j["corner_touch"] = rep.cfg.corner_touch;
    j["pair_policy"] = rep.cfg.pair_policy;
    nlohmann::json rows = nlohmann::json::array();
    for (const TableRow& r : rep.rows) {
        rows.push_back({{"pair", {r.c1, r.c2}},
                        {"names", {r.name1, r.name2}},
                        {"orbit_size", r.orbit_size},
                        {"status", to_string(r.status)},
                        {"value", r.value},
                        {"small_generation", r.small_generation},
                        {"chain_bound", r.chain_bound},
                        {"chain_bound_holds", r.chain_bound_holds}});
    }
    j["rows"] = std::move(rows);
    j["signature"] = signature_json(rep.signature);
    j["chain_bound_violations"] = rep.chain_bound_violations;
    return j;
}

nlohmann::json convergence_to_json(const ConvergenceReport& rep) {
    nlohmann::json j;
    j["schema"] = "exp-report/1";
    j["kind"] = "convergence";
    j["spec"] = spec_json(rep.spec);
    j["pair"] = {rep.pair_name1, rep.pair_name2};
    j["levels"] = rep.levels;
    j["values"] = rep.values;
    nlohmann::json st = nlohmann::json::array();
    for (SolveStatus s : rep.statuses) st.push_back(to_string(s));
    j["statuses"] = std::move(st);
    j["diffs"] = rep.diffs;
    return j;
}

nlohmann::json fingerprint_to_json(const FingerprintComparison& rep) {
    auto one = [](const Fingerprint& f) {
        return nlohmann::json{{"spec", spec_json(f.spec)},
                              {"level", f.level},
                              {"dimension", f.dimension},
                              {"catalog_count", f.catalog_count},
                              {"max_value", f.max_value},
                              {"top_ratios", f.top_ratios}};
    };
    nlohmann::json j;
    j["schema"] = "exp-report/1";
    j["kind"] = "fingerprint";
    j["a"] = one(rep.a);
    j["b"] = one(rep.b);
    j["same_dimension"] = rep.same_dimension;
    j["indistinguishable"] = rep.indistinguishable;
    j["max_rel_gap"] = rep.max_rel_gap;
    j["note"] = "experimental discriminator";
    return j;
}

} // namespace cml
