#include "cml/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <random>

#include "cml/errors.hpp"
#include "cml/parallel.hpp"

namespace cml {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Ok: return "ok";
        case SolveStatus::NoPath: return "no_path";
        case SolveStatus::Vacuous: return "vacuous";
        default: return "iteration_limit";
    }
}

NodeGraph NodeGraph::build(int num_nodes, int num_groups,
                           const std::vector<std::pair<int, int>>& undirected_edges,
                           const std::vector<std::vector<int>>& groups_per_node,
                           const std::vector<NodeClass>& classes) {
    NodeGraph g;
    g.num_nodes = num_nodes;
    g.num_groups = num_groups;
    g.num_vars = num_groups;
    g.cls = classes;
    g.var_of_group.resize(static_cast<size_t>(num_groups));
    for (int i = 0; i < num_groups; ++i) g.var_of_group[static_cast<size_t>(i)] = i;

    auto allowed = [&](int u, int v) {
        const NodeClass cu = classes[static_cast<size_t>(u)], cv = classes[static_cast<size_t>(v)];
        if (cu != NodeClass::Source && cu != NodeClass::Free) return false;
        return cv == NodeClass::Free || cv == NodeClass::Target;
    };
    std::vector<std::vector<int>> out(static_cast<size_t>(num_nodes));
    for (auto& [a, b] : undirected_edges) {
        if (allowed(a, b)) out[static_cast<size_t>(a)].push_back(b);
        if (allowed(b, a)) out[static_cast<size_t>(b)].push_back(a);
    }
    g.adj_off.assign(static_cast<size_t>(num_nodes) + 1, 0);
    for (int v = 0; v < num_nodes; ++v) {
        auto& lst = out[static_cast<size_t>(v)];
        std::sort(lst.begin(), lst.end());
        lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
        g.adj_off[static_cast<size_t>(v) + 1] = g.adj_off[static_cast<size_t>(v)] + static_cast<int>(lst.size());
    }
    g.adj.reserve(static_cast<size_t>(g.adj_off.back()));
    for (auto& lst : out) g.adj.insert(g.adj.end(), lst.begin(), lst.end());

    g.grp_off.assign(static_cast<size_t>(num_nodes) + 1, 0);
    for (int v = 0; v < num_nodes; ++v) {
        auto grps = groups_per_node[static_cast<size_t>(v)];
        std::sort(grps.begin(), grps.end());
        grps.erase(std::unique(grps.begin(), grps.end()), grps.end());
        g.grp_off[static_cast<size_t>(v) + 1] = g.grp_off[static_cast<size_t>(v)] + static_cast<int>(grps.size());
        g.grp.insert(g.grp.end(), grps.begin(), grps.end());
    }
    for (int v = 0; v < num_nodes; ++v) {
        if (classes[static_cast<size_t>(v)] == NodeClass::Source) g.sources.push_back(v);
        if (classes[static_cast<size_t>(v)] == NodeClass::Target) g.targets.push_back(v);
    }
    return g;
}

namespace {

double node_charge(const NodeGraph& g, const std::vector<double>& w, int v) {
    auto [b, e] = g.groups_of(v);
    double s = 0;
    for (const int* it = b; it != e; ++it) s += w[static_cast<size_t>(*it)];
    return s;
}

// weight of entering v from u: groups of v not already carried by u
double step_weight(const NodeGraph& g, const std::vector<double>& w, int u, int v) {
    auto [ub, ue] = g.groups_of(u);
    auto [vb, ve] = g.groups_of(v);
    double s = 0;
    const int* ui = ub;
    for (const int* vi = vb; vi != ve; ++vi) {
        while (ui != ue && *ui < *vi) ++ui;
        if (ui == ue || *ui != *vi) s += w[static_cast<size_t>(*vi)];
    }
    return s;
}

} // namespace

double run_charged_length(const NodeGraph& g, const std::vector<double>& w, const std::vector<int>& nodes) {
    if (nodes.empty()) return 0;
    double s = node_charge(g, w, nodes[0]);
    for (size_t t = 1; t < nodes.size(); ++t) s += step_weight(g, w, nodes[t - 1], nodes[t]);
    return s;
}

std::vector<int> path_row(const NodeGraph& g, const std::vector<int>& nodes) {
    std::vector<int> row;
    for (int v : nodes) {
        auto [b, e] = g.groups_of(v);
        row.insert(row.end(), b, e);
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    return row;
}

OraclePath oracle_best(const NodeGraph& g, const std::vector<double>& w,
                       const int* src_begin, const int* src_end) {
    // Two layers per node: whether the walk has met any group yet. Walks that
    // never meet a group sit below the truncation resolution and are not part
    // of the family, so only layer-1 target states count.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const size_t S = static_cast<size_t>(g.num_nodes) * 2;
    std::vector<double> dist(S, kInf);
    std::vector<int> parent(S, -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

    auto has_groups = [&](int v) {
        return g.grp_off[static_cast<size_t>(v) + 1] > g.grp_off[static_cast<size_t>(v)];
    };
    for (const int* s = src_begin; s != src_end; ++s) {
        const double d = node_charge(g, w, *s);
        const int st = *s * 2 + (has_groups(*s) ? 1 : 0);
        if (d < dist[static_cast<size_t>(st)]) {
            dist[static_cast<size_t>(st)] = d;
            heap.push({d, st});
        }
    }
    while (!heap.empty()) {
        auto [d, st] = heap.top();
        heap.pop();
        if (d > dist[static_cast<size_t>(st)]) continue;
        const int u = st / 2, f = st & 1;
        if (g.cls[static_cast<size_t>(u)] == NodeClass::Target) continue;
        for (int k = g.adj_off[static_cast<size_t>(u)]; k < g.adj_off[static_cast<size_t>(u) + 1]; ++k) {
            const int v = g.adj[static_cast<size_t>(k)];
            const int nf = (f || has_groups(v)) ? 1 : 0;
            const int nst = v * 2 + nf;
            const double nd = d + step_weight(g, w, u, v);
            if (nd < dist[static_cast<size_t>(nst)]) {
                dist[static_cast<size_t>(nst)] = nd;
                parent[static_cast<size_t>(nst)] = st;
                heap.push({nd, nst});
            }
        }
    }
    OraclePath out;
    int best = -1;
    for (int t : g.targets) {
        const int st = t * 2 + 1;
        if (dist[static_cast<size_t>(st)] == kInf) continue;
        if (best < 0 || dist[static_cast<size_t>(st)] < dist[static_cast<size_t>(best)]) best = st;
    }
    if (best < 0) return out;
    out.found = true;
    out.cost = dist[static_cast<size_t>(best)];
    for (int st = best; st != -1; st = parent[static_cast<size_t>(st)]) out.nodes.push_back(st / 2);
    std::reverse(out.nodes.begin(), out.nodes.end());
    return out;
}

std::vector<OraclePath> oracle_harvest(const NodeGraph& g, const std::vector<double>& w,
                                       const int* src_begin, const int* src_end, int max_paths,
                                       double cost_cap) {
    // Same search as oracle_best, but keeps up to max_paths target paths with
    // cost below the cap, ordered by (cost, target id).
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const size_t S = static_cast<size_t>(g.num_nodes) * 2;
    std::vector<double> dist(S, kInf);
    std::vector<int> parent(S, -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

    auto has_groups = [&](int v) {
        return g.grp_off[static_cast<size_t>(v) + 1] > g.grp_off[static_cast<size_t>(v)];
    };
    for (const int* s = src_begin; s != src_end; ++s) {
        const double d = node_charge(g, w, *s);
        const int st = *s * 2 + (has_groups(*s) ? 1 : 0);
        if (d < dist[static_cast<size_t>(st)]) {
            dist[static_cast<size_t>(st)] = d;
            heap.push({d, st});
        }
    }
    while (!heap.empty()) {
        auto [d, st] = heap.top();
        heap.pop();
        if (d > dist[static_cast<size_t>(st)]) continue;
        const int u = st / 2, f = st & 1;
        if (g.cls[static_cast<size_t>(u)] == NodeClass::Target) continue;
        for (int k = g.adj_off[static_cast<size_t>(u)]; k < g.adj_off[static_cast<size_t>(u) + 1]; ++k) {
            const int v = g.adj[static_cast<size_t>(k)];
            const int nf = (f || has_groups(v)) ? 1 : 0;
            const int nst = v * 2 + nf;
            const double nd = d + step_weight(g, w, u, v);
            if (nd < dist[static_cast<size_t>(nst)]) {
                dist[static_cast<size_t>(nst)] = nd;
                parent[static_cast<size_t>(nst)] = st;
                heap.push({nd, nst});
            }
        }
    }
    std::vector<std::pair<double, int>> hits;
    for (int t : g.targets) {
        const int st = t * 2 + 1;
        if (dist[static_cast<size_t>(st)] < cost_cap) hits.push_back({dist[static_cast<size_t>(st)], st});
    }
    std::sort(hits.begin(), hits.end());
    if (static_cast<int>(hits.size()) > max_paths) hits.resize(static_cast<size_t>(max_paths));
    std::vector<OraclePath> out;
    for (auto [d, st0] : hits) {
        OraclePath p;
        p.found = true;
        p.cost = d;
        for (int st = st0; st != -1; st = parent[static_cast<size_t>(st)]) p.nodes.push_back(st / 2);
        std::reverse(p.nodes.begin(), p.nodes.end());
        out.push_back(std::move(p));
    }
    return out;
}

bool any_source_target_walk(const NodeGraph& g) {
    std::vector<uint8_t> seen(static_cast<size_t>(g.num_nodes), 0);
    std::vector<int> stack;
    for (int s : g.sources) {
        seen[static_cast<size_t>(s)] = 1;
        stack.push_back(s);
    }
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        if (g.cls[static_cast<size_t>(u)] == NodeClass::Target) return true;
        for (int k = g.adj_off[static_cast<size_t>(u)]; k < g.adj_off[static_cast<size_t>(u) + 1]; ++k) {
            const int v = g.adj[static_cast<size_t>(k)];
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = 1;
                stack.push_back(v);
            }
        }
    }
    return false;
}

namespace {

std::vector<std::pair<const int*, const int*>> source_chunks(const NodeGraph& g, int chunks) {
    std::vector<std::pair<const int*, const int*>> out;
    const int ns = static_cast<int>(g.sources.size());
    if (ns == 0) return out;
    const int c = std::max(1, std::min(chunks, ns));
    const int per = (ns + c - 1) / c;
    for (int i = 0; i < ns; i += per)
        out.push_back({g.sources.data() + i, g.sources.data() + std::min(ns, i + per)});
    return out;
}

QpRow make_row(const NodeGraph& g, const std::vector<int>& row_groups) {
    std::map<int, int> coeff;
    for (int grp : row_groups) coeff[g.var_of_group[static_cast<size_t>(grp)]] += 1;
    QpRow row;
    row.terms.assign(coeff.begin(), coeff.end());
    return row;
}

} // namespace

EngineReport solve_modulus(const NodeGraph& g, const EngineOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    EngineReport rep;
    auto finish = [&](EngineReport& r) -> EngineReport& {
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return r;
    };

    if (g.sources.empty() || g.targets.empty()) {
        rep.status = SolveStatus::NoPath;
        return finish(rep);
    }
    // a charged source-to-target walk must exist; connectivity alone is the
    // vacuous case (every walk sits below the truncation resolution)
    {
        std::vector<double> ones(static_cast<size_t>(g.num_groups), 1.0);
        OraclePath probe = oracle_best(g, ones, g.sources.data(), g.sources.data() + g.sources.size());
        if (!probe.found) {
            rep.status = any_source_target_walk(g) ? SolveStatus::Vacuous : SolveStatus::NoPath;
            return finish(rep);
        }
    }

    QpSolver qp(g.num_vars);
    QpOptions qopt_fine;
    qopt_fine.max_sweeps = opt.qp_max_sweeps;
    // while cutting, a coarse inner solve is enough to steer the oracle; the
    // final weights get a full-precision polish before convergence is declared
    QpOptions qopt_coarse = qopt_fine;
    qopt_coarse.tol_gap = 1e-5;
    qopt_coarse.tol_feas = 1e-7;
    std::mt19937_64 rng(opt.warm_seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::map<std::vector<int>, int> row_index;
    std::vector<std::vector<int>> row_paths;
    std::vector<double> weights(static_cast<size_t>(g.num_groups), 0.0);
    auto chunks = source_chunks(g, opt.chunks);
    std::vector<std::vector<OraclePath>> found(chunks.size());

    double min_cost = 0;
    bool polished = false;
    int stalls = 0;
    while (true) {
        for (int gi = 0; gi < g.num_groups; ++gi)
            weights[static_cast<size_t>(gi)] = qp.x()[static_cast<size_t>(g.var_of_group[static_cast<size_t>(gi)])];

        parallel_for(static_cast<long long>(chunks.size()), opt.parallel, [&](long long c) {
            found[static_cast<size_t>(c)] =
                oracle_harvest(g, weights, chunks[static_cast<size_t>(c)].first,
                               chunks[static_cast<size_t>(c)].second, opt.cuts_per_chunk,
                               std::numeric_limits<double>::infinity());
        });
        min_cost = std::numeric_limits<double>::infinity();
        for (auto& fs : found)
            if (!fs.empty()) min_cost = std::min(min_cost, fs.front().cost);
        if (min_cost >= 1.0 - opt.tol_feas) {
            if (polished) break;
            QpResult qres = qp.solve(qopt_fine);
            rep.qp_sweeps += qres.sweeps;
            polished = true;
            continue; // re-run the oracle on the polished weights
        }
        polished = false;

        int added = 0;
        for (auto& fs : found) {
            for (auto& f : fs) {
                if (f.cost >= 1.0 - opt.tol_feas) break; // entries are cost-sorted
                std::vector<int> row = path_row(g, f.nodes);
                auto [it, fresh] = row_index.try_emplace(row, static_cast<int>(row_paths.size()));
                if (!fresh) continue;
                row_paths.push_back(f.nodes);
                const double lam0 = opt.warm_seed ? uni(rng) : 0.0;
                qp.add_row(make_row(g, row), lam0);
                ++added;
            }
        }
        if (added == 0) {
            // every violated walk's row is already pooled: the coarse inner
            // solve left residual violations, so tighten instead of cutting
            if (++stalls >= 3) {
                rep.status = SolveStatus::IterationLimit;
                break;
            }
            QpResult qres = qp.solve(qopt_fine);
            rep.qp_sweeps += qres.sweeps;
            polished = true;
            continue;
        }
        stalls = 0;
        QpResult qres = qp.solve(qopt_coarse);
        rep.qp_sweeps += qres.sweeps;
        ++rep.rounds;
        if (rep.rounds >= opt.max_rounds) {
            rep.status = SolveStatus::IterationLimit;
            break;
        }
    }

    rep.rows = qp.num_rows();
    rep.value = qp.objective();
    rep.vars = qp.x();
    rep.rho.assign(static_cast<size_t>(g.num_groups), 0.0);
    for (int gi = 0; gi < g.num_groups; ++gi)
        rep.rho[static_cast<size_t>(gi)] = qp.x()[static_cast<size_t>(g.var_of_group[static_cast<size_t>(gi)])];
    rep.max_violation = std::max(0.0, 1.0 - min_cost);
    for (size_t r = 0; r < row_paths.size() && static_cast<int>(rep.active_paths.size()) < opt.max_active_report; ++r) {
        const double len = qp.row_value(static_cast<int>(r));
        if (len <= 1.0 + 1e-6) {
            rep.active_paths.push_back(row_paths[r]);
            rep.active_lengths.push_back(len);
        }
    }
    return finish(rep);
}

namespace {

// The family enumerated here matches the oracle: walks that are simple over
// (node, met-anything-flag) states. Any charged walk reduces to one of these
// by state-cycle removal without growing its row, so the modulus agrees.
struct BruteEnum {
    const NodeGraph& g;
    long long budget;
    long long count_any = 0;   // walks reaching a target, charged or not
    long long count_charged = 0;
    std::vector<int> stack;
    std::vector<uint8_t> visited; // per state
    std::map<std::vector<int>, std::vector<int>>& rows;

    bool has_groups(int v) const {
        return g.grp_off[static_cast<size_t>(v) + 1] > g.grp_off[static_cast<size_t>(v)];
    }

    void walk(int u, int f) {
        for (int k = g.adj_off[static_cast<size_t>(u)]; k < g.adj_off[static_cast<size_t>(u) + 1]; ++k) {
            const int v = g.adj[static_cast<size_t>(k)];
            const int nf = (f || has_groups(v)) ? 1 : 0;
            const int st = v * 2 + nf;
            if (visited[static_cast<size_t>(st)]) continue;
            stack.push_back(v);
            if (g.cls[static_cast<size_t>(v)] == NodeClass::Target) {
                if (++count_any > budget)
                    throw BudgetExceeded("path enumeration exceeded budget", count_any);
                if (nf) {
                    ++count_charged;
                    std::vector<int> row = path_row(g, stack);
                    rows.try_emplace(std::move(row), stack);
                }
            } else {
                visited[static_cast<size_t>(st)] = 1;
                walk(v, nf);
                visited[static_cast<size_t>(st)] = 0;
            }
            stack.pop_back();
        }
    }
};

} // namespace

EnumeratedFamily enumerate_family(const NodeGraph& g, long long budget) {
    std::map<std::vector<int>, std::vector<int>> rows;
    BruteEnum be{g, budget, 0, 0, {}, {}, rows};
    be.visited.assign(static_cast<size_t>(g.num_nodes) * 2, 0);
    for (int s : g.sources) {
        const int f0 = be.has_groups(s) ? 1 : 0;
        be.stack = {s};
        be.visited.assign(be.visited.size(), 0);
        be.visited[static_cast<size_t>(s * 2 + f0)] = 1;
        be.walk(s, f0);
    }
    EnumeratedFamily fam;
    fam.walks = be.count_any;
    fam.rows.assign(rows.begin(), rows.end());
    return fam;
}

EngineReport brute_force_modulus(const NodeGraph& g, long long path_budget, const EngineOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    EngineReport rep;
    auto finish = [&](EngineReport& r) -> EngineReport& {
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return r;
    };

    EnumeratedFamily fam = enumerate_family(g, path_budget);
    std::vector<std::pair<std::vector<int>, std::vector<int>>>& all_rows = fam.rows;
    if (fam.walks == 0) {
        rep.status = SolveStatus::NoPath;
        return finish(rep);
    }
    if (all_rows.empty()) {
        rep.status = SolveStatus::Vacuous; // every walk sits below the truncation resolution
        return finish(rep);
    }

    // drop rows that contain another row: subset constraints are stronger
    std::vector<std::pair<std::vector<int>, std::vector<int>>> kept;
    for (size_t i = 0; i < all_rows.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < all_rows.size() && !dominated; ++j)
            if (j != i && all_rows[j].first.size() < all_rows[i].first.size() &&
                std::includes(all_rows[i].first.begin(), all_rows[i].first.end(), all_rows[j].first.begin(),
                              all_rows[j].first.end()))
                dominated = true;
        if (!dominated) kept.push_back(all_rows[i]);
    }

    QpSolver qp(g.num_vars);
    for (auto& [row, path] : kept) qp.add_row(make_row(g, row));
    QpOptions qopt;
    qopt.max_sweeps = opt.qp_max_sweeps;
    QpResult qres = qp.solve(qopt);
    rep.qp_sweeps = qres.sweeps;
    if (!qres.converged) rep.status = SolveStatus::IterationLimit;

    rep.rows = qp.num_rows();
    rep.value = qp.objective();
    rep.vars = qp.x();
    rep.rho.assign(static_cast<size_t>(g.num_groups), 0.0);
    for (int gi = 0; gi < g.num_groups; ++gi)
        rep.rho[static_cast<size_t>(gi)] = qp.x()[static_cast<size_t>(g.var_of_group[static_cast<size_t>(gi)])];
    rep.max_violation = qres.max_violation;
    int idx = 0;
    for (auto& [row, path] : kept) {
        if (static_cast<int>(rep.active_paths.size()) >= opt.max_active_report) break;
        const double len = qp.row_value(idx);
        if (len <= 1.0 + 1e-6) {
            rep.active_paths.push_back(path);
            rep.active_lengths.push_back(len);
        }
        ++idx;
    }
    rep.rounds = 1;
    return finish(rep);
}

} // namespace cml
