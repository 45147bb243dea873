#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cml/qp.hpp"

namespace cml {

enum class NodeClass : uint8_t { Unusable, Source, Free, Target };

// Directed traversal graph shared by the generic graph modulus and the carpet
// families. Paths start at a Source node, pass through Free nodes only, and
// stop at the first Target node; every node charges its group set, once per
// maximal contiguous run.
struct NodeGraph {
    int num_nodes = 0;
    int num_groups = 0;
    int num_vars = 0;
    std::vector<int> adj_off, adj; // CSR over allowed transitions
    std::vector<int> grp_off, grp; // sorted group ids per node
    std::vector<NodeClass> cls;
    std::vector<int> var_of_group; // QP variable per group (identity unless quotiented)
    std::vector<int> sources, targets;

    static NodeGraph build(int num_nodes, int num_groups,
                           const std::vector<std::pair<int, int>>& undirected_edges,
                           const std::vector<std::vector<int>>& groups_per_node,
                           const std::vector<NodeClass>& classes);

    std::pair<const int*, const int*> groups_of(int v) const {
        return {grp.data() + grp_off[static_cast<size_t>(v)], grp.data() + grp_off[static_cast<size_t>(v) + 1]};
    }
};

enum class SolveStatus { Ok, NoPath, Vacuous, IterationLimit };

std::string to_string(SolveStatus s);

struct OraclePath {
    bool found = false;
    double cost = 0; // run-charged length
    std::vector<int> nodes;
};

struct EngineOptions {
    double tol_feas = 1e-9;
    double tol_obj = 1e-10;
    int max_rounds = 20000;
    int chunks = 4;          // independent oracle searches per round
    int cuts_per_chunk = 8;  // violated rows harvested per search
    bool parallel = false;
    uint64_t warm_seed = 0; // 0 = deterministic cold start
    long long qp_max_sweeps = 200000;
    int max_active_report = 32;
};

struct EngineReport {
    SolveStatus status = SolveStatus::Ok;
    double value = 0;               // sum of squared weights (lower bound on exit if IterationLimit)
    std::vector<double> rho;        // per group
    std::vector<double> vars;       // per QP variable
    std::vector<std::vector<int>> active_paths;
    std::vector<double> active_lengths;
    int rounds = 0;
    long long qp_sweeps = 0;
    long long rows = 0;
    double max_violation = 0;       // 1 - min oracle length at exit, clamped at 0
    double wall_ms = 0;
};

// Shortest source-to-target walk that meets at least one group, under
// run-charged node-group weights. Walks meeting no group are below the
// truncation resolution and excluded from the family. Deterministic: heap
// ordered by (dist, state), first-improvement parents.
OraclePath oracle_best(const NodeGraph& g, const std::vector<double>& group_weights,
                       const int* src_begin, const int* src_end);

// Up to max_paths charged walks with cost below cost_cap, ordered by
// (cost, target id); the first entry carries the minimum cost.
std::vector<OraclePath> oracle_harvest(const NodeGraph& g, const std::vector<double>& group_weights,
                                       const int* src_begin, const int* src_end, int max_paths,
                                       double cost_cap);

// Plain reachability from sources to targets, groups ignored.
bool any_source_target_walk(const NodeGraph& g);

// Run-charged length of a concrete path under the weights.
double run_charged_length(const NodeGraph& g, const std::vector<double>& group_weights,
                          const std::vector<int>& nodes);

// Distinct groups met by a path, sorted.
std::vector<int> path_row(const NodeGraph& g, const std::vector<int>& nodes);

// Constraint-generation solve of min sum rho^2 over the path family.
EngineReport solve_modulus(const NodeGraph& g, const EngineOptions& opt);

// Every distinct constraint row of the family (walks simple over
// (node, met-anything) states), with one representative walk each.
struct EnumeratedFamily {
    long long walks = 0; // target-reaching walks seen, charged or not
    std::vector<std::pair<std::vector<int>, std::vector<int>>> rows; // (row, walk)
};
EnumeratedFamily enumerate_family(const NodeGraph& g, long long budget);

// Exhaustive enumeration + one full QP. Throws BudgetExceeded.
EngineReport brute_force_modulus(const NodeGraph& g, long long path_budget, const EngineOptions& opt);

} // namespace cml
