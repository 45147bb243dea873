#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cml/solver.hpp"

namespace cml {

// Node-weighted path family on an abstract graph: paths run from a source
// node to a target node through interior nodes, and charge each weight group
// they meet. Sources appear only as first node, targets only as last.
struct PathProblem {
    int num_nodes = 0;
    int num_groups = 0;
    std::vector<std::pair<int, int>> edges;   // undirected
    std::vector<std::vector<int>> node_groups; // per node, may be empty
    std::vector<int> sources, targets;

    NodeGraph to_graph() const;
    void validate() const;
};

EngineReport discrete_modulus(const PathProblem& p, const EngineOptions& opt = {});
EngineReport brute_force_modulus(const PathProblem& p, long long path_budget, const EngineOptions& opt = {});

// Minimizing path under run-charging for explicit weights.
OraclePath separation_oracle(const PathProblem& p, const std::vector<double>& weights);

nlohmann::json problem_to_json(const PathProblem& p);
PathProblem problem_from_json(const nlohmann::json& j);

// schema "gm-report/1"
nlohmann::json report_to_json(const PathProblem& p, const EngineReport& rep);

} // namespace cml
