#include "cml/path_problem.hpp"

#include <algorithm>

#include "cml/errors.hpp"

namespace cml {

void PathProblem::validate() const {
    if (sources.empty() || targets.empty())
        throw ConstraintViolation("source and target sets must be nonempty");
    std::vector<int> s = sources, t = targets;
    std::sort(s.begin(), s.end());
    std::sort(t.begin(), t.end());
    std::vector<int> inter;
    std::set_intersection(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(inter));
    if (!inter.empty()) throw ConstraintViolation("source and target sets must be disjoint");
    for (auto& [a, b] : edges)
        if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes)
            throw ConstraintViolation("edge endpoint out of range");
    if (static_cast<int>(node_groups.size()) != num_nodes)
        throw ConstraintViolation("node_groups size must equal num_nodes");
}

NodeGraph PathProblem::to_graph() const {
    validate();
    std::vector<NodeClass> cls(static_cast<size_t>(num_nodes), NodeClass::Free);
    for (int s : sources) cls[static_cast<size_t>(s)] = NodeClass::Source;
    for (int t : targets) cls[static_cast<size_t>(t)] = NodeClass::Target;
    return NodeGraph::build(num_nodes, num_groups, edges, node_groups, cls);
}

EngineReport discrete_modulus(const PathProblem& p, const EngineOptions& opt) {
    return solve_modulus(p.to_graph(), opt);
}

EngineReport brute_force_modulus(const PathProblem& p, long long path_budget, const EngineOptions& opt) {
    return brute_force_modulus(p.to_graph(), path_budget, opt);
}

OraclePath separation_oracle(const PathProblem& p, const std::vector<double>& weights) {
    NodeGraph g = p.to_graph();
    if (g.sources.empty()) return {};
    return oracle_best(g, weights, g.sources.data(), g.sources.data() + g.sources.size());
}

nlohmann::json problem_to_json(const PathProblem& p) {
    nlohmann::json j;
    j["schema"] = "gm-problem/1";
    j["num_nodes"] = p.num_nodes;
    j["num_groups"] = p.num_groups;
    j["edges"] = p.edges;
    j["node_groups"] = p.node_groups;
    j["sources"] = p.sources;
    j["targets"] = p.targets;
    return j;
}

PathProblem problem_from_json(const nlohmann::json& j) {
    PathProblem p;
    p.num_nodes = j.at("num_nodes").get<int>();
    p.num_groups = j.at("num_groups").get<int>();
    for (auto& e : j.at("edges")) p.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    p.node_groups = j.at("node_groups").get<std::vector<std::vector<int>>>();
    p.sources = j.at("sources").get<std::vector<int>>();
    p.targets = j.at("targets").get<std::vector<int>>();
    p.validate();
    return p;
}

nlohmann::json report_to_json(const PathProblem& p, const EngineReport& rep) {
    nlohmann::json j;
    j["schema"] = "gm-report/1";
    j["status"] = to_string(rep.status);
    if (rep.status == SolveStatus::Ok || rep.status == SolveStatus::IterationLimit) {
        j["value"] = rep.value;
        nlohmann::json w = nlohmann::json::array();
        for (int g = 0; g < p.num_groups; ++g)
            w.push_back({{"group", g}, {"weight", rep.rho[static_cast<size_t>(g)]}});
        j["weights"] = std::move(w);
        j["active_paths"] = rep.active_paths;
        j["active_lengths"] = rep.active_lengths;
    }
    j["iterations"] = rep.rounds;
    j["qp_sweeps"] = rep.qp_sweeps;
    j["rows"] = rep.rows;
    j["max_violation"] = rep.max_violation;
    j["wall_ms"] = rep.wall_ms;
    return j;
}

} // namespace cml
