#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cml/carpet_modulus.hpp"

namespace cml {

struct ExperimentConfig {
    CarpetSpec spec;
    int level = 2;
    int max_generation = 2;       // pair pool: both circles of generation <= this
    bool corner_touch = true;
    std::string pair_policy = "all"; // "all" or "o-or-inner" (one circle outer or generation 1)
    double tie_tol = 1e-6;        // relative
    CarpetSolveOptions solve;
    bool parallel_rows = false;
};

struct TableRow {
    int c1 = 0, c2 = 0;          // canonical orbit representative
    std::string name1, name2;
    int orbit_size = 1;
    SolveStatus status = SolveStatus::Ok;
    double value = 0;
    int small_generation = 0;    // generation of the smaller circle
    double chain_bound = 0;      // base value at level k - m + 1 via the subcarpet copy
    bool chain_bound_holds = true;
    double wall_ms = 0;
};

struct SignatureReport {
    double max_value = 0;
    std::vector<std::pair<int, int>> maximizers; // orbit representatives within tie tolerance
    int multiplicity = 0;                        // pairs attaining the maximum (orbit sizes summed)
    double runner_up = 0;                        // best value outside the maximizing orbit set
    double margin = 0;                           // max - runner_up
    int vacuous_rows = 0;                        // reported but unranked
    bool maximizer_is_outer_inner = false;       // the {O, M_i} orbit
};

struct InterchangeReport {
    ExperimentConfig cfg;
    std::vector<TableRow> rows; // canonical order by (c1, c2)
    SignatureReport signature;
    int chain_bound_violations = 0;
    double wall_ms = 0;
};

// Table of mod(Gamma(C, C')) over all selected non-adjacent pair orbits at one
// level, with the subcarpet chain-bound column.
InterchangeReport interchange_table(const ExperimentConfig& cfg);

// Maximizer multiplicity; throws TieAmbiguity when a second orbit lands
// within the tie tolerance of the maximum.
SignatureReport maximizer_signature(const ExperimentConfig& cfg);

struct Fingerprint {
    CarpetSpec spec;
    int level = 0;
    double dimension = 0;           // log(kept) / log(base)
    long long catalog_count = 0;
    double max_value = 0;
    std::vector<double> top_ratios; // top table values divided by the maximum
};

struct FingerprintComparison {
    Fingerprint a, b;
    bool same_dimension = false;
    bool indistinguishable = false; // all observables within tolerance
    double max_rel_gap = 0;
};

Fingerprint fingerprint(const ExperimentConfig& cfg);
FingerprintComparison fingerprint_compare(const CarpetSpec& a, const CarpetSpec& b, int level,
                                          const ExperimentConfig& base_cfg = {});

struct ConvergenceReport {
    CarpetSpec spec;
    std::string pair_name1, pair_name2;
    std::vector<int> levels;
    std::vector<double> values;
    std::vector<SolveStatus> statuses;
    std::vector<double> diffs; // |v_{k+1} - v_k|
};

ConvergenceReport convergence_study(const CarpetSpec& spec, const std::string& c1,
                                    const std::string& c2, int k_min, int k_max,
                                    const CarpetSolveOptions& opt = {});

// CLI-facing exports
std::string interchange_csv(const InterchangeReport& rep);
nlohmann::json interchange_to_json(const InterchangeReport& rep); // schema "exp-report/1"
nlohmann::json convergence_to_json(const ConvergenceReport& rep);
nlohmann::json fingerprint_to_json(const FingerprintComparison& rep);

} // namespace cml
