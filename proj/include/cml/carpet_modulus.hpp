#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cml/carpet_family.hpp"
#include "cml/catalog.hpp"
#include "cml/solver.hpp"

namespace cml {

struct CarpetReport {
    PathFamilySpec fam;
    PairClass pair_class = PairClass::Nonadjacent;
    CanonicalPair canon;       // representative actually solved
    SolveStatus status = SolveStatus::Ok;
    double value = 0;
    std::vector<double> rho;   // per circle id, original labeling; rho[c1] = rho[c2] = 0
    std::vector<double> orbit_rho; // group solves only: one weight per orbit
    std::vector<std::vector<int>> active_paths; // cell sequences of the solved instance
    std::vector<double> active_lengths;
    int rounds = 0;
    long long qp_sweeps = 0;
    long long rows = 0;
    double max_violation = 0;
    double wall_ms = 0;
};

struct CarpetSolveOptions {
    EngineOptions engine;
    bool canonicalize = true; // solve the dihedral-canonical pair and map back
    long long cell_budget = 1LL << 22;
};

// Discrete carpet modulus of the family between fam.c1 and fam.c2, by
// constraint generation over the touch incidence.
CarpetReport carpet_modulus(const PathFamilySpec& fam, const CarpetSolveOptions& opt = {});

// Same value from exhaustive simple-path enumeration; level-1 or tiny
// level-2 windows only.
CarpetReport brute_force_carpet_modulus(const PathFamilySpec& fam, long long path_budget = 2000000,
                                        const CarpetSolveOptions& opt = {});

// Subgroup of the dihedral group given by generators; one QP variable per
// circle orbit. If the orbit of an excluded circle is not a singleton it
// mixes excluded and charged circles, which must be acknowledged explicitly.
struct GroupQuotientSpec {
    std::vector<Dih> generators;
    bool allow_mixed_pair_orbits = false;
};

struct OrbitPartition {
    std::vector<int> orbit_of;             // circle id -> orbit index
    std::vector<std::vector<int>> orbits;  // orbit index -> sorted circle ids
};
OrbitPartition orbit_partition(const CircleCatalog& cat, const std::vector<Dih>& generators);

CarpetReport group_carpet_modulus(const PathFamilySpec& fam, const GroupQuotientSpec& q,
                                  const CarpetSolveOptions& opt = {});

// Exact instance isomorphism between the family inside a copy and the base
// family at the matching level, plus both solves.
struct SelfSimilarityReport {
    bool isomorphic = false;
    int circle = 0;
    int generation = 0;
    int base_level = 0;
    std::string base_pair;   // display name of the matching inner circle
    double value_copy = 0;
    double value_base = 0;
    SolveStatus status_copy = SolveStatus::Ok;
    SolveStatus status_base = SolveStatus::Ok;
    bool values_equal = false; // bitwise
};

SelfSimilarityReport self_similarity_check(const CarpetSpec& spec, int level, int circle_id,
                                           int base_level, const CarpetSolveOptions& opt = {});

// schema "cm-report/1"
nlohmann::json carpet_report_to_json(const CircleCatalog& cat, const CarpetReport& rep,
                                     const std::string& cache_key = "");

} // namespace cml
