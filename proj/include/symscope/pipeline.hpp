#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symscope/action.hpp"
#include "symscope/cnf.hpp"
#include "symscope/decompose.hpp"
#include "symscope/equivalence.hpp"
#include "symscope/oracle.hpp"

namespace symscope {

enum class Stage { Orbits, Decompose, Action, Equiv, RowSym, CheckPartition, Full };

enum class OutputFormat { Text, Json };

struct AnalysisConfig {
    std::string cnf_path;
    std::string gens_path;           // empty: oracle fallback (small instances only)
    std::string partition_path;      // check-partition input
    bool graph_domain = false;       // generator labels are 1-based vertex ids
    bool suggest_partition = false;  // check-partition: also emit the heuristic candidate
    std::uint64_t seed = 1;
    double giant_c = 20.0;
    bool run_oracle = false;
    bool include_timings = false;
    OutputFormat format = OutputFormat::Text;
    oracle::Limits limits;
};

struct FactorReport {
    std::vector<int> literals;             // DIMACS labels
    std::vector<int> clauses;              // clause indices
    std::vector<std::string> generators;   // literal-domain cycle strings
};

struct OrbitActionRow {
    int orbit = -1;
    std::string verdict;   // "natural-symmetric" | "not-symmetric" | "undetermined"
    std::string method;    // "trivial" | "exact-closure" | "parity-filter" | "giant-witness" | "none"
    int witness_cycle_length = 0;
};

struct PartitionCheckReport {
    bool ok = false;
    std::string reason;
    std::vector<int> failing_clause_orbit;  // clause indices, empty if none
};

struct OracleCrossCheck {
    bool orbits_match = false;
    bool decomposition_match = false;
    bool equivalence_match = false;
    bool action_sound = false;
    bool all_ok() const {
        return orbits_match && decomposition_match && equivalence_match && action_sound;
    }
};

struct AnalysisReport {
    int schema_version = 1;
    Stage stage = Stage::Full;
    std::string cnf_path, gens_path;
    std::string generator_source;  // "file" | "oracle-fallback" | "none"
    std::uint64_t seed = 1;
    double giant_c = 20.0;

    int n_vars = 0, n_clauses = 0, vertices = 0;
    std::size_t und_edges = 0, enc_literal = 0, enc_vertex = 0;
    int num_generators = 0;

    std::vector<std::vector<int>> literal_orbits;  // DIMACS labels, orbit-id order
    std::vector<std::vector<int>> clause_orbits;   // clause indices

    std::vector<FactorReport> factors;

    std::vector<OrbitActionRow> action;                  // per literal orbit
    std::vector<std::vector<int>> equivalence_classes;   // literal orbit ids
    std::vector<int> undetermined_equivalence;           // literal orbit ids
    // class indices whose orbits lack a natural-symmetric certificate; their
    // equivalence claims are heuristic (the guarantee covers symmetric orbits)
    std::vector<int> heuristic_equivalence_classes;
    std::vector<std::vector<std::vector<int>>> row_matrices;  // variable matrices

    std::optional<PartitionCheckReport> partition_check;
    std::optional<std::vector<std::vector<int>>> suggested_partition;  // DIMACS labels
    std::optional<OracleCrossCheck> oracle_check;

    std::vector<std::pair<std::string, double>> timings_ms;
};

// Runs the pipeline prefix needed for `stage` on the given config.
AnalysisReport run_pipeline(const AnalysisConfig& config, Stage stage);

std::string report_to_json(const AnalysisReport& r, bool include_timings);
std::string report_to_text(const AnalysisReport& r);

// Partition file: one part per line, signed DIMACS literals, '#' comments.
std::vector<std::vector<int>> read_partition_file(std::istream& in, int n_vars);

} // namespace symscope
