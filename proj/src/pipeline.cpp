#include "symscope/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "symscope/errors.hpp"

namespace symscope {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return in;
}

const char* verdict_name(ActionVerdict v) {
    switch (v) {
        case ActionVerdict::NaturalSymmetric: return "natural-symmetric";
        case ActionVerdict::NotSymmetric: return "not-symmetric";
        default: return "undetermined";
    }
}

const char* method_name(ActionMethod m) {
    switch (m) {
        case ActionMethod::TrivialOrbit: return "trivial";
        case ActionMethod::ExactClosure: return "exact-closure";
        case ActionMethod::ParityFilter: return "parity-filter";
        case ActionMethod::GiantWitness: return "giant-witness";
        default: return "none";
    }
}

std::vector<int> to_dimacs(const std::vector<int>& lit_indices) {
    std::vector<int> out;
    out.reserve(lit_indices.size());
    for (int l : lit_indices) out.push_back(dimacs_lit(l));
    return out;
}

Partition literal_orbit_partition(const Partition& vertex_orbits, int n_lits) {
    std::vector<int> cls(vertex_orbits.class_of.begin(),
                         vertex_orbits.class_of.begin() + n_lits);
    return Partition::from_class_of(std::move(cls));
}

} // namespace

std::vector<std::vector<int>> read_partition_file(std::istream& in, int n_vars) {
    std::vector<std::vector<int>> parts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<int> part;
        long long lit;
        while (ls >> lit) {
            long long v = lit > 0 ? lit : -lit;
            if (v < 1 || v > n_vars)
                throw ParseError("partition literal out of range", line_no);
            part.push_back(lit_index(static_cast<int>(lit)));
        }
        if (!ls.eof()) throw ParseError("bad token in partition file", line_no);
        if (!part.empty()) parts.push_back(std::move(part));
    }
    return parts;
}

AnalysisReport run_pipeline(const AnalysisConfig& config, Stage stage) {
    AnalysisReport rep;
    rep.stage = stage;
    rep.cnf_path = config.cnf_path;
    rep.gens_path = config.gens_path;
    rep.seed = config.seed;
    rep.giant_c = config.giant_c;

    auto t_total = Clock::now();
    auto timed = [&](const char* name, auto&& fn) {
        auto t0 = Clock::now();
        fn();
        rep.timings_ms.emplace_back(name, ms_since(t0));
    };

    // --- parse and model graph ---
    CnfFormula f;
    timed("parse", [&] {
        auto in = open_or_throw(config.cnf_path);
        f = parse_dimacs(in);
    });
    ModelGraph m;
    timed("model_graph", [&] { m = model_graph(f); });
    rep.n_vars = f.n_vars;
    rep.n_clauses = static_cast<int>(f.clauses.size());
    rep.vertices = m.graph.n;
    rep.und_edges = m.graph.num_undirected_edges();

    // --- generators: literal and vertex domains ---
    GeneratingSet lit_gens(2 * f.n_vars, {});
    GeneratingSet vertex_gens(m.graph.n, {});
    timed("generators", [&] {
        if (!config.gens_path.empty()) {
            auto in = open_or_throw(config.gens_path);
            if (config.graph_domain) {
                vertex_gens = read_vertex_generator_file(in, m.graph.n);
                std::vector<Permutation> projected;
                for (auto& g : vertex_gens.gens) {
                    if (!is_automorphism(m.graph, g))
                        throw ContractError("generator is not an automorphism of the model "
                                            "graph; (G,S) is not a joint pair");
                    projected.push_back(project_vertex_perm(m, g));
                }
                lit_gens = GeneratingSet(2 * f.n_vars, std::move(projected));
            } else {
                lit_gens = read_generator_file(in, f.n_vars);
                std::vector<Permutation> lifted;
                for (auto& g : lit_gens.gens) lifted.push_back(lift_literal_perm(m, g));
                vertex_gens = GeneratingSet(m.graph.n, std::move(lifted));
            }
            rep.generator_source = "file";
        } else {
            oracle::ElementSet autos = oracle::enumerate_automorphisms(m.graph, config.limits);
            std::vector<Permutation> vg, lg;
            for (auto& a : autos.elems) {
                if (a.is_identity()) continue;
                vg.push_back(a);
                lg.push_back(project_vertex_perm(m, a));
            }
            vertex_gens = GeneratingSet(m.graph.n, std::move(vg));
            lit_gens = GeneratingSet(2 * f.n_vars, std::move(lg));
            rep.generator_source = "oracle-fallback";
        }
    });
    rep.num_generators = static_cast<int>(lit_gens.gens.size());
    rep.enc_literal = lit_gens.encoding_size();
    rep.enc_vertex = vertex_gens.encoding_size();

    // --- orbits ---
    Partition vertex_orbits, lit_orbits;
    timed("orbits", [&] {
        vertex_orbits = orbits(vertex_gens);
        lit_orbits = literal_orbit_partition(vertex_orbits, 2 * f.n_vars);
    });
    for (auto& cls : lit_orbits.classes) rep.literal_orbits.push_back(to_dimacs(cls));
    for (auto& cls : vertex_orbits.classes) {
        if (m.is_literal_vertex(cls.front())) continue;
        std::vector<int> clause_ids;
        for (int v : cls) clause_ids.push_back(v - 2 * f.n_vars);
        rep.clause_orbits.push_back(std::move(clause_ids));
    }

    // --- check-partition short-circuit ---
    if (stage == Stage::CheckPartition) {
        if (!config.partition_path.empty()) {
            auto in = open_or_throw(config.partition_path);
            auto parts = read_partition_file(in, f.n_vars);
            PartitionCheck check = check_literal_partition(f, m, vertex_orbits, parts);
            PartitionCheckReport pr;
            pr.ok = check.ok;
            pr.reason = check.reason;
            if (check.failing_clause_orbit >= 0)
                for (int v : vertex_orbits.classes[check.failing_clause_orbit])
                    pr.failing_clause_orbit.push_back(v - 2 * f.n_vars);
            rep.partition_check = pr;
        }
        if (config.suggest_partition) {
            auto parts = suggest_literal_partition(f, m, vertex_orbits);
            std::vector<std::vector<int>> out;
            for (auto& p : parts) out.push_back(to_dimacs(p));
            rep.suggested_partition = out;
        }
        if (config.partition_path.empty() && !config.suggest_partition)
            throw ContractError("check-partition needs a partition file or --suggest");
        rep.timings_ms.emplace_back("total", ms_since(t_total));
        return rep;
    }
    if (stage == Stage::Orbits) {
        rep.timings_ms.emplace_back("total", ms_since(t_total));
        return rep;
    }

    // --- decomposition ---
    Decomposition dec;
    timed("decomposition", [&] {
        dec = finest_decomposition(m.graph, vertex_gens, vertex_orbits);
        if (!dec.split_violations.empty())
            throw ContractError("split generator fails the automorphism test; (G,S) is not "
                                "a joint pair or the orbit partition is wrong");
        std::vector<int> factor_of_point(m.graph.n);
        for (int v = 0; v < m.graph.n; ++v)
            factor_of_point[v] = dec.factor_of_orbit[vertex_orbits.class_of[v]];
        rep.factors.resize(dec.factors.size());
        for (std::size_t i = 0; i < dec.factors.size(); ++i) {
            for (int v : dec.factors[i].support) {
                if (m.is_literal_vertex(v))
                    rep.factors[i].literals.push_back(dimacs_lit(v));
                else
                    rep.factors[i].clauses.push_back(v - 2 * f.n_vars);
            }
        }
        for (auto& g : dec.separable.gens) {
            int fi = factor_of_point[g.moved().front().first];
            rep.factors[fi].generators.push_back(
                format_literal_cycles(project_vertex_perm(m, g)));
        }
    });
    if (stage == Stage::Decompose) {
        rep.timings_ms.emplace_back("total", ms_since(t_total));
        return rep;
    }

    // --- symmetric action ---
    RandomElementSource source(lit_gens, config.seed);
    ActionReport action;
    timed("action", [&] {
        action = symmetric_action_orbits(lit_gens, lit_orbits, config.giant_c, source);
        for (auto& act : action.orbits) {
            OrbitActionRow row;
            row.orbit = act.orbit;
            row.verdict = verdict_name(act.verdict);
            row.method = method_name(act.method);
            row.witness_cycle_length = act.witness_cycle_length;
            rep.action.push_back(std::move(row));
        }
    });
    if (stage == Stage::Action) {
        rep.timings_ms.emplace_back("total", ms_since(t_total));
        return rep;
    }

    // --- equivalent orbits ---
    EquivalenceResult eq;
    timed("equivalence", [&] {
        std::vector<std::optional<CanonicalCycle>> canon(lit_orbits.num_classes());
        for (int o = 0; o < static_cast<int>(lit_orbits.num_classes()); ++o) {
            if (lit_orbits.classes[o].size() < 2) continue;
            auto unique = harvest_unique_cycle(lit_gens, lit_orbits.classes[o], source);
            if (unique) canon[o] = canonical_cycle(lit_gens, lit_orbits.classes[o], *unique, o);
        }
        eq = equivalent_orbits(lit_gens, lit_orbits, canon);
        rep.equivalence_classes = eq.orbit_classes.classes;
        rep.undetermined_equivalence = eq.undetermined_orbits;
        for (std::size_t c = 0; c < eq.orbit_classes.classes.size(); ++c) {
            bool certified = true;
            for (int o : eq.orbit_classes.classes[c])
                if (action.orbits[o].verdict != ActionVerdict::NaturalSymmetric)
                    certified = false;
            if (!certified && eq.orbit_classes.classes[c].size() > 1)
                rep.heuristic_equivalence_classes.push_back(static_cast<int>(c));
        }
    });
    if (stage == Stage::Equiv) {
        rep.timings_ms.emplace_back("total", ms_since(t_total));
        return rep;
    }

    // --- row interchangeability ---
    timed("row_interchangeability", [&] {
        rep.row_matrices = row_interchangeability_groups(f, m, action, eq);
    });

    // --- oracle cross-check ---
    if (config.run_oracle) {
        timed("oracle", [&] {
            OracleCrossCheck cross;
            oracle::ElementSet autos = oracle::enumerate_automorphisms(m.graph, config.limits);
            std::vector<int> cls(m.graph.n);
            for (int v = 0; v < m.graph.n; ++v) cls[v] = v;
            for (auto& a : autos.elems)
                for (auto& [x, y] : a.moved()) {
                    int rx = cls[x], ry = cls[y];
                    if (rx != ry)
                        for (int& c : cls)
                            if (c == ry) c = rx;
                }
            cross.orbits_match = Partition::from_class_of(cls) == vertex_orbits;

            auto brute_dec = oracle::brute_finest_decomposition(vertex_gens, vertex_orbits,
                                                                config.limits);
            std::vector<std::vector<int>> mine;
            for (auto& fac : dec.factors) mine.push_back(fac.orbit_ids);
            std::sort(mine.begin(), mine.end());
            cross.decomposition_match = mine == brute_dec;

            auto brute_eq = oracle::brute_equivalent_orbits(lit_gens, lit_orbits, config.limits);
            cross.equivalence_match =
                eq.undetermined_orbits.empty() && brute_eq.classes == eq.orbit_classes.classes;

            cross.action_sound = validate_action_report(lit_gens, lit_orbits, action);
            rep.oracle_check = cross;
        });
    }
    rep.timings_ms.emplace_back("total", ms_since(t_total));
    return rep;
}

namespace {

nlohmann::json matrix_json(const std::vector<std::vector<int>>& rows) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& row : rows) a.push_back(row);
    return a;
}

} // namespace

std::string report_to_json(const AnalysisReport& r, bool include_timings) {
    nlohmann::json j;
    j["schema_version"] = r.schema_version;
    j["config"] = {{"cnf", r.cnf_path},
                   {"gens", r.gens_path},
                   {"generator_source", r.generator_source},
                   {"seed", r.seed},
                   {"giant_c", r.giant_c}};
    j["sizes"] = {{"n_vars", r.n_vars},
                  {"n_clauses", r.n_clauses},
                  {"vertices", r.vertices},
                  {"und_edges", r.und_edges},
                  {"enc_literal", r.enc_literal},
                  {"enc_vertex", r.enc_vertex},
                  {"num_generators", r.num_generators}};
    j["orbits"] = {{"literal", matrix_json(r.literal_orbits)},
                   {"clause", matrix_json(r.clause_orbits)}};

    bool has = r.stage != Stage::Orbits && r.stage != Stage::CheckPartition;
    if (has) {
        nlohmann::json fs = nlohmann::json::array();
        for (auto& fac : r.factors)
            fs.push_back({{"literals", fac.literals},
                          {"clauses", fac.clauses},
                          {"generators", fac.generators}});
        j["decomposition"] = {{"factor_count", r.factors.size()}, {"factors", fs}};
    }
    if (has && r.stage != Stage::Decompose) {
        nlohmann::json acts = nlohmann::json::array();
        for (auto& a : r.action)
            acts.push_back({{"orbit", a.orbit},
                            {"verdict", a.verdict},
                            {"method", a.method},
                            {"witness_cycle_length", a.witness_cycle_length}});
        j["action"] = acts;
    }
    if (has && r.stage != Stage::Decompose && r.stage != Stage::Action) {
        j["equivalence"] = {{"classes", matrix_json(r.equivalence_classes)},
                            {"undetermined", r.undetermined_equivalence},
                            {"heuristic_classes", r.heuristic_equivalence_classes}};
    }
    if (r.stage == Stage::RowSym || r.stage == Stage::Full) {
        nlohmann::json ms = nlohmann::json::array();
        for (auto& mat : r.row_matrices) ms.push_back(matrix_json(mat));
        j["row_matrices"] = ms;
    }
    if (r.partition_check) {
        j["partition_check"] = {{"ok", r.partition_check->ok},
                                {"reason", r.partition_check->reason},
                                {"failing_clause_orbit", r.partition_check->failing_clause_orbit}};
    }
    if (r.suggested_partition) j["suggested_partition"] = matrix_json(*r.suggested_partition);
    if (r.oracle_check) {
        j["oracle"] = {{"orbits_match", r.oracle_check->orbits_match},
                       {"decomposition_match", r.oracle_check->decomposition_match},
                       {"equivalence_match", r.oracle_check->equivalence_match},
                       {"action_sound", r.oracle_check->action_sound},
                       {"all_ok", r.oracle_check->all_ok()}};
    }
    if (include_timings) {
        nlohmann::json t;
        for (auto& [name, ms_] : r.timings_ms) t[name] = ms_;
        j["timings_ms"] = t;
    }
    return j.dump(2) + "\n";
}

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
    return os.str();
}

} // namespace

std::string report_to_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "input: " << r.cnf_path << " (" << r.n_vars << " vars, " << r.n_clauses
       << " clauses)\n";
    os << "generators: "
       << (r.generator_source == "file" ? r.gens_path : r.generator_source) << " ("
       << r.num_generators << " gens, enc " << r.enc_literal << " on literals, "
       << r.enc_vertex << " on vertices)\n";
    os << "model graph: " << r.vertices << " vertices, " << r.und_edges << " edges\n";
    os << "seed: " << r.seed << ", giant-c: " << r.giant_c << "\n";

    os << "literal orbits (" << r.literal_orbits.size() << "):\n";
    for (std::size_t i = 0; i < r.literal_orbits.size(); ++i)
        os << "  orbit " << i << ": " << join_ints(r.literal_orbits[i]) << "\n";
    os << "clause orbits (" << r.clause_orbits.size() << "):\n";
    for (auto& c : r.clause_orbits) os << "  " << join_ints(c) << "\n";

    bool has = r.stage != Stage::Orbits && r.stage != Stage::CheckPartition;
    if (has) {
        os << "decomposition: " << r.factors.size() << " factors\n";
        for (std::size_t i = 0; i < r.factors.size(); ++i) {
            os << "  factor " << i << ": literals " << join_ints(r.factors[i].literals)
               << ", clauses " << join_ints(r.factors[i].clauses) << "\n";
            for (auto& g : r.factors[i].generators) os << "    gen " << g << "\n";
        }
    }
    if (has && r.stage != Stage::Decompose) {
        os << "symmetric action:\n";
        for (auto& a : r.action) {
            os << "  orbit " << a.orbit << " " << join_ints(r.literal_orbits[a.orbit]) << ": "
               << a.verdict << " (" << a.method;
            if (a.witness_cycle_length > 0) os << ", witness cycle " << a.witness_cycle_length;
            os << ")\n";
        }
    }
    if (has && r.stage != Stage::Decompose && r.stage != Stage::Action) {
        os << "equivalence classes:\n";
        for (std::size_t c = 0; c < r.equivalence_classes.size(); ++c) {
            os << "  orbits " << join_ints(r.equivalence_classes[c]);
            if (std::find(r.heuristic_equivalence_classes.begin(),
                          r.heuristic_equivalence_classes.end(),
                          static_cast<int>(c)) != r.heuristic_equivalence_classes.end())
                os << "  (heuristic: no symmetric-action certificate)";
            os << "\n";
        }
        if (!r.undetermined_equivalence.empty())
            os << "  undetermined: " << join_ints(r.undetermined_equivalence) << "\n";
    }
    if (r.stage == Stage::RowSym || r.stage == Stage::Full) {
        os << "row interchangeability matrices (" << r.row_matrices.size() << "):\n";
        for (auto& mat : r.row_matrices) {
            os << "  [";
            for (std::size_t i = 0; i < mat.size(); ++i)
                os << (i ? "; " : "") << join_ints(mat[i]);
            os << "]\n";
        }
    }
    if (r.partition_check) {
        os << "partition check: " << (r.partition_check->ok ? "valid" : "invalid") << "\n";
        if (!r.partition_check->ok) {
            os << "  reason: " << r.partition_check->reason << "\n";
            if (!r.partition_check->failing_clause_orbit.empty())
                os << "  failing clause orbit: "
                   << join_ints(r.partition_check->failing_clause_orbit) << "\n";
        }
    }
    if (r.suggested_partition) {
        os << "suggested partition (heuristic):\n";
        for (auto& p : *r.suggested_partition) os << "  " << join_ints(p) << "\n";
    }
    if (r.oracle_check) {
        os << "oracle cross-check: " << (r.oracle_check->all_ok() ? "ok" : "MISMATCH") << "\n";
        os << "  orbits: " << (r.oracle_check->orbits_match ? "match" : "MISMATCH") << "\n";
        os << "  decomposition: " << (r.oracle_check->decomposition_match ? "match" : "MISMATCH")
           << "\n";
        os << "  equivalence: " << (r.oracle_check->equivalence_match ? "match" : "MISMATCH")
           << "\n";
        os << "  action certificates: " << (r.oracle_check->action_sound ? "sound" : "UNSOUND")
           << "\n";
    }
    for (auto& [name, t] : r.timings_ms)
        if (name == std::string("total")) os << "total time: " << t << " ms\n";
    return os.str();
}

} // namespace symscope
