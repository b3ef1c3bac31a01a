#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "symscope/errors.hpp"
#include "symscope/pipeline.hpp"

namespace {

using namespace symscope;

// Distinct exit codes: 0 ok, 1 usage/internal, 2 parse error,
// 3 contract violation, 4 oracle bound exceeded.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitContract = 3;
constexpr int kExitBound = 4;

struct CommonOpts {
    AnalysisConfig config;
    std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_gens = true) {
    cmd->add_option("input", opts.config.cnf_path, "DIMACS CNF file")
        ->required()
        ->check(CLI::ExistingFile);
    if (with_gens) {
        cmd->add_option("--gens", opts.config.gens_path,
                        "generator file (cycles over signed literals); omit to derive "
                        "generators with the brute-force oracle (small instances only)")
            ->check(CLI::ExistingFile);
        cmd->add_flag("--graph-domain", opts.config.graph_domain,
                      "generator labels are 1-based model-graph vertex ids");
    }
    cmd->add_option("--seed", opts.config.seed, "random element source seed");
    cmd->add_option("--giant-c", opts.config.giant_c,
                    "giant test constant (must exceed 2 ln 2)");
    cmd->add_flag("--oracle", opts.config.run_oracle,
                  "cross-check the pipeline against the brute-force oracle");
    cmd->add_flag("--timings", opts.config.include_timings,
                  "include timings in JSON output (breaks byte-reproducibility)");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--oracle-max-vertices", opts.config.limits.max_vertices,
                    "vertex bound for brute-force enumeration");
    cmd->add_option("--oracle-max-elements", opts.config.limits.max_elements,
                    "element bound for brute-force enumeration");
}

int run(const CommonOpts& opts, Stage stage) {
    AnalysisReport rep = run_pipeline(opts.config, stage);
    if (opts.format == "json")
        std::cout << report_to_json(rep, opts.config.include_timings);
    else
        std::cout << report_to_text(rep);
    if (rep.oracle_check && !rep.oracle_check->all_ok()) {
        std::cerr << "error: oracle cross-check mismatch\n";
        return kExitContract;
    }
    if (rep.partition_check && !rep.partition_check->ok) return kExitOk;  // verdict, not error
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symscope: finest disjoint decompositions, natural symmetric actions, "
                 "equivalent orbits and row interchangeability for joint graph/group pairs"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        Stage stage;
    };
    const Sub subs[] = {
        {"orbits", "orbit partition of the generators", Stage::Orbits},
        {"decompose", "finest disjoint direct decomposition", Stage::Decompose},
        {"action", "natural symmetric action per orbit", Stage::Action},
        {"equiv", "equivalent orbits", Stage::Equiv},
        {"rowsym", "row interchangeability matrices", Stage::RowSym},
        {"analyze", "full pipeline report", Stage::Full},
    };

    std::vector<std::unique_ptr<CommonOpts>> opt_store;
    std::vector<std::pair<CLI::App*, Stage>> dispatch;
    for (auto& sub : subs) {
        auto* cmd = app.add_subcommand(sub.name, sub.help);
        opt_store.push_back(std::make_unique<CommonOpts>());
        add_common(cmd, *opt_store.back());
        dispatch.emplace_back(cmd, sub.stage);
    }

    auto* check = app.add_subcommand("check-partition",
                                     "test whether a literal partition induces a disjoint "
                                     "direct product");
    opt_store.push_back(std::make_unique<CommonOpts>());
    CommonOpts& check_opts = *opt_store.back();
    add_common(check, check_opts);
    check->add_option("--partition", check_opts.config.partition_path,
                      "partition file: one part per line, signed literals")
        ->check(CLI::ExistingFile);
    check->add_flag("--suggest", check_opts.config.suggest_partition,
                    "also emit a heuristic candidate partition");
    dispatch.emplace_back(check, Stage::CheckPartition);

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < dispatch.size(); ++i)
            if (dispatch[i].first->parsed()) return run(*opt_store[i], dispatch[i].second);
        std::cerr << "error: no subcommand\n";
        return kExitOther;
    } catch (const symscope::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const symscope::BoundError& e) {
        std::cerr << "oracle bound exceeded: " << e.what() << "\n";
        return kExitBound;
    } catch (const symscope::ContractError& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return kExitContract;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
