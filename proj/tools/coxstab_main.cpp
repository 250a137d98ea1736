#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coxstab/errors.hpp"
#include "coxstab/reports.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitContract = 4;

void add_common(CLI::App* cmd, coxstab::RunConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "random seed")->envname("COXSTAB_SEED");
    cmd->add_option("--jobs", cfg.jobs, "worker threads (0 = default)");
    cmd->add_option("--out-dir", cfg.out_dir, "output directory");
}

void add_data(CLI::App* cmd, coxstab::RunConfig& cfg, bool required = true) {
    auto* f = cmd->add_option("--features", cfg.features_path, "feature CSV");
    auto* m = cmd->add_option("--meta", cfg.meta_path, "feature meta CSV");
    if (required) {
        f->required();
        m->required();
    }
}

void add_fit(CLI::App* cmd, coxstab::RunConfig& cfg) {
    cmd->add_option("--alpha", cfg.alpha, "lasso strength");
    cmd->add_option("--beta", cfg.beta, "graph penalty strength");
    cmd->add_option("--prefix-len", cfg.prefix_len, "code prefix length for graph edges");
    cmd->add_flag_callback(
        "--no-standardize", [&cfg] { cfg.standardize_features = false; },
        "fit on raw feature scales");
    cmd->add_option("--tol", cfg.fit.tol, "relative objective tolerance");
    cmd->add_option("--max-iter", cfg.fit.max_iter, "iteration cap");
}

}  // namespace

int main(int argc, char** argv) {
    coxstab::RunConfig cfg;
    CLI::App app{"graph-regularized sparse Cox regression with a bootstrap stability harness"};
    app.require_subcommand(1);
    app.set_version_flag("--version", coxstab::kToolVersion);

    auto* train = app.add_subcommand("train", "fit a model and write model.json + report");
    add_data(train, cfg);
    add_fit(train, cfg);
    add_common(train, cfg);

    auto* evaluate = app.add_subcommand("evaluate", "horizon AUC of a saved model on held-out data");
    evaluate->add_option("--model", cfg.model_path, "model.json from train")->required();
    evaluate->add_option("--features", cfg.eval_features_path, "evaluation feature CSV")->required();
    evaluate->add_option("--meta", cfg.eval_meta_path, "evaluation meta CSV")->required();
    evaluate->add_option("--horizon-days", cfg.horizon_days, "prediction horizon in days");
    add_common(evaluate, cfg);

    auto* stability = app.add_subcommand("stability", "bootstrap feature-selection stability");
    add_data(stability, cfg);
    add_fit(stability, cfg);
    stability->add_option("--bootstraps", cfg.bootstraps, "number of bootstrap replicates");
    stability->add_option("--top-k", cfg.top_k, "subset size(s); a list emits a per-k curve CSV")
        ->delimiter(',');
    add_common(stability, cfg);

    auto* grid = app.add_subcommand("grid", "sweep (alpha, beta) and tabulate AUC + stability");
    add_data(grid, cfg);
    grid->add_option("--eval-features", cfg.eval_features_path, "held-out feature CSV")->required();
    grid->add_option("--eval-meta", cfg.eval_meta_path, "held-out meta CSV")->required();
    grid->add_option("--alpha-list", cfg.alpha_list, "alpha values")->required()->delimiter(',');
    grid->add_option("--beta-list", cfg.beta_list, "beta values")->required()->delimiter(',');
    grid->add_option("--prefix-len", cfg.prefix_len, "code prefix length for graph edges");
    grid->add_option("--horizon-days", cfg.horizon_days, "prediction horizon in days");
    grid->add_option("--bootstraps", cfg.bootstraps, "bootstraps per cell");
    grid->add_option("--top-k", cfg.top_k, "subset size for stability")->delimiter(',');
    grid->add_flag_callback(
        "--no-standardize", [&cfg] { cfg.standardize_features = false; },
        "fit on raw feature scales");
    add_common(grid, cfg);

    auto* synth = app.add_subcommand("synth", "generate a synthetic survival dataset");
    synth->add_option("--n", cfg.synth.n, "sample count");
    synth->add_option("--groups", cfg.synth.n_groups, "correlated feature groups");
    synth->add_option("--group-size", cfg.synth.group_size, "features per group");
    synth->add_option("--rho", cfg.synth.within_corr, "within-group correlation");
    synth->add_option("--noise", cfg.synth.n_noise, "independent noise features");
    synth->add_option("--baseline-rate", cfg.synth.baseline_rate, "exponential hazard rate");
    synth->add_option("--censor-rate", cfg.synth.censor_rate, "target censored fraction");
    std::vector<std::string> weight_specs;
    synth->add_option("--true-weight", weight_specs,
                      "planted coefficient as index:value (repeatable); default plants "
                      "alternating +/-1 on each group's first feature");
    add_common(synth, cfg);

    auto* gexport = app.add_subcommand("graph-export", "write the feature graph edge list");
    add_data(gexport, cfg);
    gexport->add_option("--prefix-len", cfg.prefix_len, "code prefix length for graph edges");
    add_common(gexport, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitContract;
    }

    try {
        if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);

        if (train->parsed()) {
            cfg.command = "train";
            coxstab::run_train(cfg);
        } else if (evaluate->parsed()) {
            cfg.command = "evaluate";
            coxstab::run_evaluate(cfg);
        } else if (stability->parsed()) {
            cfg.command = "stability";
            coxstab::run_stability(cfg);
        } else if (grid->parsed()) {
            cfg.command = "grid";
            coxstab::run_grid(cfg);
        } else if (synth->parsed()) {
            cfg.command = "synth";
            cfg.synth.seed = cfg.seed;
            cfg.synth.true_weights.clear();
            for (const auto& spec : weight_specs) {
                const auto colon = spec.find(':');
                if (colon == std::string::npos)
                    throw coxstab::ContractError("--true-weight expects index:value, got " + spec);
                cfg.synth.true_weights.emplace_back(std::stoi(spec.substr(0, colon)),
                                                    std::stod(spec.substr(colon + 1)));
            }
            if (cfg.synth.true_weights.empty()) {
                for (int g = 0; g < cfg.synth.n_groups; ++g)
                    cfg.synth.true_weights.emplace_back(g * cfg.synth.group_size,
                                                        g % 2 == 0 ? 1.0 : -1.0);
            }
            coxstab::run_synth(cfg);
        } else if (gexport->parsed()) {
            cfg.command = "graph-export";
            coxstab::run_graph_export(cfg);
        }
    } catch (const coxstab::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitParse;
    } catch (const coxstab::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    } catch (const coxstab::ContractError& e) {
        std::fprintf(stderr, "contract error: %s\n", e.what());
        return kExitContract;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
