#include "coxstab/reports.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "coxstab/cox.hpp"
#include "coxstab/evaluation.hpp"
#include "coxstab/stability.hpp"

namespace coxstab {

using nlohmann::json;

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

json report_envelope(const RunConfig& cfg) {
    json j;
    j["tool"] = "coxstab";
    j["version"] = kToolVersion;
    j["config"] = run_config_json(cfg);
    j["timestamp"] = iso_timestamp();
    return j;
}

std::string out_path(const RunConfig& cfg, const std::string& filename) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / filename).string();
}

std::vector<std::string> feature_names(const SurvivalDataset& ds) {
    std::vector<std::string> names;
    names.reserve(ds.meta.size());
    for (const auto& m : ds.meta) names.push_back(m.name);
    return names;
}

SurvivalDataset load_training_data(const RunConfig& cfg) {
    SurvivalDataset ds = load_dataset(cfg.features_path, cfg.meta_path);
    if (cfg.standardize_features) ds = standardize(ds);
    return ds;
}

// standardize with the model's stored moments, not the data's own
SurvivalDataset apply_model_scaling(const SurvivalDataset& ds, const CoxModel& model) {
    if (model.standardization_means.size() == 0) return ds;
    if (model.standardization_means.size() != ds.p())
        throw ContractError("model standardization does not match dataset width");
    SurvivalDataset out = ds;
    for (int j = 0; j < out.p(); ++j) {
        out.X.col(j).array() -= model.standardization_means[j];
        if (model.standardization_sds[j] > 0) out.X.col(j) /= model.standardization_sds[j];
    }
    out.standardized = true;
    out.orig_means = model.standardization_means;
    out.orig_sds = model.standardization_sds;
    return out;
}

json importance_table(const CoxModel& model, const SurvivalDataset& ds, int limit) {
    const Eigen::VectorXd raw = importance(model, ds);
    const Eigen::VectorXd scaled = scale_importance(raw);
    std::vector<int> order;
    if (limit < ds.p()) {
        order = top_k(raw, limit);
    } else {
        order.resize(ds.p());
        std::iota(order.begin(), order.end(), 0);
    }
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return raw[a] != raw[b] ? raw[a] > raw[b] : a < b; });
    json rows = json::array();
    for (int f : order) {
        rows.push_back({{"feature", ds.meta[f].name},
                        {"code", ds.meta[f].code},
                        {"weight", model.weights[f]},
                        {"importance", scaled[f]}});
    }
    return rows;
}

struct CellResult {
    double auc = 0;
    int nonzeros = 0;
    double mean_consistency = 0;
    double mean_jaccard = 0;
};

CellResult evaluate_cell(const SurvivalDataset& train, const SurvivalDataset& eval_raw,
                         const Laplacian& L, double alpha, double beta, const RunConfig& cfg) {
    CellResult cell;
    const CoxModel model = fit(train, L, alpha, beta, cfg.fit);
    cell.nonzeros = model.nonzero_count();
    const SurvivalDataset eval_ds = apply_model_scaling(eval_raw, model);
    const HorizonLabeling labeling = label_at_horizon(eval_ds, cfg.horizon_days);
    cell.auc = auc(risk_scores(model, eval_ds), labeling);
    const int k = cfg.top_k.front();
    const auto [subsets, report] =
        bootstrap_stability(train, L, alpha, beta, cfg.bootstraps, k, cfg.seed, cfg.fit);
    cell.mean_consistency = report.mean_consistency;
    cell.mean_jaccard = report.mean_jaccard;
    return cell;
}

}  // namespace

json run_config_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["features"] = cfg.features_path;
    j["meta"] = cfg.meta_path;
    j["eval_features"] = cfg.eval_features_path;
    j["eval_meta"] = cfg.eval_meta_path;
    j["model"] = cfg.model_path;
    j["out_dir"] = cfg.out_dir;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["prefix_len"] = cfg.prefix_len;
    j["horizon_days"] = cfg.horizon_days;
    j["bootstraps"] = cfg.bootstraps;
    j["top_k"] = cfg.top_k;
    j["seed"] = cfg.seed;
    j["jobs"] = cfg.jobs;
    j["standardize"] = cfg.standardize_features;
    j["alpha_list"] = cfg.alpha_list;
    j["beta_list"] = cfg.beta_list;
    j["fit"] = {{"tol", cfg.fit.tol},
                {"max_iter", cfg.fit.max_iter},
                {"step_init", cfg.fit.step_init},
                {"step_shrink", cfg.fit.step_shrink}};
    j["synth"] = {{"n", cfg.synth.n},
                  {"groups", cfg.synth.n_groups},
                  {"group_size", cfg.synth.group_size},
                  {"rho", cfg.synth.within_corr},
                  {"noise", cfg.synth.n_noise},
                  {"baseline_rate", cfg.synth.baseline_rate},
                  {"censor_rate", cfg.synth.censor_rate},
                  {"seed", cfg.synth.seed}};
    return j;
}

json model_to_json(const CoxModel& model, const std::vector<std::string>& names) {
    json j;
    j["weights"] = std::vector<double>(model.weights.data(),
                                       model.weights.data() + model.weights.size());
    j["alpha"] = model.alpha;
    j["beta"] = model.beta;
    j["n_iter"] = model.n_iter;
    j["converged"] = model.converged;
    j["feature_names"] = names;
    j["standardization"] = {
        {"means", std::vector<double>(model.standardization_means.data(),
                                      model.standardization_means.data() +
                                          model.standardization_means.size())},
        {"sds", std::vector<double>(model.standardization_sds.data(),
                                    model.standardization_sds.data() +
                                        model.standardization_sds.size())}};
    return j;
}

CoxModel model_from_json(const json& j, std::vector<std::string>& names) try {
    CoxModel model;
    const auto w = j.at("weights").get<std::vector<double>>();
    model.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    model.alpha = j.at("alpha").get<double>();
    model.beta = j.at("beta").get<double>();
    model.n_iter = j.at("n_iter").get<int>();
    model.converged = j.at("converged").get<bool>();
    names = j.at("feature_names").get<std::vector<std::string>>();
    const auto means = j.at("standardization").at("means").get<std::vector<double>>();
    const auto sds = j.at("standardization").at("sds").get<std::vector<double>>();
    model.standardization_means =
        Eigen::Map<const Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
    model.standardization_sds =
        Eigen::Map<const Eigen::VectorXd>(sds.data(), static_cast<Eigen::Index>(sds.size()));
    return model;
} catch (const json::exception& e) {
    throw ParseError(std::string("malformed model JSON: ") + e.what());
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write: " + path);
    out << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

json run_train(const RunConfig& cfg) {
    const SurvivalDataset ds = load_training_data(cfg);
    const FeatureGraph g = build_graph(ds.meta, cfg.prefix_len);
    const Laplacian L = laplacian(g);
    const CoxModel model = fit(ds, L, cfg.alpha, cfg.beta, cfg.fit);

    write_json(model_to_json(model, feature_names(ds)), out_path(cfg, "model.json"));

    json report = report_envelope(cfg);
    report["n"] = ds.n();
    report["p"] = ds.p();
    report["n_events"] = ds.n_events();
    report["graph_edges"] = g.n_edges();
    report["converged"] = model.converged;
    report["n_iter"] = model.n_iter;
    report["objective_initial"] = model.objective_trace.front();
    report["objective_final"] = model.objective_trace.back();
    report["nonzero_weights"] = model.nonzero_count();
    report["top_importance"] = importance_table(model, ds, 20);
    write_json(report, out_path(cfg, "train_report.json"));
    return report;
}

json run_evaluate(const RunConfig& cfg) {
    std::vector<std::string> names;
    const CoxModel model = model_from_json(read_json(cfg.model_path), names);
    SurvivalDataset ds = load_dataset(cfg.eval_features_path, cfg.eval_meta_path);
    for (int j = 0; j < ds.p(); ++j) {
        if (static_cast<std::size_t>(j) >= names.size() || ds.meta[j].name != names[j])
            throw ContractError("evaluation features do not match the model's feature names");
    }
    const SurvivalDataset scaled = apply_model_scaling(ds, model);
    const HorizonLabeling labeling = label_at_horizon(scaled, cfg.horizon_days);
    const AucResult res =
        auc_with_ci(risk_scores(model, scaled), labeling, cfg.seed);

    json report = report_envelope(cfg);
    report["horizon_days"] = cfg.horizon_days;
    report["auc"] = res.auc;
    report["ci_low"] = res.ci_low;
    report["ci_high"] = res.ci_high;
    report["n_pos"] = res.n_pos;
    report["n_neg"] = res.n_neg;
    report["n_excluded"] = res.n_excluded;
    write_json(report, out_path(cfg, "evaluation_report.json"));
    return report;
}

json run_stability(const RunConfig& cfg) {
    if (cfg.top_k.empty()) throw ContractError("stability: need at least one k");
    const SurvivalDataset ds = load_training_data(cfg);
    const FeatureGraph g = build_graph(ds.meta, cfg.prefix_len);
    const Laplacian L = laplacian(g);

    const auto importances =
        bootstrap_importances(ds, L, cfg.alpha, cfg.beta, cfg.bootstraps, cfg.seed, cfg.fit);

    json report = report_envelope(cfg);
    report["B"] = cfg.bootstraps;
    report["d"] = ds.p();
    json per_k = json::array();
    for (int k : cfg.top_k) {
        const FeatureSubsetCollection c = subsets_from_importances(importances, k);
        const StabilityReport rep = stability_report(c);
        json jk;
        jk["k"] = k;
        jk["mean_jaccard"] = rep.mean_jaccard;
        jk["mean_consistency"] = rep.mean_consistency;
        jk["pairwise_jaccard"] = rep.pairwise_jaccard;
        jk["pairwise_consistency"] = rep.pairwise_consistency;
        jk["selection_frequency"] = rep.selection_frequency;
        per_k.push_back(std::move(jk));
    }
    // single-k reports mirror the scalar fields at the top level
    if (per_k.size() == 1) {
        report["k"] = per_k[0]["k"];
        report["mean_jaccard"] = per_k[0]["mean_jaccard"];
        report["mean_consistency"] = per_k[0]["mean_consistency"];
        report["pairwise_jaccard"] = per_k[0]["pairwise_jaccard"];
        report["pairwise_consistency"] = per_k[0]["pairwise_consistency"];
        report["selection_frequency"] = per_k[0]["selection_frequency"];
    }
    report["results"] = std::move(per_k);
    write_json(report, out_path(cfg, "stability_report.json"));

    if (cfg.top_k.size() > 1) {
        std::ofstream csv(out_path(cfg, "stability_curve.csv"));
        csv << "k,mean_jaccard,mean_consistency\n";
        for (const auto& jk : report["results"]) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", jk["k"].get<int>(),
                          jk["mean_jaccard"].get<double>(), jk["mean_consistency"].get<double>());
            csv << buf;
        }
    }
    return report;
}

json run_grid(const RunConfig& cfg) {
    if (cfg.alpha_list.empty() || cfg.beta_list.empty())
        throw ContractError("grid: alpha and beta lists must be non-empty");
    if (cfg.eval_features_path.empty())
        throw ContractError("grid: an evaluation file is required");
    if (cfg.top_k.empty()) throw ContractError("grid: need a subset size k");

    const SurvivalDataset train = load_training_data(cfg);
    const SurvivalDataset eval_raw = load_dataset(cfg.eval_features_path, cfg.eval_meta_path);
    const FeatureGraph g = build_graph(train.meta, cfg.prefix_len);
    const Laplacian L = laplacian(g);

    json report = report_envelope(cfg);
    json rows = json::array();
    std::ofstream csv(out_path(cfg, "grid.csv"));
    csv << "alpha,beta,auc,nonzeros,mean_consistency,mean_jaccard\n";
    for (double alpha : cfg.alpha_list) {
        for (double beta : cfg.beta_list) {
            const CellResult cell = evaluate_cell(train, eval_raw, L, alpha, beta, cfg);
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d,%.17g,%.17g\n", alpha, beta,
                          cell.auc, cell.nonzeros, cell.mean_consistency, cell.mean_jaccard);
            csv << buf;
            rows.push_back({{"alpha", alpha},
                            {"beta", beta},
                            {"auc", cell.auc},
                            {"nonzeros", cell.nonzeros},
                            {"mean_consistency", cell.mean_consistency},
                            {"mean_jaccard", cell.mean_jaccard}});
        }
    }
    report["cells"] = std::move(rows);
    write_json(report, out_path(cfg, "grid_report.json"));
    return report;
}

json run_synth(const RunConfig& cfg) {
    const SynthResult res = generate(cfg.synth);
    save_dataset(res.ds, out_path(cfg, "features.csv"), out_path(cfg, "meta.csv"));

    json truth;
    truth["true_weights"] = std::vector<double>(
        res.truth.true_weights.data(),
        res.truth.true_weights.data() + res.truth.true_weights.size());
    truth["group_of_feature"] = res.truth.group_of;
    truth["censor_hazard"] = res.truth.censor_hazard;

    json report = report_envelope(cfg);
    report["n"] = res.ds.n();
    report["p"] = res.ds.p();
    report["n_events"] = res.ds.n_events();
    report["ground_truth"] = std::move(truth);
    write_json(report, out_path(cfg, "synth_truth.json"));
    return report;
}

json run_graph_export(const RunConfig& cfg) {
    const SurvivalDataset ds = load_dataset(cfg.features_path, cfg.meta_path);
    const FeatureGraph g = build_graph(ds.meta, cfg.prefix_len);
    export_edges_csv(g, out_path(cfg, "graph_edges.csv"));

    json report = report_envelope(cfg);
    report["p"] = g.p;
    report["edges"] = g.n_edges();
    write_json(report, out_path(cfg, "graph_report.json"));
    return report;
}

}  // namespace coxstab
