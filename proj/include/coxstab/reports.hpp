#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "coxstab/optimizer.hpp"
#include "coxstab/synthgen.hpp"

namespace coxstab {

inline constexpr const char* kToolVersion = "0.1.0";

// Everything a run needs; echoed verbatim into every report for provenance.
struct RunConfig {
    std::string command;
    std::string features_path, meta_path;
    std::string eval_features_path, eval_meta_path;
    std::string model_path;
    std::string out_dir = ".";
    double alpha = 0.004;
    double beta = 0.03;
    int prefix_len = 3;
    double horizon_days = 182.0;
    int bootstraps = 100;
    std::vector<int> top_k = {20};
    std::uint64_t seed = 0;
    int jobs = 0;  // 0 = leave the OpenMP default
    bool standardize_features = true;
    std::vector<double> alpha_list, beta_list;  // grid
    FitOptions fit;
    SynthConfig synth;
};

nlohmann::json run_config_json(const RunConfig& cfg);

// model persistence
nlohmann::json model_to_json(const CoxModel& model, const std::vector<std::string>& feature_names);
CoxModel model_from_json(const nlohmann::json& j, std::vector<std::string>& feature_names);
void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json(const std::string& path);

// Runners used by both the CLI and the tests. Each returns the report JSON it
// wrote (timestamp field included; strip it to compare runs byte-for-byte).
nlohmann::json run_train(const RunConfig& cfg);
nlohmann::json run_evaluate(const RunConfig& cfg);
nlohmann::json run_stability(const RunConfig& cfg);
nlohmann::json run_grid(const RunConfig& cfg);
nlohmann::json run_synth(const RunConfig& cfg);
nlohmann::json run_graph_export(const RunConfig& cfg);

}  // namespace coxstab
