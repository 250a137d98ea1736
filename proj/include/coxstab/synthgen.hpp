#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "coxstab/dataset.hpp"

namespace coxstab {

// Synthetic survival data with correlated feature groups. Group features are
// sqrt(rho)*z_g + sqrt(1-rho)*eps, so pairwise within-group correlation is
// rho. Event times follow the proportional-hazards law
// T = -log(U) / (lambda * exp(w_true . x)); censoring times are exponential
// with a rate calibrated by bisection to hit censor_rate approximately.
struct SynthConfig {
    int n = 300;
    int n_groups = 6;
    int group_size = 5;
    double within_corr = 0.9;
    int n_noise = 30;
    std::vector<std::pair<int, double>> true_weights;  // sparse (index, value)
    double baseline_rate = 1.0;
    double censor_rate = 0.0;
    std::uint64_t seed = 0;
};

struct SynthGroundTruth {
    Eigen::VectorXd true_weights;  // dense, length p
    std::vector<int> group_of;     // group index per feature, -1 for noise
    double censor_hazard = 0;      // calibrated rate actually used (0 = none)
};

struct SynthResult {
    SurvivalDataset ds;
    SynthGroundTruth truth;
};

// Group g gets codes "G<letter>.<member>" sharing the two-character prefix
// "G<letter>", event key "G<letter>" and window ids 0..group_size-1, so the
// graph rules each recover the planted cliques. Noise features get unique
// two-letter codes starting past 'G' and no relations.
SynthResult generate(const SynthConfig& cfg);

}  // namespace coxstab
