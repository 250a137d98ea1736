#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "coxstab/dataset.hpp"
#include "coxstab/feature_graph.hpp"
#include "coxstab/optimizer.hpp"

namespace coxstab {

// B feature subsets of size exactly k out of d features, one per bootstrap.
struct FeatureSubsetCollection {
    int B = 0;
    int k = 0;
    int d = 0;
    std::vector<std::vector<int>> subsets;  // each sorted ascending, |.| = k

    void check() const;
};

struct StabilityReport {
    double mean_jaccard = 0;      // in [0, 1]
    double mean_consistency = 0;  // in [-1, 1]
    std::vector<double> pairwise_jaccard;      // (a,b) lexicographic, a < b
    std::vector<double> pairwise_consistency;
    std::vector<int> selection_frequency;      // per feature, across subsets
};

// importance_i = |w_i| * sd_i with the population sd of the data as fitted;
// after standardization this reduces to |w_i| for non-constant features.
Eigen::VectorXd importance(const CoxModel& model, const SurvivalDataset& ds);

// 0..100 presentation scaling, max = 100; an all-zero vector stays zero
Eigen::VectorXd scale_importance(const Eigen::VectorXd& raw);

// indices of the k largest importances; ties broken by smaller index
std::vector<int> top_k(const Eigen::VectorXd& importance, int k);

double jaccard_pair(const std::vector<int>& a, const std::vector<int>& b);

// Kuncheva's chance-corrected index (r*d - k^2) / (k*(d - k)), r = |a n b|
double consistency_pair(const std::vector<int>& a, const std::vector<int>& b, int d);

// both indices over all B(B-1)/2 pairs plus their means
StabilityReport stability_report(const FeatureSubsetCollection& c);

// One importance vector per bootstrap replicate: draw n rows with replacement
// from substream b of the seed, re-sort, re-standardize, fit, rank. A
// replicate with zero events is redrawn from substream b + attempt*B, at most
// 100 attempts. Replicates run in parallel; collection order is by b.
std::vector<Eigen::VectorXd> bootstrap_importances(const SurvivalDataset& ds, const Laplacian& L,
                                                   double alpha, double beta, int B,
                                                   std::uint64_t seed,
                                                   const FitOptions& fit_opts = {});

FeatureSubsetCollection subsets_from_importances(const std::vector<Eigen::VectorXd>& importances,
                                                 int k);

std::pair<FeatureSubsetCollection, StabilityReport> bootstrap_stability(
    const SurvivalDataset& ds, const Laplacian& L, double alpha, double beta, int B, int k,
    std::uint64_t seed, const FitOptions& fit_opts = {});

}  // namespace coxstab
