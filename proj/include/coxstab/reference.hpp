#pragma once

#include <Eigen/Core>
#include <vector>

#include "coxstab/cox.hpp"
#include "coxstab/dataset.hpp"
#include "coxstab/feature_graph.hpp"
#include "coxstab/stability.hpp"

// Serial reference implementations: direct transcriptions of the defining
// formulas, kept independent of the production kernels. Tests use them as
// oracles; the benchmark compares them against the parallel paths.
namespace coxstab::reference {

// per-event risk-set rescan, O(n^2 p)
double log_partial_likelihood(const Eigen::VectorXd& w, const SurvivalDataset& ds);

// event-by-event risk-set means, O(n^2 p)
Eigen::VectorXd smooth_gradient(const Eigen::VectorXd& w, const SurvivalDataset& ds,
                                const Laplacian& L, double beta);

// (1/2) * sum over all ordered pairs of A_ij (w_i - w_j)^2, via a dense A
double quad_form_ordered_pairs(const FeatureGraph& g, const Eigen::VectorXd& w);

// all (positive, negative) pairs counted directly, ties as 0.5
double auc_pair_counting(const std::vector<double>& scores, const std::vector<int>& labels);

// all-pairs recomputation of the two stability means
double mean_jaccard_bruteforce(const FeatureSubsetCollection& c);
double mean_consistency_bruteforce(const FeatureSubsetCollection& c);

// Derivative-free maximization of the log partial likelihood (Nelder-Mead
// with restarts). Independent of the proximal-gradient path.
Eigen::VectorXd maximize_partial_likelihood(const SurvivalDataset& ds, int max_iter = 20000);

}  // namespace coxstab::reference
