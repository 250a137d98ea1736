#pragma once

#include <Eigen/Core>
#include <vector>

#include "coxstab/cox.hpp"
#include "coxstab/dataset.hpp"
#include "coxstab/feature_graph.hpp"

namespace coxstab {

struct FitOptions {
    double tol = 1e-7;        // relative objective change
    int max_iter = 10000;
    double step_init = 1.0;
    double step_shrink = 0.5;
};

struct CoxModel {
    Eigen::VectorXd weights;
    double alpha = 0;
    double beta = 0;
    int n_iter = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // non-decreasing up to 1e-12 slack
    Eigen::VectorXd standardization_means;  // copied from the fitted dataset
    Eigen::VectorXd standardization_sds;

    int nonzero_count() const;
};

// sign(v) * max(|v| - t, 0), t >= 0
double soft_threshold(double v, double t);

// Proximal gradient ascent on the regularized objective: gradient step on the
// smooth part, soft-threshold of the L1 part, backtracking until the full
// objective does not decrease. Deterministic; w starts at zero unless a warm
// start is given. alpha >= 0 here (the line search never divides by it).
CoxModel fit(const SurvivalDataset& ds, const Laplacian& L, double alpha, double beta,
             const FitOptions& opts = {}, const Eigen::VectorXd* warm_start = nullptr);

}  // namespace coxstab
