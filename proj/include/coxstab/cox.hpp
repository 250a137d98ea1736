#pragma once

#include <Eigen/Core>

#include "coxstab/dataset.hpp"
#include "coxstab/feature_graph.hpp"

namespace coxstab {

struct CoxObjectiveParts {
    double loglik = 0;  // log partial likelihood
    double l1 = 0;      // sum_i |w_i|
    double graph = 0;   // w' L w
    double total = 0;   // loglik/n - alpha*l1 - beta/2*graph, the maximized quantity
};

// Breslow convention throughout: tied event times share the risk set
// R(t) = { j : times_j >= t }.
double log_partial_likelihood(const Eigen::VectorXd& w, const SurvivalDataset& ds);

// alpha > 0 (contract), beta >= 0.
CoxObjectiveParts objective(const Eigen::VectorXd& w, const SurvivalDataset& ds,
                            const Laplacian& L, double alpha, double beta);

// Gradient of the smooth part loglik/n - beta/2 * w'Lw. The L1 term is
// handled by the proximal step in the optimizer, never by a sign() here.
Eigen::VectorXd smooth_gradient(const Eigen::VectorXd& w, const SurvivalDataset& ds,
                                const Laplacian& L, double beta);

namespace detail {

// One forward/backward pass over the sorted data. logS holds the running
// max-shifted log-sum-exp of exp(eta) over each suffix; coeff[j] is the
// accumulated softmax mass sum_{events l : r(l) <= j} exp(eta_j - logS_{r(l)}),
// i.e. the multiplier of x_j in the risk-set mean term of the gradient.
struct CoxPass {
    double loglik = 0;
    Eigen::VectorXd eta;
    Eigen::VectorXd coeff;
};

CoxPass cox_pass(const Eigen::VectorXd& w, const SurvivalDataset& ds, bool need_coeff);

// smooth objective used by the optimizer line search; allows alpha >= 0
CoxObjectiveParts objective_unchecked(const Eigen::VectorXd& w, const SurvivalDataset& ds,
                                      const Laplacian& L, double alpha, double beta);

}  // namespace detail

}  // namespace coxstab
