#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "coxstab/dataset.hpp"
#include "coxstab/optimizer.hpp"

namespace coxstab {

enum class HorizonLabel : std::uint8_t { Positive, Negative, Excluded };

// Horizon outcome classes: positive = event within the horizon, negative =
// event-free past the horizon, excluded = censored before it (outcome
// unknown).
struct HorizonLabeling {
    double horizon_days = 182.0;
    std::vector<HorizonLabel> labels;
    int n_pos = 0, n_neg = 0, n_excluded = 0;
};

HorizonLabeling label_at_horizon(const SurvivalDataset& ds, double horizon_days);

// linear predictor w.x; higher = earlier expected readmission. x must be on
// the model's standardized scale.
double risk_score(const CoxModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd risk_scores(const CoxModel& model, const SurvivalDataset& ds);

// Mann-Whitney AUC with midranks; ties between a positive and a negative
// count 0.5.
double auc(const Eigen::VectorXd& scores, const HorizonLabeling& labels);

struct AucResult {
    double auc = 0;
    double ci_low = 0, ci_high = 0;  // percentile bootstrap
    int n_pos = 0, n_neg = 0, n_excluded = 0;
};

// Seeded patient-level bootstrap over the labeled subjects; degenerate
// resamples are redrawn from the next substream.
AucResult auc_with_ci(const Eigen::VectorXd& scores, const HorizonLabeling& labels,
                      std::uint64_t seed, int n_boot = 2000);

namespace detail {

// Final division shared by every AUC route. Mirrored around 1/2 so that
// auc(s) + auc(-s) sums to exactly 1.0: the complement's U is den - u, and
// x + fl(1 - x) rounds to 1 whenever |rounding error| <= 2^-54.
inline double auc_from_u(double u, double den) {
    return u <= den - u ? u / den : 1.0 - (den - u) / den;
}

}  // namespace detail

}  // namespace coxstab
