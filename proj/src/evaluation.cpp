#include "coxstab/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coxstab/rng.hpp"

namespace coxstab {

HorizonLabeling label_at_horizon(const SurvivalDataset& ds, double horizon_days) {
    if (!(horizon_days > 0)) throw ContractError("horizon must be positive");
    HorizonLabeling out;
    out.horizon_days = horizon_days;
    out.labels.resize(ds.n());
    for (int i = 0; i < ds.n(); ++i) {
        if (ds.times[i] > horizon_days) {
            out.labels[i] = HorizonLabel::Negative;
            ++out.n_neg;
        } else if (ds.events[i]) {
            out.labels[i] = HorizonLabel::Positive;
            ++out.n_pos;
        } else {
            out.labels[i] = HorizonLabel::Excluded;
            ++out.n_excluded;
        }
    }
    return out;
}

double risk_score(const CoxModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.weights.size())
        throw ContractError("risk_score: dimension mismatch");
    return model.weights.dot(x);
}

Eigen::VectorXd risk_scores(const CoxModel& model, const SurvivalDataset& ds) {
    if (ds.p() != model.weights.size())
        throw ContractError("risk_scores: dimension mismatch");
    return ds.X * model.weights;
}

namespace {

// midrank Mann-Whitney over (score, is_positive) pairs
double auc_ranked(std::vector<std::pair<double, int>>& pairs, int n_pos, int n_neg) {
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t n = pairs.size();
    double rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pairs[j + 1].first == pairs[i].first) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t)
            if (pairs[t].second) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * (n_pos + 1);
    return detail::auc_from_u(u, static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace

double auc(const Eigen::VectorXd& scores, const HorizonLabeling& labels) {
    if (scores.size() != static_cast<Eigen::Index>(labels.labels.size()))
        throw ContractError("auc: scores and labels disagree in length");
    if (labels.n_pos == 0 || labels.n_neg == 0) throw NumericalError("degenerate labeling");
    std::vector<std::pair<double, int>> pairs;
    pairs.reserve(labels.n_pos + labels.n_neg);
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        if (labels.labels[i] == HorizonLabel::Positive)
            pairs.emplace_back(scores[static_cast<Eigen::Index>(i)], 1);
        else if (labels.labels[i] == HorizonLabel::Negative)
            pairs.emplace_back(scores[static_cast<Eigen::Index>(i)], 0);
    }
    return auc_ranked(pairs, labels.n_pos, labels.n_neg);
}

AucResult auc_with_ci(const Eigen::VectorXd& scores, const HorizonLabeling& labels,
                      std::uint64_t seed, int n_boot) {
    if (n_boot < 2) throw ContractError("auc_with_ci: need at least 2 resamples");
    AucResult res;
    res.auc = auc(scores, labels);
    res.n_pos = labels.n_pos;
    res.n_neg = labels.n_neg;
    res.n_excluded = labels.n_excluded;

    std::vector<std::pair<double, int>> labeled;
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        if (labels.labels[i] == HorizonLabel::Positive)
            labeled.emplace_back(scores[static_cast<Eigen::Index>(i)], 1);
        else if (labels.labels[i] == HorizonLabel::Negative)
            labeled.emplace_back(scores[static_cast<Eigen::Index>(i)], 0);
    }
    const auto m = static_cast<std::uint64_t>(labeled.size());

    std::vector<double> boot(n_boot);
    int n_failed = 0;
#pragma omp parallel for schedule(static) reduction(+ : n_failed)
    for (int b = 0; b < n_boot; ++b) {
        std::vector<std::pair<double, int>> sample(labeled.size());
        bool ok = false;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(b) +
                                               static_cast<std::uint64_t>(attempt) * n_boot);
            int n_pos = 0;
            for (std::size_t i = 0; i < sample.size(); ++i) {
                sample[i] = labeled[rng.below(m)];
                n_pos += sample[i].second;
            }
            const int n_neg = static_cast<int>(sample.size()) - n_pos;
            if (n_pos > 0 && n_neg > 0) {
                boot[b] = auc_ranked(sample, n_pos, n_neg);
                ok = true;
            }
        }
        if (!ok) ++n_failed;
    }
    if (n_failed > 0)
        throw NumericalError("auc_with_ci: " + std::to_string(n_failed) +
                             " bootstrap resamples stayed single-class after 100 attempts");
    std::sort(boot.begin(), boot.end());
    auto quantile = [&](double q) {
        const double h = q * (n_boot - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, static_cast<std::size_t>(n_boot - 1));
        return boot[lo] + (h - std::floor(h)) * (boot[hi] - boot[lo]);
    };
    res.ci_low = quantile(0.025);
    res.ci_high = quantile(0.975);
    return res;
}

}  // namespace coxstab
