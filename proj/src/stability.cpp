#include "coxstab/stability.hpp"

#include <algorithm>
#include <numeric>

#include "coxstab/rng.hpp"

namespace coxstab {

void FeatureSubsetCollection::check() const {
    if (B < 2 || static_cast<int>(subsets.size()) != B)
        throw ContractError("subset collection needs B >= 2 subsets");
    if (k < 1 || k >= d) throw ContractError("subset collection needs 1 <= k < d");
    for (const auto& s : subsets) {
        if (static_cast<int>(s.size()) != k)
            throw ContractError("every subset must have size exactly k");
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] < 0 || s[i] >= d) throw ContractError("subset index out of range");
            if (i > 0 && s[i] <= s[i - 1])
                throw ContractError("subsets must be strictly ascending");
        }
    }
}

Eigen::VectorXd importance(const CoxModel& model, const SurvivalDataset& ds) {
    if (model.weights.size() != ds.p())
        throw ContractError("importance: model and dataset dimensions disagree");
    Eigen::VectorXd means, sds;
    column_moments(ds.X, means, sds);
    return model.weights.cwiseAbs().cwiseProduct(sds);
}

Eigen::VectorXd scale_importance(const Eigen::VectorXd& raw) {
    const double mx = raw.size() ? raw.maxCoeff() : 0.0;
    if (mx <= 0) return Eigen::VectorXd::Zero(raw.size());
    return raw * (100.0 / mx);
}

std::vector<int> top_k(const Eigen::VectorXd& imp, int k) {
    const int p = static_cast<int>(imp.size());
    if (k < 1 || k >= p) throw ContractError("top_k: need 1 <= k < p");
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        return imp[a] != imp[b] ? imp[a] > imp[b] : a < b;
    });
    std::vector<int> out(order.begin(), order.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// both inputs sorted ascending
int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    int r = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else {
            ++r;
            ++i;
            ++j;
        }
    }
    return r;
}

}  // namespace

double jaccard_pair(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.empty() && b.empty()) throw ContractError("jaccard_pair: both sets empty");
    const int r = intersection_size(a, b);
    const int u = static_cast<int>(a.size() + b.size()) - r;
    return static_cast<double>(r) / static_cast<double>(u);
}

double consistency_pair(const std::vector<int>& a, const std::vector<int>& b, int d) {
    const int k = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != k)
        throw ContractError("consistency_pair: subsets must have equal size");
    if (k < 1 || k >= d) throw ContractError("consistency_pair: need 1 <= k < d");
    for (int v : a)
        if (v < 0 || v >= d) throw ContractError("consistency_pair: index out of range");
    for (int v : b)
        if (v < 0 || v >= d) throw ContractError("consistency_pair: index out of range");
    const double r = intersection_size(a, b);
    return (r * d - static_cast<double>(k) * k) / (static_cast<double>(k) * (d - k));
}

StabilityReport stability_report(const FeatureSubsetCollection& c) {
    c.check();
    StabilityReport rep;
    rep.selection_frequency.assign(c.d, 0);
    for (const auto& s : c.subsets)
        for (int v : s) ++rep.selection_frequency[v];
    const std::size_t n_pairs = static_cast<std::size_t>(c.B) * (c.B - 1) / 2;
    rep.pairwise_jaccard.reserve(n_pairs);
    rep.pairwise_consistency.reserve(n_pairs);
    double jac_sum = 0, con_sum = 0;
    for (int a = 0; a < c.B; ++a) {
        for (int b = a + 1; b < c.B; ++b) {
            const double jac = jaccard_pair(c.subsets[a], c.subsets[b]);
            const double con = consistency_pair(c.subsets[a], c.subsets[b], c.d);
            rep.pairwise_jaccard.push_back(jac);
            rep.pairwise_consistency.push_back(con);
            jac_sum += jac;
            con_sum += con;
        }
    }
    rep.mean_jaccard = jac_sum / static_cast<double>(n_pairs);
    rep.mean_consistency = con_sum / static_cast<double>(n_pairs);
    return rep;
}

namespace {

SurvivalDataset resample_rows(const SurvivalDataset& ds, Rng& rng) {
    const int n = ds.n();
    SurvivalDataset out;
    out.X.resize(n, ds.p());
    out.times.resize(n);
    out.events.resize(n);
    out.meta = ds.meta;
    for (int i = 0; i < n; ++i) {
        const auto r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        out.X.row(i) = ds.X.row(r);
        out.times[i] = ds.times[r];
        out.events[i] = ds.events[r];
    }
    out.standardized = false;
    sort_and_check(out);
    return out;
}

}  // namespace

std::vector<Eigen::VectorXd> bootstrap_importances(const SurvivalDataset& ds, const Laplacian& L,
                                                   double alpha, double beta, int B,
                                                   std::uint64_t seed,
                                                   const FitOptions& fit_opts) {
    if (B < 2) throw ContractError("bootstrap_importances: B must be >= 2");
    std::vector<Eigen::VectorXd> out(B);
    std::string first_error;

#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < B; ++b) {
        try {
            SurvivalDataset sample;
            bool drawn = false;
            for (int attempt = 0; attempt < 100; ++attempt) {
                Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(b) +
                                                   static_cast<std::uint64_t>(attempt) * B);
                sample = resample_rows(ds, rng);
                if (sample.n_events() > 0) {
                    drawn = true;
                    break;
                }
            }
            if (!drawn)
                throw NumericalError("bootstrap replicate " + std::to_string(b) +
                                     " had zero events after 100 attempts");
            const SurvivalDataset std_sample = standardize(sample);
            const CoxModel model = fit(std_sample, L, alpha, beta, fit_opts);
            out[b] = importance(model, std_sample);
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!first_error.empty()) throw NumericalError(first_error);
    return out;
}

FeatureSubsetCollection subsets_from_importances(const std::vector<Eigen::VectorXd>& importances,
                                                 int k) {
    FeatureSubsetCollection c;
    c.B = static_cast<int>(importances.size());
    if (c.B < 2) throw ContractError("need at least two importance vectors");
    c.d = static_cast<int>(importances.front().size());
    c.k = k;
    c.subsets.reserve(importances.size());
    for (const auto& imp : importances) c.subsets.push_back(top_k(imp, k));
    c.check();
    return c;
}

std::pair<FeatureSubsetCollection, StabilityReport> bootstrap_stability(
    const SurvivalDataset& ds, const Laplacian& L, double alpha, double beta, int B, int k,
    std::uint64_t seed, const FitOptions& fit_opts) {
    if (k < 1 || k >= ds.p()) throw ContractError("bootstrap_stability: need 1 <= k < p");
    const auto importances = bootstrap_importances(ds, L, alpha, beta, B, seed, fit_opts);
    FeatureSubsetCollection c = subsets_from_importances(importances, k);
    StabilityReport rep = stability_report(c);
    return {std::move(c), std::move(rep)};
}

}  // namespace coxstab
