#include "coxstab/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "coxstab/evaluation.hpp"

namespace coxstab::reference {

double log_partial_likelihood(const Eigen::VectorXd& w, const SurvivalDataset& ds) {
    const int n = ds.n();
    if (w.size() != ds.p()) throw ContractError("reference loglik: dimension mismatch");
    double loglik = 0;
    for (int l = 0; l < n; ++l) {
        if (!ds.events[l]) continue;
        // risk set: everyone with time >= t_l
        double max_eta = -std::numeric_limits<double>::infinity();
        std::vector<double> etas;
        for (int j = 0; j < n; ++j) {
            if (ds.times[j] >= ds.times[l]) {
                etas.push_back(w.dot(ds.X.row(j)));
                max_eta = std::max(max_eta, etas.back());
            }
        }
        double denom = 0;
        for (double e : etas) denom += std::exp(e - max_eta);
        loglik += w.dot(ds.X.row(l)) - (max_eta + std::log(denom));
    }
    return loglik;
}

Eigen::VectorXd smooth_gradient(const Eigen::VectorXd& w, const SurvivalDataset& ds,
                                const Laplacian& L, double beta) {
    const int n = ds.n();
    const int p = ds.p();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
    for (int l = 0; l < n; ++l) {
        if (!ds.events[l]) continue;
        double denom = 0;
        Eigen::VectorXd num = Eigen::VectorXd::Zero(p);
        for (int j = 0; j < n; ++j) {
            if (ds.times[j] >= ds.times[l]) {
                const double e = std::exp(w.dot(ds.X.row(j)));
                denom += e;
                num += e * ds.X.row(j).transpose();
            }
        }
        grad += ds.X.row(l).transpose() - num / denom;
    }
    grad /= n;
    grad -= beta * (L.dense() * w);
    return grad;
}

double quad_form_ordered_pairs(const FeatureGraph& g, const Eigen::VectorXd& w) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(g.p, g.p);
    for (const auto& e : g.edges) {
        A(e.i, e.j) = 1.0;
        A(e.j, e.i) = 1.0;
    }
    double acc = 0;
    for (int i = 0; i < g.p; ++i)
        for (int j = 0; j < g.p; ++j) acc += A(i, j) * (w[i] - w[j]) * (w[i] - w[j]);
    return 0.5 * acc;
}

double auc_pair_counting(const std::vector<double>& scores, const std::vector<int>& labels) {
    double concordant = 0;
    long n_pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++n_pairs;
            if (scores[i] > scores[j])
                concordant += 1.0;
            else if (scores[i] == scores[j])
                concordant += 0.5;
        }
    }
    if (n_pairs == 0) throw NumericalError("degenerate labeling");
    return detail::auc_from_u(concordant, static_cast<double>(n_pairs));
}

namespace {

double pair_mean(const FeatureSubsetCollection& c, bool jaccard) {
    double sum = 0;
    std::size_t count = 0;
    for (int a = 0; a < c.B; ++a) {
        for (int b = a + 1; b < c.B; ++b) {
            const std::set<int> sa(c.subsets[a].begin(), c.subsets[a].end());
            int r = 0;
            for (int v : c.subsets[b]) r += sa.count(v);
            if (jaccard) {
                const int u = static_cast<int>(sa.size() + c.subsets[b].size()) - r;
                sum += static_cast<double>(r) / static_cast<double>(u);
            } else {
                const double k = static_cast<double>(c.k);
                sum += (static_cast<double>(r) * c.d - k * k) / (k * (c.d - c.k));
            }
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

}  // namespace

double mean_jaccard_bruteforce(const FeatureSubsetCollection& c) { return pair_mean(c, true); }

double mean_consistency_bruteforce(const FeatureSubsetCollection& c) { return pair_mean(c, false); }

Eigen::VectorXd maximize_partial_likelihood(const SurvivalDataset& ds, int max_iter) {
    const int p = ds.p();
    auto f = [&](const Eigen::VectorXd& w) { return -reference::log_partial_likelihood(w, ds); };

    // Nelder-Mead with two restarts around the incumbent
    Eigen::VectorXd best = Eigen::VectorXd::Zero(p);
    double best_val = f(best);
    double scale = 0.5;
    for (int round = 0; round < 3; ++round) {
        std::vector<Eigen::VectorXd> simplex(p + 1, best);
        for (int i = 0; i < p; ++i) simplex[i + 1][i] += scale;
        std::vector<double> vals(p + 1);
        for (int i = 0; i <= p; ++i) vals[i] = f(simplex[i]);

        for (int it = 0; it < max_iter; ++it) {
            std::vector<int> order(p + 1);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
            const int lo = order[0], hi = order[p], second_hi = order[p - 1];
            if (std::abs(vals[hi] - vals[lo]) < 1e-14 * (1.0 + std::abs(vals[lo]))) break;

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(p);
            for (int i = 0; i <= p; ++i)
                if (i != hi) centroid += simplex[i];
            centroid /= p;

            const Eigen::VectorXd refl = centroid + (centroid - simplex[hi]);
            const double f_refl = f(refl);
            if (f_refl < vals[lo]) {
                const Eigen::VectorXd exp_pt = centroid + 2.0 * (centroid - simplex[hi]);
                const double f_exp = f(exp_pt);
                if (f_exp < f_refl) {
                    simplex[hi] = exp_pt;
                    vals[hi] = f_exp;
                } else {
                    simplex[hi] = refl;
                    vals[hi] = f_refl;
                }
            } else if (f_refl < vals[second_hi]) {
                simplex[hi] = refl;
                vals[hi] = f_refl;
            } else {
                const Eigen::VectorXd contr = centroid + 0.5 * (simplex[hi] - centroid);
                const double f_contr = f(contr);
                if (f_contr < vals[hi]) {
                    simplex[hi] = contr;
                    vals[hi] = f_contr;
                } else {
                    for (int i = 0; i <= p; ++i) {
                        if (i == lo) continue;
                        simplex[i] = simplex[lo] + 0.5 * (simplex[i] - simplex[lo]);
                        vals[i] = f(simplex[i]);
                    }
                }
            }
        }
        int lo = 0;
        for (int i = 1; i <= p; ++i)
            if (vals[i] < vals[lo]) lo = i;
        if (vals[lo] < best_val) {
            best_val = vals[lo];
            best = simplex[lo];
        }
        scale *= 0.1;
    }
    return best;
}

}  // namespace coxstab::reference
