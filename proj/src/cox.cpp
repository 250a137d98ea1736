#include "coxstab/cox.hpp"

#include <cmath>
#include <vector>

namespace coxstab {

namespace detail {

CoxPass cox_pass(const Eigen::VectorXd& w, const SurvivalDataset& ds, bool need_coeff) {
    const int n = ds.n();
    if (w.size() != ds.p()) throw ContractError("cox: weight dimension does not match dataset");
    if (ds.n_events() == 0) throw ContractError("no uncensored observations");

    CoxPass out;
    out.eta.noalias() = ds.X * w;

    // tie group start: first index with the same time
    std::vector<int> group_start(n);
    group_start[0] = 0;
    for (int i = 1; i < n; ++i)
        group_start[i] = (ds.times[i] == ds.times[i - 1]) ? group_start[i - 1] : i;

    // suffix log-sum-exp with a running max shift
    Eigen::VectorXd log_risk(n);
    double run_max = out.eta[n - 1];
    double run_sum = 1.0;  // sum exp(eta_j - run_max) over the suffix
    log_risk[n - 1] = run_max;
    for (int i = n - 2; i >= 0; --i) {
        const double e = out.eta[i];
        if (e > run_max) {
            run_sum = run_sum * std::exp(run_max - e) + 1.0;
            run_max = e;
        } else {
            run_sum += std::exp(e - run_max);
        }
        log_risk[i] = run_max + std::log(run_sum);
    }

    double loglik = 0.0;
    for (int i = 0; i < n; ++i)
        if (ds.events[i]) loglik += out.eta[i] - log_risk[group_start[i]];
    out.loglik = loglik;

    if (!need_coeff) return out;

    // coeff[j] = sum over events l with r(l) <= j of exp(eta_j - logS_{r(l)}).
    // The reciprocal risk sums are accumulated in shifted form (shift, mass)
    // representing mass * exp(shift); every coeff entry stays <= q.
    out.coeff.resize(n);
    double shift = 0.0, mass = 0.0;
    int i = 0;
    while (i < n) {
        int g_end = i + 1;
        while (g_end < n && group_start[g_end] == i) ++g_end;
        int n_ev = 0;
        for (int j = i; j < g_end; ++j) n_ev += ds.events[j];
        if (n_ev > 0) {
            // new term exp(-logS_i) dominates all earlier ones: logS decreases in i
            const double new_shift = -log_risk[i];
            mass = (mass > 0.0 ? mass * std::exp(shift - new_shift) : 0.0) +
                   static_cast<double>(n_ev);
            shift = new_shift;
        }
        for (int j = i; j < g_end; ++j)
            out.coeff[j] = mass > 0.0 ? mass * std::exp(shift + out.eta[j]) : 0.0;
        i = g_end;
    }
    return out;
}

CoxObjectiveParts objective_unchecked(const Eigen::VectorXd& w, const SurvivalDataset& ds,
                                      const Laplacian& L, double alpha, double beta) {
    if (L.p != ds.p()) throw ContractError("cox: Laplacian dimension does not match dataset");
    CoxObjectiveParts parts;
    parts.loglik = detail::cox_pass(w, ds, false).loglik;
    parts.l1 = w.cwiseAbs().sum();
    parts.graph = quad_form(L, w);
    parts.total = parts.loglik / ds.n() - alpha * parts.l1 - 0.5 * beta * parts.graph;
    return parts;
}

}  // namespace detail

double log_partial_likelihood(const Eigen::VectorXd& w, const SurvivalDataset& ds) {
    return detail::cox_pass(w, ds, false).loglik;
}

CoxObjectiveParts objective(const Eigen::VectorXd& w, const SurvivalDataset& ds,
                            const Laplacian& L, double alpha, double beta) {
    if (!(alpha > 0)) throw ContractError("objective: alpha must be > 0");
    if (beta < 0) throw ContractError("objective: beta must be >= 0");
    return detail::objective_unchecked(w, ds, L, alpha, beta);
}

Eigen::VectorXd smooth_gradient(const Eigen::VectorXd& w, const SurvivalDataset& ds,
                                const Laplacian& L, double beta) {
    if (L.p != ds.p()) throw ContractError("cox: Laplacian dimension does not match dataset");
    if (beta < 0) throw ContractError("smooth_gradient: beta must be >= 0");
    const int n = ds.n();
    const int p = ds.p();
    const detail::CoxPass pass = detail::cox_pass(w, ds, true);

    Eigen::VectorXd grad(p);
    const double inv_n = 1.0 / n;
    // per-column accumulation; columns are contiguous and independent
#pragma omp parallel for schedule(static) if (p >= 16)
    for (int f = 0; f < p; ++f) {
        const double* col = ds.X.col(f).data();
        double ev_sum = 0.0, risk_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            if (ds.events[i]) ev_sum += col[i];
            risk_sum += pass.coeff[i] * col[i];
        }
        grad[f] = (ev_sum - risk_sum) * inv_n;
    }
    if (beta > 0) grad.noalias() -= beta * L.matvec(w);
    return grad;
}

}  // namespace coxstab
