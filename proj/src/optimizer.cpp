#include "coxstab/optimizer.hpp"

#include <cmath>

namespace coxstab {

int CoxModel::nonzero_count() const {
    int c = 0;
    for (Eigen::Index i = 0; i < weights.size(); ++i)
        if (weights[i] != 0.0) ++c;
    return c;
}

double soft_threshold(double v, double t) {
    if (t < 0) throw ContractError("soft_threshold: threshold must be >= 0");
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

CoxModel fit(const SurvivalDataset& ds, const Laplacian& L, double alpha, double beta,
             const FitOptions& opts, const Eigen::VectorXd* warm_start) {
    if (alpha < 0) throw ContractError("fit: alpha must be >= 0");
    if (beta < 0) throw ContractError("fit: beta must be >= 0");
    if (!(opts.tol > 0)) throw ContractError("fit: tol must be > 0");
    if (opts.max_iter < 1) throw ContractError("fit: max_iter must be >= 1");
    if (!(opts.step_shrink > 0 && opts.step_shrink < 1))
        throw ContractError("fit: step_shrink must be in (0, 1)");
    if (warm_start && warm_start->size() != ds.p())
        throw ContractError("fit: warm start dimension mismatch");

    const int p = ds.p();
    Eigen::VectorXd w = warm_start ? *warm_start : Eigen::VectorXd::Zero(p);

    CoxModel model;
    model.alpha = alpha;
    model.beta = beta;
    model.standardization_means = ds.orig_means;
    model.standardization_sds = ds.orig_sds;

    CoxObjectiveParts cur = detail::objective_unchecked(w, ds, L, alpha, beta);
    if (!std::isfinite(cur.total))
        throw NumericalError("fit: non-finite objective at iteration 0");
    model.objective_trace.push_back(cur.total);

    constexpr double kAcceptSlack = 1e-12;
    Eigen::VectorXd w_next(p);
    bool converged = false;
    int it = 0;
    for (; it < opts.max_iter && !converged; ++it) {
        const Eigen::VectorXd g = smooth_gradient(w, ds, L, beta);
        double step = opts.step_init;
        CoxObjectiveParts next;
        bool accepted = false;
        bool saw_nonfinite = false;
        // shrink until the full objective does not decrease; at tiny steps the
        // candidate collapses onto w, so the slack guarantees termination
        for (int bt = 0; bt < 200 && !accepted; ++bt) {
            for (int f = 0; f < p; ++f)
                w_next[f] = soft_threshold(w[f] + step * g[f], step * alpha);
            next = detail::objective_unchecked(w_next, ds, L, alpha, beta);
            if (!std::isfinite(next.total)) {
                saw_nonfinite = true;
                step *= opts.step_shrink;
                continue;
            }
            if (next.total >= cur.total - kAcceptSlack)
                accepted = true;
            else
                step *= opts.step_shrink;
        }
        if (!accepted) {
            if (saw_nonfinite && !std::isfinite(next.total))
                throw NumericalError("fit: non-finite objective at iteration " +
                                     std::to_string(it + 1));
            converged = true;  // no acceptable step within machine precision
            break;
        }

        w.swap(w_next);
        model.objective_trace.push_back(next.total);
        const double rel =
            std::abs(next.total - cur.total) / std::max(std::abs(next.total), 1.0);
        cur = next;
        if (rel < opts.tol) converged = true;
    }

    model.weights = std::move(w);
    model.n_iter = it;
    model.converged = converged;
    return model;
}

}  // namespace coxstab
