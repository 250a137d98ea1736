#include <doctest.h>

#include <cmath>
#include <limits>

#include "coxstab/optimizer.hpp"
#include "coxstab/reference.hpp"
#include "coxstab/rng.hpp"
#include "coxstab/synthgen.hpp"
#include "test_helpers.hpp"

using namespace coxstab;

namespace {

Laplacian empty_laplacian(int p) {
    FeatureGraph g;
    g.p = p;
    return laplacian(g);
}

}  // namespace

TEST_CASE("soft_threshold definition") {
    CHECK(soft_threshold(1.5, 1.0) == 0.5);
    CHECK(soft_threshold(-0.3, 0.5) == 0.0);
    CHECK(soft_threshold(0.0, 0.0) == 0.0);
    CHECK(soft_threshold(-2.0, 0.5) == -1.5);
    CHECK_THROWS_AS(soft_threshold(1.0, -0.1), ContractError);
}

TEST_CASE("alpha above the gradient at zero keeps all weights at zero") {
    Rng rng(31);
    const SurvivalDataset ds = standardize(testing::random_dataset(rng, 40, 6, 0.2));
    const Laplacian L = empty_laplacian(6);
    const Eigen::VectorXd g0 = smooth_gradient(Eigen::VectorXd::Zero(6), ds, L, 0.0);
    const double alpha = 1.01 * g0.cwiseAbs().maxCoeff();
    const CoxModel model = fit(ds, L, alpha, 0.0);
    CHECK(model.converged);
    CHECK(model.weights.cwiseAbs().maxCoeff() == 0.0);
    CHECK(model.nonzero_count() == 0);
}

TEST_CASE("identical columns joined by an edge get equal weights under beta > 0") {
    Rng rng(37);
    SurvivalDataset ds = testing::random_dataset(rng, 50, 4, 0.2);
    ds.X.col(1) = ds.X.col(0);
    const SurvivalDataset std_ds = standardize(ds);
    FeatureGraph g;
    g.p = 4;
    g.edges = {{0, 1, EdgeTag::Code}};
    const Laplacian L = laplacian(g);
    const CoxModel model = fit(std_ds, L, 0.01, 1.0);
    CHECK(std::abs(model.weights[0] - model.weights[1]) < 1e-6);
}

TEST_CASE("near-unregularized fit matches a derivative-free maximizer") {
    Rng rng(41);
    const SurvivalDataset ds = standardize(testing::random_dataset(rng, 20, 3, 0.2, false));
    const Laplacian L = empty_laplacian(3);
    FitOptions opts;
    opts.tol = 1e-12;
    opts.max_iter = 100000;
    const CoxModel model = fit(ds, L, 1e-8, 0.0, opts);
    const double fitted = log_partial_likelihood(model.weights, ds);
    const Eigen::VectorXd w_ref = reference::maximize_partial_likelihood(ds);
    const double oracle = reference::log_partial_likelihood(w_ref, ds);
    CHECK(fitted == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("objective trace ascends monotonically") {
    Rng rng(43);
    const SurvivalDataset ds = standardize(testing::random_dataset(rng, 60, 8, 0.3));
    FeatureGraph g;
    g.p = 8;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j)
            if (rng.uniform01() < 0.3) g.edges.push_back({i, j, EdgeTag::Code});
    const Laplacian L = laplacian(g);
    const CoxModel model = fit(ds, L, 0.01, 0.2);
    REQUIRE(model.objective_trace.size() >= 2);
    for (std::size_t i = 1; i < model.objective_trace.size(); ++i)
        CHECK(model.objective_trace[i] >= model.objective_trace[i - 1] - 1e-12);
    if (model.converged) {
        const double last = model.objective_trace.back();
        const double prev = model.objective_trace[model.objective_trace.size() - 2];
        CHECK(std::abs(last - prev) / std::max(std::abs(last), 1.0) < 1e-7);
    }
}

TEST_CASE("a converged solution is a fixed point of the iteration") {
    Rng rng(47);
    const SurvivalDataset ds = standardize(testing::random_dataset(rng, 50, 5, 0.25));
    const Laplacian L = empty_laplacian(5);
    const CoxModel first = fit(ds, L, 0.02, 0.0);
    REQUIRE(first.converged);
    const CoxModel again = fit(ds, L, 0.02, 0.0, {}, &first.weights);
    CHECK(again.n_iter <= 2);
    // the restart may slide along a near-flat direction, but only within tol
    const double rel_obj = std::abs(again.objective_trace.back() - first.objective_trace.back()) /
                           std::max(std::abs(first.objective_trace.back()), 1.0);
    CHECK(rel_obj < 2e-7);
    CHECK((again.weights - first.weights).cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("bit-identical refits") {
    Rng rng(53);
    const SurvivalDataset ds = standardize(testing::random_dataset(rng, 40, 6, 0.3));
    const Laplacian L = empty_laplacian(6);
    const CoxModel a = fit(ds, L, 0.01, 0.0);
    const CoxModel b = fit(ds, L, 0.01, 0.0);
    CHECK(a.weights == b.weights);
    CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("sparsity is non-increasing in alpha on a fixed instance") {
    SynthConfig cfg;
    cfg.n = 150;
    cfg.n_groups = 3;
    cfg.group_size = 4;
    cfg.n_noise = 8;
    cfg.within_corr = 0.8;
    cfg.true_weights = {{0, 1.0}, {4, -1.0}};
    cfg.censor_rate = 0.2;
    cfg.seed = 5;
    const SurvivalDataset ds = standardize(generate(cfg).ds);
    const Laplacian L = laplacian(build_graph(ds.meta, 2));
    int prev = ds.p() + 1;
    for (double alpha : {0.001, 0.01, 0.1}) {
        const CoxModel model = fit(ds, L, alpha, 0.0);
        CHECK(model.nonzero_count() <= prev);
        prev = model.nonzero_count();
    }
}

TEST_CASE("beta equalizes a duplicated column pair") {
    Rng rng(59);
    SurvivalDataset raw = testing::random_dataset(rng, 60, 4, 0.2);
    raw.X.col(1) = raw.X.col(0);
    const SurvivalDataset ds = standardize(raw);
    FeatureGraph g;
    g.p = 4;
    g.edges = {{0, 1, EdgeTag::Code}};
    const Laplacian L = laplacian(g);
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double beta : {0.0, 0.1, 1.0, 10.0}) {
        const CoxModel model = fit(ds, L, 0.01, beta);
        const double gap = std::abs(model.weights[0] - model.weights[1]);
        CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
    }
}

TEST_CASE("fit option contracts") {
    Rng rng(61);
    const SurvivalDataset ds = standardize(testing::random_dataset(rng, 20, 3, 0.2));
    const Laplacian L = empty_laplacian(3);
    FitOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(fit(ds, L, 0.1, 0.0, bad), ContractError);
    bad = {};
    bad.step_shrink = 1.0;
    CHECK_THROWS_AS(fit(ds, L, 0.1, 0.0, bad), ContractError);
    CHECK_THROWS_AS(fit(ds, L, -0.1, 0.0), ContractError);
    CHECK_THROWS_AS(fit(ds, L, 0.1, -0.5), ContractError);
}
