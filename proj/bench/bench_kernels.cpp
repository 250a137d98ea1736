// Timing comparison of the serial reference implementations against the
// production kernels, single-threaded and with the full OpenMP team.
//
//   coxstab_bench [n] [p] [bootstraps]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "coxstab/cox.hpp"
#include "coxstab/reference.hpp"
#include "coxstab/rng.hpp"
#include "coxstab/stability.hpp"

using namespace coxstab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

// raw instance, no synthetic-code semantics: the kernels only see numbers
SurvivalDataset bench_instance(int n, int p, Rng& rng) {
    SurvivalDataset ds;
    ds.X.resize(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) ds.X(i, j) = rng.normal();
    ds.times.resize(n);
    ds.events.resize(n);
    for (int i = 0; i < n; ++i) {
        ds.times[i] = rng.exponential(1.0);
        ds.events[i] = rng.uniform01() < 0.8 ? 1 : 0;
    }
    ds.events[0] = 1;
    ds.meta.resize(p);
    for (int j = 0; j < p; ++j) {
        ds.meta[j].feature_id = j;
        ds.meta[j].name = "f" + std::to_string(j);
        ds.meta[j].code = "F" + std::to_string(j) + "b";
        ds.meta[j].event_key = ds.meta[j].code;
    }
    sort_and_check(ds);
    return ds;
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 400;
    const int bench_p = argc > 2 ? std::atoi(argv[2]) : 600;
    const int B = argc > 3 ? std::atoi(argv[3]) : 16;

    Rng rng(7);
    const SurvivalDataset ds = standardize(bench_instance(n, bench_p, rng));
    // path plus sparse random chords, roughly 1.5 edges per node
    FeatureGraph g;
    g.p = bench_p;
    for (int i = 0; i + 1 < bench_p; ++i) g.edges.push_back({i, i + 1, EdgeTag::Code});
    for (int i = 0; i < bench_p; ++i) {
        if (rng.uniform01() < 0.5) {
            const int j = static_cast<int>(rng.below(bench_p));
            if (j != i) g.edges.push_back({std::min(i, j), std::max(i, j), EdgeTag::Code});
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end(),
                              [](const GraphEdge& a, const GraphEdge& b) {
                                  return a.i == b.i && a.j == b.j;
                              }),
                  g.edges.end());
    const Laplacian L = laplacian(g);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(ds.p());
    for (int i = 0; i < ds.p(); ++i) w[i] = 0.05 * ((i % 7) - 3);

    const int max_threads = omp_get_max_threads();
    std::printf("n=%d p=%d events=%d edges=%zu threads=%d\n\n", ds.n(), ds.p(), ds.n_events(),
                L.edges.size(), max_threads);

    // gradient kernel: reference vs production, 1 thread vs full team
    const Eigen::VectorXd g_ref = reference::smooth_gradient(w, ds, L, 0.5);
    const double t_ref = time_best_of(3, [&] { reference::smooth_gradient(w, ds, L, 0.5); });

    omp_set_num_threads(1);
    const Eigen::VectorXd g_serial = smooth_gradient(w, ds, L, 0.5);
    const double t_serial = time_best_of(5, [&] { smooth_gradient(w, ds, L, 0.5); });

    omp_set_num_threads(max_threads);
    const Eigen::VectorXd g_par = smooth_gradient(w, ds, L, 0.5);
    const double t_par = time_best_of(5, [&] { smooth_gradient(w, ds, L, 0.5); });

    std::printf("smooth_gradient\n");
    std::printf("  reference (O(n^2 p))    %10.4f ms\n", 1e3 * t_ref);
    std::printf("  kernel, 1 thread        %10.4f ms   (%.1fx vs reference)\n", 1e3 * t_serial,
                t_ref / t_serial);
    std::printf("  kernel, %2d threads      %10.4f ms   (%.2fx vs 1 thread)\n", max_threads,
                1e3 * t_par, t_serial / t_par);
    std::printf("  max |kernel - reference| = %.3e, max |1t - %dt| = %.3e\n\n",
                (g_serial - g_ref).cwiseAbs().maxCoeff(), max_threads,
                (g_par - g_serial).cwiseAbs().maxCoeff());

    // bootstrap harness: replicate-level parallelism
    FitOptions fopts;
    fopts.max_iter = 400;
    omp_set_num_threads(1);
    const auto t0 = std::chrono::steady_clock::now();
    const auto imp1 = bootstrap_importances(ds, L, 0.02, 0.1, B, 11, fopts);
    const double t_boot1 = seconds_since(t0);
    omp_set_num_threads(max_threads);
    const auto t1 = std::chrono::steady_clock::now();
    const auto impN = bootstrap_importances(ds, L, 0.02, 0.1, B, 11, fopts);
    const double t_bootN = seconds_since(t1);

    double max_diff = 0;
    for (int b = 0; b < B; ++b)
        max_diff = std::max(max_diff, (imp1[b] - impN[b]).cwiseAbs().maxCoeff());
    std::printf("bootstrap_importances (B=%d)\n", B);
    std::printf("  1 thread                %10.2f ms\n", 1e3 * t_boot1);
    std::printf("  %2d threads              %10.2f ms   (%.2fx)\n", max_threads, 1e3 * t_bootN,
                t_boot1 / t_bootN);
    std::printf("  max |1t - %dt| = %.3e (must be 0)\n", max_threads, max_diff);
    return max_diff == 0.0 ? 0 : 1;
}
