#include "coxstab/synthgen.hpp"

#include <cmath>
#include <string>

#include "coxstab/rng.hpp"

namespace coxstab {

namespace {

// mean censored fraction under Exp(c) censoring against per-subject hazards
double censored_fraction(double c, const Eigen::VectorXd& hazards) {
    double acc = 0;
    for (Eigen::Index i = 0; i < hazards.size(); ++i) acc += c / (c + hazards[i]);
    return acc / static_cast<double>(hazards.size());
}

}  // namespace

SynthResult generate(const SynthConfig& cfg) {
    if (cfg.n < 2) throw ContractError("synthgen: need n >= 2");
    if (cfg.n_groups < 0 || cfg.group_size < 0 || cfg.n_noise < 0)
        throw ContractError("synthgen: counts must be >= 0");
    const int p = cfg.n_groups * cfg.group_size + cfg.n_noise;
    if (p < 2) throw ContractError("synthgen: need at least 2 features");
    if (!(cfg.within_corr >= 0 && cfg.within_corr < 1))
        throw ContractError("synthgen: within_corr must be in [0, 1)");
    if (!(cfg.baseline_rate > 0)) throw ContractError("synthgen: baseline_rate must be > 0");
    if (!(cfg.censor_rate >= 0 && cfg.censor_rate < 1))
        throw ContractError("synthgen: censor_rate must be in [0, 1)");
    if (cfg.n_groups > 26) throw ContractError("synthgen: at most 26 groups supported");
    if (cfg.n_noise > 19 * 36)
        throw ContractError("synthgen: at most 684 noise features supported");

    SynthResult out;
    out.truth.true_weights = Eigen::VectorXd::Zero(p);
    for (const auto& [idx, val] : cfg.true_weights) {
        if (idx < 0 || idx >= p) throw ContractError("synthgen: true weight index out of range");
        out.truth.true_weights[idx] = val;
    }
    out.truth.group_of.assign(p, -1);

    SurvivalDataset& ds = out.ds;
    ds.X.resize(cfg.n, p);
    ds.times.resize(cfg.n);
    ds.events.assign(cfg.n, 1);
    ds.meta.resize(p);

    const double sf = std::sqrt(cfg.within_corr);
    const double se = std::sqrt(1.0 - cfg.within_corr);

    Rng x_rng = Rng::substream(cfg.seed, 0);
    for (int i = 0; i < cfg.n; ++i) {
        int f = 0;
        for (int g = 0; g < cfg.n_groups; ++g) {
            const double z = x_rng.normal();
            for (int m = 0; m < cfg.group_size; ++m, ++f)
                ds.X(i, f) = sf * z + se * x_rng.normal();
        }
        for (int j = 0; j < cfg.n_noise; ++j, ++f) ds.X(i, f) = x_rng.normal();
    }

    {
        int f = 0;
        for (int g = 0; g < cfg.n_groups; ++g) {
            const std::string tag = std::string("G") + static_cast<char>('A' + g);
            for (int m = 0; m < cfg.group_size; ++m, ++f) {
                ds.meta[f].feature_id = f;
                ds.meta[f].code = tag + "." + std::to_string(m);
                ds.meta[f].name = tag + "m" + std::to_string(m);
                ds.meta[f].event_key = tag;
                ds.meta[f].window_id = m;
                out.truth.group_of[f] = g;
            }
        }
        for (int j = 0; j < cfg.n_noise; ++j, ++f) {
            // two-character codes past 'G', unique in their first two characters
            const int low = j % 36;
            const std::string code{static_cast<char>('H' + j / 36),
                                   static_cast<char>(low < 26 ? 'A' + low : '0' + low - 26)};
            ds.meta[f].feature_id = f;
            ds.meta[f].code = code;
            ds.meta[f].name = code;
            ds.meta[f].event_key = code;
            ds.meta[f].window_id = 0;
        }
    }

    const Eigen::VectorXd eta = ds.X * out.truth.true_weights;
    Eigen::VectorXd hazards(cfg.n);
    for (int i = 0; i < cfg.n; ++i) hazards[i] = cfg.baseline_rate * std::exp(eta[i]);

    Rng t_rng = Rng::substream(cfg.seed, 1);
    Eigen::VectorXd event_times(cfg.n);
    for (int i = 0; i < cfg.n; ++i) event_times[i] = t_rng.exponential(hazards[i]);

    if (cfg.censor_rate > 0) {
        // bisect on log(c); censored fraction is monotone increasing in c
        double lo = std::log(hazards.minCoeff()) - 30.0;
        double hi = std::log(hazards.maxCoeff()) + 30.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (censored_fraction(std::exp(mid), hazards) < cfg.censor_rate)
                lo = mid;
            else
                hi = mid;
        }
        const double c = std::exp(0.5 * (lo + hi));
        out.truth.censor_hazard = c;
        Rng c_rng = Rng::substream(cfg.seed, 2);
        for (int i = 0; i < cfg.n; ++i) {
            const double censor_time = c_rng.exponential(c);
            if (censor_time < event_times[i]) {
                ds.times[i] = censor_time;
                ds.events[i] = 0;
            } else {
                ds.times[i] = event_times[i];
            }
        }
    } else {
        ds.times = event_times;
    }

    ds.standardized = false;
    sort_and_check(ds);
    return out;
}

}  // namespace coxstab
