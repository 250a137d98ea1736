#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "coxstab/dataset.hpp"
#include "coxstab/rng.hpp"

namespace coxstab::testing {

// meta where every feature is unrelated to every other
inline std::vector<FeatureMeta> plain_meta(int p) {
    std::vector<FeatureMeta> meta(p);
    for (int j = 0; j < p; ++j) {
        meta[j].feature_id = j;
        meta[j].name = "f" + std::to_string(j);
        meta[j].code = "F" + std::to_string(j) + "x";
        meta[j].window_id = 0;
        meta[j].event_key = meta[j].code;
    }
    return meta;
}

inline SurvivalDataset make_dataset(const std::vector<std::vector<double>>& rows,
                                    const std::vector<double>& times,
                                    const std::vector<int>& events) {
    SurvivalDataset ds;
    const int n = static_cast<int>(rows.size());
    const int p = static_cast<int>(rows.front().size());
    ds.X.resize(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) ds.X(i, j) = rows[i][j];
    ds.times = Eigen::Map<const Eigen::VectorXd>(times.data(), n);
    ds.events.resize(n);
    for (int i = 0; i < n; ++i) ds.events[i] = static_cast<std::uint8_t>(events[i]);
    ds.meta = plain_meta(p);
    sort_and_check(ds);
    return ds;
}

// small random instance with optional ties and censoring
inline SurvivalDataset random_dataset(Rng& rng, int n, int p, double censor_prob,
                                      bool with_ties = true) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(p));
    std::vector<double> times(n);
    std::vector<int> events(n);
    int q = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) rows[i][j] = rng.normal();
        times[i] = with_ties ? 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(n)))
                             : rng.exponential(1.0);
        events[i] = rng.uniform01() >= censor_prob ? 1 : 0;
        q += events[i];
    }
    if (q == 0) events[static_cast<std::size_t>(rng.below(n))] = 1;
    return make_dataset(rows, times, events);
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("coxstab_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace coxstab::testing
