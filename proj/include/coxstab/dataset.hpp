#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "coxstab/errors.hpp"

namespace coxstab {

struct FeatureMeta {
    int feature_id = 0;     // column index in [0, p)
    std::string name;       // column header in the feature file
    std::string code;       // hierarchical code, e.g. "I50.1"
    int window_id = 0;      // 0 = static feature (age, gender, ...)
    std::string event_key;  // identity of the underlying recurring event
};

// Survival data with rows sorted by non-decreasing time. Treated as immutable
// after construction; concurrent reads are safe.
struct SurvivalDataset {
    Eigen::MatrixXd X;                 // n x p feature matrix
    Eigen::VectorXd times;             // days to readmission or censoring, > 0
    std::vector<std::uint8_t> events;  // 1 = readmission observed, 0 = censored
    std::vector<FeatureMeta> meta;     // one entry per column
    bool standardized = false;
    Eigen::VectorXd orig_means;        // recorded when standardize() runs
    Eigen::VectorXd orig_sds;          // population sd (divisor n); 0 for constant columns

    int n() const { return static_cast<int>(X.rows()); }
    int p() const { return static_cast<int>(X.cols()); }
    int n_events() const;
};

// Column means and population standard deviations (divisor n).
void column_moments(const Eigen::MatrixXd& X, Eigen::VectorXd& means, Eigen::VectorXd& sds);

// Sorts rows by time (stable) and checks dataset invariants. Used by every
// constructor path.
void sort_and_check(SurvivalDataset& ds);

// Feature file: comma-delimited, header `time,event,<names...>`.
// Meta file: comma-delimited, header `name,code,window_id,event_key`.
SurvivalDataset load_dataset(const std::string& features_path, const std::string& meta_path);
void save_dataset(const SurvivalDataset& ds, const std::string& features_path,
                  const std::string& meta_path);

// Replaces each column by (x - mean) / sd. Constant columns are centered only;
// their orig_sd is recorded as 0.
SurvivalDataset standardize(const SurvivalDataset& ds);

// Inputs of the event-count aggregator. Days are counted backwards from the
// index admission.
struct RawEvent {
    std::string patient;
    std::string event_key;
    std::string code;
    double days_before_index = 0;
};

struct Window {
    double lo = 0, hi = 0;  // [lo, hi)
};

struct IndexAdmission {
    std::string patient;  // unique per admission here
    double time = 0;      // days to readmission or censoring
    bool event = false;
};

// One feature per (code, window) pair observed anywhere in the stream; cell
// value = count of that code's events falling in that window. Events for
// patients without an index admission are ignored.
SurvivalDataset aggregate_events(const std::vector<RawEvent>& stream,
                                 const std::vector<Window>& windows,
                                 const std::vector<IndexAdmission>& index_admissions);

}  // namespace coxstab
