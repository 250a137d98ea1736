#include "coxstab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace coxstab {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& cell, std::size_t line_no, std::size_t col_no,
                    const std::string& path) {
    double value = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    // from_chars accepts "inf"/"nan" spellings; those are data errors here
    if (ec != std::errc{} || ptr != last || cell.empty() || !std::isfinite(value)) {
        throw ParseError(path + ": non-numeric cell '" + cell + "' at line " +
                         std::to_string(line_no) + ", column " + std::to_string(col_no));
    }
    return value;
}

long parse_long(const std::string& cell, std::size_t line_no, std::size_t col_no,
                const std::string& path) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        throw ParseError(path + ": non-integer cell '" + cell + "' at line " +
                         std::to_string(line_no) + ", column " + std::to_string(col_no));
    }
    return value;
}

}  // namespace

int SurvivalDataset::n_events() const {
    int q = 0;
    for (std::uint8_t e : events) q += e;
    return q;
}

void column_moments(const Eigen::MatrixXd& X, Eigen::VectorXd& means, Eigen::VectorXd& sds) {
    const auto n = static_cast<double>(X.rows());
    means = X.colwise().mean();
    sds.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        sds[j] = std::sqrt((X.col(j).array() - means[j]).square().sum() / n);
    }
}

void sort_and_check(SurvivalDataset& ds) {
    const int n = ds.n();
    if (n == 0) throw ContractError("dataset has no rows");
    if (static_cast<int>(ds.events.size()) != n || ds.times.size() != n)
        throw ContractError("dataset rows, times and events disagree in length");
    if (static_cast<int>(ds.meta.size()) != ds.p())
        throw ContractError("dataset meta does not match feature count");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ds.times[a] < ds.times[b]; });

    Eigen::MatrixXd X(n, ds.p());
    Eigen::VectorXd times(n);
    std::vector<std::uint8_t> events(n);
    for (int i = 0; i < n; ++i) {
        X.row(i) = ds.X.row(order[i]);
        times[i] = ds.times[order[i]];
        events[i] = ds.events[order[i]];
    }
    ds.X = std::move(X);
    ds.times = std::move(times);
    ds.events = std::move(events);

    for (int i = 0; i < n; ++i) {
        if (!(ds.times[i] > 0))
            throw ContractError("non-positive time at sorted row " + std::to_string(i));
    }
    for (int j = 0; j < ds.p(); ++j) {
        if (ds.meta[j].feature_id != j)
            throw ContractError("feature ids must be contiguous 0..p-1");
        if (ds.meta[j].code.empty())
            throw ContractError("empty code for feature " + std::to_string(j));
        if (ds.meta[j].window_id < 0)
            throw ContractError("negative window_id for feature " + std::to_string(j));
    }
}

SurvivalDataset load_dataset(const std::string& features_path, const std::string& meta_path) {
    std::ifstream fin(features_path);
    if (!fin) throw ParseError("cannot open feature file: " + features_path);

    std::string line;
    if (!std::getline(fin, line)) throw ParseError(features_path + ": empty file");
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "time" || header[1] != "event")
        throw ParseError(features_path + ": header must start with 'time,event' followed by feature names");
    const std::size_t p = header.size() - 2;
    std::vector<std::string> names(header.begin() + 2, header.end());
    {
        std::set<std::string> seen;
        for (const auto& name : names)
            if (!seen.insert(name).second)
                throw ParseError(features_path + ": duplicate feature column '" + name + "'");
    }

    std::vector<double> times_v;
    std::vector<std::uint8_t> events_v;
    std::vector<double> cells;
    std::size_t line_no = 1;
    while (std::getline(fin, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> row = split_csv_line(line);
        if (row.size() != header.size())
            throw ParseError(features_path + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(row.size()) + " columns, expected " +
                             std::to_string(header.size()));
        const double t = parse_double(row[0], line_no, 1, features_path);
        if (!(t > 0))
            throw ParseError(features_path + ": non-positive time at line " +
                             std::to_string(line_no) + ", column 1");
        const long ev = parse_long(row[1], line_no, 2, features_path);
        if (ev != 0 && ev != 1)
            throw ParseError(features_path + ": event must be 0 or 1 at line " +
                             std::to_string(line_no) + ", column 2");
        times_v.push_back(t);
        events_v.push_back(static_cast<std::uint8_t>(ev));
        for (std::size_t j = 0; j < p; ++j) {
            cells.push_back(parse_double(row[2 + j], line_no, 3 + j, features_path));
        }
    }
    if (times_v.empty()) throw ParseError(features_path + ": no data rows");

    // meta file, joined to columns by name
    std::ifstream min(meta_path);
    if (!min) throw ParseError("cannot open meta file: " + meta_path);
    if (!std::getline(min, line)) throw ParseError(meta_path + ": empty file");
    if (split_csv_line(line) != std::vector<std::string>{"name", "code", "window_id", "event_key"})
        throw ParseError(meta_path + ": header must be 'name,code,window_id,event_key'");

    std::map<std::string, FeatureMeta> by_name;
    std::size_t meta_line = 1;
    while (std::getline(min, line)) {
        ++meta_line;
        if (line.empty()) continue;
        std::vector<std::string> row = split_csv_line(line);
        if (row.size() != 4)
            throw ParseError(meta_path + ": line " + std::to_string(meta_line) +
                             " has " + std::to_string(row.size()) + " columns, expected 4");
        FeatureMeta fm;
        fm.name = row[0];
        fm.code = row[1];
        fm.window_id = static_cast<int>(parse_long(row[2], meta_line, 3, meta_path));
        fm.event_key = row[3];
        if (fm.code.empty())
            throw ParseError(meta_path + ": empty code at line " + std::to_string(meta_line));
        if (fm.window_id < 0)
            throw ParseError(meta_path + ": negative window_id at line " + std::to_string(meta_line));
        if (!by_name.emplace(fm.name, fm).second)
            throw ParseError(meta_path + ": duplicate feature name '" + fm.name + "' at line " +
                             std::to_string(meta_line));
    }
    if (by_name.size() != p)
        throw ParseError(meta_path + ": describes " + std::to_string(by_name.size()) +
                         " features but feature file has " + std::to_string(p));

    SurvivalDataset ds;
    const auto n = static_cast<Eigen::Index>(times_v.size());
    ds.X.resize(n, static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j)
            ds.X(i, j) = cells[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)];
    ds.times = Eigen::Map<Eigen::VectorXd>(times_v.data(), n);
    ds.events = std::move(events_v);
    ds.meta.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        auto it = by_name.find(names[j]);
        if (it == by_name.end())
            throw ParseError(meta_path + ": no meta row for feature column '" + names[j] + "'");
        ds.meta[j] = it->second;
        ds.meta[j].feature_id = static_cast<int>(j);
    }
    ds.standardized = false;
    sort_and_check(ds);
    return ds;
}

void save_dataset(const SurvivalDataset& ds, const std::string& features_path,
                  const std::string& meta_path) {
    std::ofstream fout(features_path);
    if (!fout) throw ParseError("cannot write feature file: " + features_path);
    fout << "time,event";
    for (const auto& fm : ds.meta) fout << "," << fm.name;
    fout << "\n";
    char buf[64];
    for (int i = 0; i < ds.n(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", ds.times[i]);
        fout << buf << "," << int(ds.events[i]);
        for (int j = 0; j < ds.p(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.X(i, j));
            fout << "," << buf;
        }
        fout << "\n";
    }
    std::ofstream mout(meta_path);
    if (!mout) throw ParseError("cannot write meta file: " + meta_path);
    mout << "name,code,window_id,event_key\n";
    for (const auto& fm : ds.meta)
        mout << fm.name << "," << fm.code << "," << fm.window_id << "," << fm.event_key << "\n";
}

SurvivalDataset standardize(const SurvivalDataset& ds) {
    if (ds.standardized) throw ContractError("dataset is already standardized");
    SurvivalDataset out = ds;
    column_moments(ds.X, out.orig_means, out.orig_sds);
    for (int j = 0; j < out.p(); ++j) {
        out.X.col(j).array() -= out.orig_means[j];
        if (out.orig_sds[j] > 0) out.X.col(j) /= out.orig_sds[j];
    }
    out.standardized = true;
    return out;
}

SurvivalDataset aggregate_events(const std::vector<RawEvent>& stream,
                                 const std::vector<Window>& windows,
                                 const std::vector<IndexAdmission>& index_admissions) {
    if (stream.empty()) throw ContractError("event stream is empty");
    if (windows.empty()) throw ContractError("no aggregation windows given");
    if (index_admissions.empty()) throw ContractError("no index admissions given");
    for (std::size_t a = 0; a < windows.size(); ++a) {
        if (!(windows[a].lo < windows[a].hi))
            throw ContractError("window " + std::to_string(a) + " is empty or inverted");
        for (std::size_t b = a + 1; b < windows.size(); ++b) {
            if (windows[a].lo < windows[b].hi && windows[b].lo < windows[a].hi)
                throw ContractError("windows " + std::to_string(a) + " and " +
                                    std::to_string(b) + " overlap");
        }
    }

    std::map<std::string, int> row_of;
    for (std::size_t i = 0; i < index_admissions.size(); ++i) {
        if (!row_of.emplace(index_admissions[i].patient, static_cast<int>(i)).second)
            throw ContractError("duplicate patient '" + index_admissions[i].patient +
                                "' in index admissions");
    }

    // first pass: which (code, window) pairs occur at all
    std::map<std::pair<std::string, int>, std::string> feature_keys;  // -> event_key
    for (const auto& ev : stream) {
        if (ev.days_before_index < 0)
            throw ContractError("event with negative days_before_index for patient '" +
                                ev.patient + "'");
        for (std::size_t wi = 0; wi < windows.size(); ++wi) {
            if (ev.days_before_index >= windows[wi].lo && ev.days_before_index < windows[wi].hi) {
                feature_keys.emplace(std::make_pair(ev.code, static_cast<int>(wi)), ev.event_key);
            }
        }
    }
    if (feature_keys.empty())
        throw ContractError("no event falls inside any aggregation window");

    std::map<std::pair<std::string, int>, int> col_of;
    SurvivalDataset ds;
    ds.meta.reserve(feature_keys.size());
    for (const auto& [key, ekey] : feature_keys) {
        FeatureMeta fm;
        fm.feature_id = static_cast<int>(ds.meta.size());
        fm.code = key.first;
        fm.window_id = key.second;
        fm.event_key = ekey;
        fm.name = key.first + "_w" + std::to_string(key.second);
        col_of[key] = fm.feature_id;
        ds.meta.push_back(std::move(fm));
    }

    const auto n = static_cast<Eigen::Index>(index_admissions.size());
    const auto p = static_cast<Eigen::Index>(ds.meta.size());
    ds.X = Eigen::MatrixXd::Zero(n, p);
    ds.times.resize(n);
    ds.events.resize(index_admissions.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        ds.times[i] = index_admissions[i].time;
        ds.events[i] = index_admissions[i].event ? 1 : 0;
    }
    for (const auto& ev : stream) {
        auto rit = row_of.find(ev.patient);
        if (rit == row_of.end()) continue;
        for (std::size_t wi = 0; wi < windows.size(); ++wi) {
            if (ev.days_before_index >= windows[wi].lo && ev.days_before_index < windows[wi].hi) {
                ds.X(rit->second, col_of.at({ev.code, static_cast<int>(wi)})) += 1.0;
            }
        }
    }
    ds.standardized = false;
    sort_and_check(ds);
    return ds;
}

}  // namespace coxstab
