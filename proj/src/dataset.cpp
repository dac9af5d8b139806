#include "cbos/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <system_error>

namespace cbos {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

// Distinct labels with counts, keyed lexicographically.
std::map<std::string, Index> label_counts(const Dataset& d) {
    std::map<std::string, Index> counts;
    for (const auto& label : d.labels) ++counts[label];
    return counts;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

void validate(const Dataset& d) {
    if (d.features.rows() == 0) throw DataError("dataset is empty");
    if (d.features.rows() != static_cast<Index>(d.labels.size()))
        throw DataError("feature rows (" + std::to_string(d.features.rows()) +
                        ") do not match label count (" + std::to_string(d.labels.size()) + ")");
    if (d.features.cols() != static_cast<Index>(d.feature_names.size()))
        throw DataError("feature columns (" + std::to_string(d.features.cols()) +
                        ") do not match feature_names (" + std::to_string(d.feature_names.size()) +
                        ")");
    const auto counts = label_counts(d);
    if (counts.size() != 2)
        throw DataError("dataset is not binary: found " + std::to_string(counts.size()) +
                        " distinct label(s), expected 2");
    if (!d.features.allFinite()) throw DataError("feature matrix contains non-finite values");
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& minority_label) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file (missing header row)");
    const std::vector<std::string> header = split_line(line);

    Index label_idx = -1;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == label_column) {
            label_idx = static_cast<Index>(c);
            break;
        }
    if (label_idx < 0)
        throw DataError(path + ": label column '" + label_column + "' not found in header");

    Dataset d;
    d.label_name = label_column;
    d.label_column = label_idx;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (static_cast<Index>(c) != label_idx) d.feature_names.push_back(header[c]);

    std::vector<double> values;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " columns, got " +
                            std::to_string(cells.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (static_cast<Index>(c) == label_idx) {
                d.labels.push_back(cells[c]);
                continue;
            }
            double v = 0.0;
            const char* first = cells[c].data();
            const char* last = first + cells[c].size();
            const auto res = std::from_chars(first, last, v);
            if (res.ec != std::errc() || res.ptr != last)
                throw DataError(path + ":" + std::to_string(line_no) + ": column '" + header[c] +
                                "' value '" + cells[c] + "' is not a real number");
            values.push_back(v);
        }
    }
    if (d.labels.empty()) throw DataError(path + ": no data rows");

    const Index n = static_cast<Index>(d.labels.size());
    const Index dims = static_cast<Index>(d.feature_names.size());
    d.features.resize(n, dims);
    for (Index r = 0; r < n; ++r)
        for (Index f = 0; f < dims; ++f) d.features(r, f) = values[static_cast<std::size_t>(r * dims + f)];

    if (minority_label != "auto") {
        if (std::find(d.labels.begin(), d.labels.end(), minority_label) == d.labels.end())
            throw DataError(path + ": declared minority label '" + minority_label +
                            "' does not occur in column '" + label_column + "'");
        d.minority_hint = minority_label;
    }
    validate(d);
    profile(d);  // rejects a declared minority that is actually the majority
    return d;
}

void save_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path);

    const Index dims = d.dims();
    Index label_at = d.label_column;
    if (label_at < 0 || label_at > dims) label_at = dims;

    auto write_row = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) out << ',';
            out << cells[c];
        }
        out << '\n';
    };

    std::vector<std::string> cells(static_cast<std::size_t>(dims) + 1);
    for (Index c = 0, f = 0; c <= dims; ++c) {
        cells[static_cast<std::size_t>(c)] =
            (c == label_at) ? d.label_name : d.feature_names[static_cast<std::size_t>(f++)];
    }
    write_row(cells);

    for (Index r = 0; r < d.rows(); ++r) {
        for (Index c = 0, f = 0; c <= dims; ++c) {
            cells[static_cast<std::size_t>(c)] = (c == label_at)
                                                     ? d.labels[static_cast<std::size_t>(r)]
                                                     : format_double(d.features(r, f++));
        }
        write_row(cells);
    }
    if (!out) throw DataError("write failed: " + path);
}

ImbalanceProfile profile(const Dataset& d) {
    validate(d);
    const auto counts = label_counts(d);
    const auto first = counts.begin();
    const auto second = std::next(first);

    ImbalanceProfile p;
    // Lexicographically smaller label wins minority on an exact tie.
    const bool first_is_minority = first->second <= second->second;
    p.minority_label = first_is_minority ? first->first : second->first;
    p.majority_label = first_is_minority ? second->first : first->first;

    if (d.minority_hint) {
        const auto hint = counts.find(*d.minority_hint);
        if (hint == counts.end())
            throw DataError("declared minority label '" + *d.minority_hint +
                            "' does not occur in the dataset");
        const auto other = hint == first ? second : first;
        if (hint->second > other->second)
            throw DataError("declared minority label '" + *d.minority_hint +
                            "' is the more frequent class");
        p.minority_label = hint->first;
        p.majority_label = other->first;
    }

    p.k_minority = counts.at(p.minority_label);
    p.k_majority = counts.at(p.majority_label);
    p.imbalance_rate =
        static_cast<double>(p.k_minority) / static_cast<double>(p.k_minority + p.k_majority);
    return p;
}

Dataset induce_imbalance(const Dataset& d, double target_rate, std::uint64_t seed) {
    if (!(target_rate > 0.0 && target_rate < 0.5))
        throw std::invalid_argument("induce_imbalance: target rate must be in (0, 0.5), got " +
                                    std::to_string(target_rate));
    const ImbalanceProfile p = profile(d);
    if (p.imbalance_rate < target_rate)
        throw DataError("imbalance already below target: rate " +
                        std::to_string(p.imbalance_rate) + " < " + std::to_string(target_rate));

    // Largest m with m / (m + K_m) <= target, nudged to be robust against
    // floating-point edge cases at exact ratios.
    const double k_maj = static_cast<double>(p.k_majority);
    Index keep = static_cast<Index>(std::floor(target_rate * k_maj / (1.0 - target_rate)));
    while (static_cast<double>(keep + 1) / (static_cast<double>(keep + 1) + k_maj) <= target_rate)
        ++keep;
    while (keep > 0 && static_cast<double>(keep) / (static_cast<double>(keep) + k_maj) > target_rate)
        --keep;
    keep = std::min(keep, p.k_minority);
    if (keep == 0) throw DataError("target rate " + std::to_string(target_rate) +
                                   " leaves zero minority rows");

    std::vector<Index> minority_rows;
    for (Index r = 0; r < d.rows(); ++r)
        if (d.labels[static_cast<std::size_t>(r)] == p.minority_label) minority_rows.push_back(r);

    std::mt19937_64 rng(seed);
    std::shuffle(minority_rows.begin(), minority_rows.end(), rng);
    minority_rows.resize(static_cast<std::size_t>(keep));
    std::sort(minority_rows.begin(), minority_rows.end());

    std::vector<bool> keep_row(static_cast<std::size_t>(d.rows()), false);
    for (Index r = 0; r < d.rows(); ++r)
        if (d.labels[static_cast<std::size_t>(r)] != p.minority_label) keep_row[static_cast<std::size_t>(r)] = true;
    for (Index r : minority_rows) keep_row[static_cast<std::size_t>(r)] = true;

    Dataset out;
    out.feature_names = d.feature_names;
    out.label_name = d.label_name;
    out.label_column = d.label_column;
    out.minority_hint = d.minority_hint;
    const Index kept_total = p.k_majority + keep;
    out.features.resize(kept_total, d.dims());
    out.labels.reserve(static_cast<std::size_t>(kept_total));
    Index w = 0;
    for (Index r = 0; r < d.rows(); ++r) {
        if (!keep_row[static_cast<std::size_t>(r)]) continue;
        out.features.row(w++) = d.features.row(r);
        out.labels.push_back(d.labels[static_cast<std::size_t>(r)]);
    }
    return out;
}

Dataset make_blobs(Index n_majority, Index n_minority, Index dims, Index minority_clusters,
                   double spread, std::uint64_t seed) {
    if (n_majority < 1 || n_minority < 1)
        throw std::invalid_argument("make_blobs: class counts must be >= 1");
    if (dims < 1) throw std::invalid_argument("make_blobs: dims must be >= 1");
    if (minority_clusters < 1 || minority_clusters > n_minority)
        throw std::invalid_argument("make_blobs: minority_clusters must be in [1, n_minority]");
    if (spread < 0.0) throw std::invalid_argument("make_blobs: spread must be >= 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Dataset d;
    d.features.resize(n_majority + n_minority, dims);
    d.labels.reserve(static_cast<std::size_t>(n_majority + n_minority));
    for (Index f = 0; f < dims; ++f) d.feature_names.push_back("f" + std::to_string(f));
    d.label_column = dims;

    // Majority: isotropic Gaussian at the origin. Draw order is row-major.
    for (Index r = 0; r < n_majority; ++r) {
        for (Index f = 0; f < dims; ++f) d.features(r, f) = spread * gauss(rng);
        d.labels.emplace_back("majority");
    }

    // Minority cluster centers sit around a fixed offset from the majority
    // and keep their scatter even when spread is 0, so the centers stay
    // distinct.
    const double offset = 3.0 / std::sqrt(static_cast<double>(dims));
    Index row = n_majority;
    Index remaining = n_minority;
    for (Index c = 0; c < minority_clusters; ++c) {
        RowVector center(dims);
        for (Index f = 0; f < dims; ++f) center(f) = offset + gauss(rng);
        const Index clusters_left = minority_clusters - c;
        const Index count = (remaining + clusters_left - 1) / clusters_left;
        for (Index i = 0; i < count; ++i, ++row) {
            for (Index f = 0; f < dims; ++f) d.features(row, f) = center(f) + spread * gauss(rng);
            d.labels.emplace_back("minority");
        }
        remaining -= count;
    }
    validate(d);
    return d;
}

SplitResult stratified_split(const Dataset& d, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("stratified_split: test fraction must be in (0, 1), got " +
                                    std::to_string(test_fraction));
    validate(d);

    std::map<std::string, std::vector<Index>> by_label;
    for (Index r = 0; r < d.rows(); ++r) by_label[d.labels[static_cast<std::size_t>(r)]].push_back(r);

    std::mt19937_64 rng(seed);
    std::vector<bool> in_test(static_cast<std::size_t>(d.rows()), false);
    for (auto& [label, rows] : by_label) {
        const Index count = static_cast<Index>(rows.size());
        if (count < 2) throw DataError("class '" + label + "' has fewer than 2 samples");
        Index take = static_cast<Index>(std::lround(static_cast<double>(count) * test_fraction));
        take = std::max<Index>(take, 1);
        if (take >= count)
            throw DataError("test fraction " + std::to_string(test_fraction) + " leaves class '" +
                            label + "' empty on the train side");
        std::shuffle(rows.begin(), rows.end(), rng);
        for (Index i = 0; i < take; ++i) in_test[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])] = true;
    }

    auto take_rows = [&](bool test_side) {
        Dataset out;
        out.feature_names = d.feature_names;
        out.label_name = d.label_name;
        out.label_column = d.label_column;
        out.minority_hint = d.minority_hint;
        Index count = 0;
        for (bool flag : in_test) count += (flag == test_side) ? 1 : 0;
        out.features.resize(count, d.dims());
        out.labels.reserve(static_cast<std::size_t>(count));
        Index w = 0;
        for (Index r = 0; r < d.rows(); ++r) {
            if (in_test[static_cast<std::size_t>(r)] != test_side) continue;
            out.features.row(w++) = d.features.row(r);
            out.labels.push_back(d.labels[static_cast<std::size_t>(r)]);
        }
        return out;
    };
    return SplitResult{take_rows(false), take_rows(true)};
}

FeatureBounds feature_bounds(const Matrix& rows) {
    if (rows.rows() == 0) throw std::invalid_argument("feature_bounds: no rows given");
    FeatureBounds b;
    b.min_per_feature = rows.colwise().minCoeff().transpose();
    b.max_per_feature = rows.colwise().maxCoeff().transpose();
    return b;
}

}  // namespace cbos
