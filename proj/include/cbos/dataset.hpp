#pragma once

#include "cbos/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cbos {

/// A binary-labeled sample table. Labels stay opaque strings end to end;
/// nothing below the evaluation layer assumes 0/1 encodings.
struct Dataset {
    Matrix features;                           // n x d
    std::vector<std::string> labels;           // one per row
    std::vector<std::string> feature_names;    // d entries, column order
    std::string label_name = "label";
    Index label_column = -1;                   // column position in CSV form; -1 = last
    std::optional<std::string> minority_hint;  // explicit minority designation from ingestion

    Index rows() const { return features.rows(); }
    Index dims() const { return features.cols(); }
};

struct ImbalanceProfile {
    std::string minority_label;
    std::string majority_label;
    Index k_minority = 0;         // K_l
    Index k_majority = 0;         // K_m
    double imbalance_rate = 0.0;  // K_l / (K_l + K_m)
};

struct FeatureBounds {
    Vector min_per_feature;
    Vector max_per_feature;
};

struct SplitResult {
    Dataset train;
    Dataset test;
};

/// Throws DataError unless d is a well-formed binary dataset: row/label
/// counts agree, exactly two distinct labels, all feature values finite.
void validate(const Dataset& d);

/// Reads a comma-separated file with a mandatory header row. Every column
/// except label_column must parse as a real number. minority_label = "auto"
/// leaves minority detection to frequency; an explicit label is recorded on
/// the dataset and honored by profile().
Dataset load_csv(const std::string& path, const std::string& label_column,
                 const std::string& minority_label = "auto");

/// Writes the dataset back out in the same shape: header row, label column
/// at its recorded position, feature values in shortest round-trip form.
void save_csv(const Dataset& d, const std::string& path);

/// Counts the two classes. The minority is the less frequent class; an exact
/// tie goes to the lexicographically smaller label unless the dataset carries
/// an explicit minority hint.
ImbalanceProfile profile(const Dataset& d);

/// Subsamples the minority class (uniformly, without replacement) until the
/// rate K_l/(K_l+K_m) is the largest achievable value <= target_rate.
/// Majority rows are untouched; surviving rows keep their original order.
Dataset induce_imbalance(const Dataset& d, double target_rate, std::uint64_t seed);

/// Synthetic two-class data: majority from one isotropic Gaussian at the
/// origin, minority from `minority_clusters` Gaussians whose centers sit at a
/// fixed offset from the majority and do not scale with `spread`. Fully
/// deterministic for a fixed seed.
Dataset make_blobs(Index n_majority, Index n_minority, Index dims,
                   Index minority_clusters, double spread, std::uint64_t seed);

/// Class-proportional split. Per-class test count = round(count * fraction),
/// never below 1; errors out if either side of either class would be empty.
SplitResult stratified_split(const Dataset& d, double test_fraction, std::uint64_t seed);

/// Exact per-feature min/max over the given rows.
FeatureBounds feature_bounds(const Matrix& rows);

}  // namespace cbos
