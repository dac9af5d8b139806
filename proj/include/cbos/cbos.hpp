#pragma once

#include "cbos/clustering.hpp"
#include "cbos/dataset.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cbos {

/// How normalized centroid distances map to per-sample generation counts.
/// `direct` gives distant samples more synthetics; `inverse` gives them to
/// samples close to their centroid.
enum class WeightMode { direct, inverse };

/// `per_feature` draws an independent magnitude and sign for every feature of
/// every generated sample; `per_sample` draws one magnitude and one sign per
/// generated sample and applies them to all features.
enum class NoiseMode { per_feature, per_sample };

std::string to_string(WeightMode mode);
std::string to_string(NoiseMode mode);
WeightMode weight_mode_from_string(const std::string& s);
NoiseMode noise_mode_from_string(const std::string& s);

struct ResampleConfig {
    double eta = 1.0;     // fraction of the K_m - K_l gap to fill, in (0, 1]
    Index clusters = 0;   // k-means cluster count; 0 = max(1, round(sqrt(K_l / 2)))
    double random_lo = 0.0;
    double random_hi = 1.0;
    WeightMode weight_mode = WeightMode::direct;
    NoiseMode noise_mode = NoiseMode::per_feature;
    std::uint64_t seed = 0;
    int kmeans_max_iters = kDefaultKmeansMaxIters;
    double kmeans_tol = kDefaultKmeansTol;
};

struct DistanceWeights {
    Vector raw;         // Euclidean distance to the assigned centroid, per minority row
    Vector normalized;  // raw / sum(raw); sums to 1
};

struct AllocationPlan {
    std::vector<long> counts;  // synthetic rows to generate per minority sample
    long total = 0;
};

/// raw[i] = distance from minority row i to its assigned centroid. The model
/// must have been fit on exactly these rows so assignments align by index.
Vector centroid_distances(const Matrix& minority, const ClusterModel& model);

/// Divides by the vector sum. All-zero input (every point sitting on its
/// centroid) falls back to the uniform vector.
Vector normalize_distances(const Vector& raw);

/// Bundles centroid_distances + normalize_distances.
DistanceWeights distance_weights(const Matrix& minority, const ClusterModel& model);

/// counts[i] = round(w_i * (K_m - K_l) * eta), rounding half away from zero.
/// In inverse mode the weights are first replaced by their renormalized
/// complements (1 - w_i) / sum_j (1 - w_j); a single-sample vector maps to
/// weight 1.
AllocationPlan allocate_counts(const Vector& weights, Index k_majority, Index k_minority,
                               double eta, WeightMode mode);

/// n perturbed copies of x, each feature moved by +/- |x_f - centroid_f| * r
/// with r uniform in [random_lo, random_hi]. Draws consume the generator in a
/// fixed order: samples in sequence, features in order within a sample, and
/// for each draw the magnitude before the sign.
Matrix generate_for_sample(const RowVector& x, const RowVector& centroid, long n,
                           const ResampleConfig& cfg, std::mt19937_64& rng);

/// Clamps every value into the per-feature [min, max]. In-range values pass
/// through bit-identical.
Matrix clip_to_bounds(Matrix samples, const FeatureBounds& bounds);

/// Default cluster-count heuristic: max(1, round(sqrt(K_l / 2))).
Index auto_cluster_count(Index k_minority);

/// The full oversampling pipeline: cluster the minority rows, weight each by
/// its normalized centroid distance, allocate per-sample synthetic counts,
/// generate perturbed samples, and clip them to the original minority
/// per-feature bounds. Original rows come back bit-identical and in place;
/// generated rows are appended with the minority label.
Dataset cbos_resample(const Dataset& train, const ResampleConfig& cfg);

}  // namespace cbos
