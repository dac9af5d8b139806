#include "cbos/cbos.hpp"

#include <algorithm>
#include <cmath>

namespace cbos {

std::string to_string(WeightMode mode) {
    return mode == WeightMode::direct ? "direct" : "inverse";
}

std::string to_string(NoiseMode mode) {
    return mode == NoiseMode::per_feature ? "per_feature" : "per_sample";
}

WeightMode weight_mode_from_string(const std::string& s) {
    if (s == "direct") return WeightMode::direct;
    if (s == "inverse") return WeightMode::inverse;
    throw std::invalid_argument("unknown weight mode: '" + s + "' (expected direct|inverse)");
}

NoiseMode noise_mode_from_string(const std::string& s) {
    if (s == "per_feature") return NoiseMode::per_feature;
    if (s == "per_sample") return NoiseMode::per_sample;
    throw std::invalid_argument("unknown noise mode: '" + s +
                                "' (expected per_feature|per_sample)");
}

namespace {

void check_config(const ResampleConfig& cfg) {
    if (!(cfg.eta > 0.0 && cfg.eta <= 1.0))
        throw std::invalid_argument("eta must be in (0, 1], got " + std::to_string(cfg.eta));
    if (!(cfg.random_lo >= 0.0 && cfg.random_lo < cfg.random_hi && cfg.random_hi <= 1.0))
        throw std::invalid_argument("random range must satisfy 0 <= lo < hi <= 1, got [" +
                                    std::to_string(cfg.random_lo) + ", " +
                                    std::to_string(cfg.random_hi) + "]");
}

long round_half_away(double v) { return std::llround(v); }

}  // namespace

Vector centroid_distances(const Matrix& minority, const ClusterModel& model) {
    if (minority.cols() != model.centroids.cols())
        throw std::invalid_argument("centroid_distances: dimension mismatch");
    if (minority.rows() != static_cast<Index>(model.assignments.size()))
        throw std::invalid_argument("centroid_distances: assignment length (" +
                                    std::to_string(model.assignments.size()) +
                                    ") does not match row count (" +
                                    std::to_string(minority.rows()) + ")");
    Vector raw(minority.rows());
    for (Index i = 0; i < minority.rows(); ++i) {
        const Index c = model.assignments[static_cast<std::size_t>(i)];
        raw(i) = euclidean(minority.row(i), model.centroids.row(c));
    }
    return raw;
}

Vector normalize_distances(const Vector& raw) {
    if (raw.size() == 0) throw std::invalid_argument("normalize_distances: empty input");
    for (Index i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw(i)) || raw(i) < 0.0)
            throw std::invalid_argument("normalize_distances: entries must be finite and >= 0");
    }
    const double sum = raw.sum();
    if (sum == 0.0)
        return Vector::Constant(raw.size(), 1.0 / static_cast<double>(raw.size()));
    return raw / sum;
}

DistanceWeights distance_weights(const Matrix& minority, const ClusterModel& model) {
    DistanceWeights w;
    w.raw = centroid_distances(minority, model);
    w.normalized = normalize_distances(w.raw);
    return w;
}

AllocationPlan allocate_counts(const Vector& weights, Index k_majority, Index k_minority,
                               double eta, WeightMode mode) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("allocate_counts: eta must be in (0, 1], got " +
                                    std::to_string(eta));
    if (k_majority <= k_minority)
        throw std::invalid_argument("allocate_counts: majority count must exceed minority count");
    if (weights.size() != k_minority)
        throw std::invalid_argument("allocate_counts: weight length does not match K_l");
    double sum = 0.0;
    for (Index i = 0; i < weights.size(); ++i) {
        if (weights(i) < 0.0)
            throw std::invalid_argument("allocate_counts: weights must be nonnegative");
        sum += weights(i);
    }
    if (std::abs(sum - 1.0) > 1e-6)
        throw std::invalid_argument("allocate_counts: weights must sum to 1");

    Vector effective = weights;
    if (mode == WeightMode::inverse) {
        if (weights.size() == 1) {
            effective(0) = 1.0;
        } else {
            effective = (1.0 - weights.array()).matrix();
            effective /= effective.sum();
        }
    }

    AllocationPlan plan;
    const double gap = static_cast<double>(k_majority - k_minority);
    plan.counts.resize(static_cast<std::size_t>(weights.size()));
    for (Index i = 0; i < weights.size(); ++i) {
        const long n = round_half_away(effective(i) * gap * eta);
        plan.counts[static_cast<std::size_t>(i)] = n;
        plan.total += n;
    }
    return plan;
}

Matrix generate_for_sample(const RowVector& x, const RowVector& centroid, long n,
                           const ResampleConfig& cfg, std::mt19937_64& rng) {
    if (x.size() != centroid.size())
        throw std::invalid_argument("generate_for_sample: dimension mismatch");
    if (n < 0) throw std::invalid_argument("generate_for_sample: n must be >= 0");
    check_config(cfg);

    const Index dims = x.size();
    const RowVector delta = (x - centroid).cwiseAbs();
    std::uniform_real_distribution<double> magnitude(cfg.random_lo, cfg.random_hi);
    std::uniform_int_distribution<int> coin(0, 1);

    Matrix out(n, dims);
    for (long j = 0; j < n; ++j) {
        if (cfg.noise_mode == NoiseMode::per_feature) {
            for (Index f = 0; f < dims; ++f) {
                const double r = magnitude(rng);
                const double sign = coin(rng) == 0 ? 1.0 : -1.0;
                out(j, f) = x(f) + sign * delta(f) * r;
            }
        } else {
            const double r = magnitude(rng);
            const double sign = coin(rng) == 0 ? 1.0 : -1.0;
            out.row(j) = x + sign * r * delta;
        }
    }
    return out;
}

Matrix clip_to_bounds(Matrix samples, const FeatureBounds& bounds) {
    if (samples.cols() != bounds.min_per_feature.size() ||
        samples.cols() != bounds.max_per_feature.size())
        throw std::invalid_argument("clip_to_bounds: dimension mismatch");
    for (Index f = 0; f < samples.cols(); ++f)
        samples.col(f) =
            samples.col(f).cwiseMax(bounds.min_per_feature(f)).cwiseMin(bounds.max_per_feature(f));
    return samples;
}

Index auto_cluster_count(Index k_minority) {
    const Index k = static_cast<Index>(
        std::llround(std::sqrt(static_cast<double>(k_minority) / 2.0)));
    return std::min(std::max<Index>(k, 1), k_minority);
}

Dataset cbos_resample(const Dataset& train, const ResampleConfig& cfg) {
    check_config(cfg);
    const ImbalanceProfile prof = profile(train);
    if (prof.k_majority <= prof.k_minority)
        throw DataError("cbos_resample: dataset is not imbalanced (K_m must exceed K_l)");

    std::vector<Index> minority_rows;
    for (Index r = 0; r < train.rows(); ++r)
        if (train.labels[static_cast<std::size_t>(r)] == prof.minority_label)
            minority_rows.push_back(r);

    Matrix minority(prof.k_minority, train.dims());
    for (Index i = 0; i < prof.k_minority; ++i)
        minority.row(i) = train.features.row(minority_rows[static_cast<std::size_t>(i)]);

    const Index k = cfg.clusters == 0 ? auto_cluster_count(prof.k_minority) : cfg.clusters;
    if (k < 1 || k > prof.k_minority)
        throw std::invalid_argument("cbos_resample: cluster count " + std::to_string(k) +
                                    " must be in [1, K_l = " + std::to_string(prof.k_minority) +
                                    "]");

    const ClusterModel model =
        kmeans_fit(minority, k, cfg.kmeans_max_iters, cfg.kmeans_tol, cfg.seed);
    const DistanceWeights weights = distance_weights(minority, model);
    const AllocationPlan plan =
        allocate_counts(weights.normalized, prof.k_majority, prof.k_minority, cfg.eta,
                        cfg.weight_mode);
    const FeatureBounds bounds = feature_bounds(minority);

    std::mt19937_64 rng(cfg.seed);
    Matrix generated(plan.total, train.dims());
    Index w = 0;
    for (Index i = 0; i < prof.k_minority; ++i) {
        const long n = plan.counts[static_cast<std::size_t>(i)];
        if (n == 0) continue;
        const RowVector x = minority.row(i);
        const RowVector c = model.centroids.row(model.assignments[static_cast<std::size_t>(i)]);
        const Matrix block = clip_to_bounds(generate_for_sample(x, c, n, cfg, rng), bounds);
        generated.middleRows(w, n) = block;
        w += n;
    }

    Dataset out = train;
    out.minority_hint.reset();  // the balance is about to change
    out.features.conservativeResize(train.rows() + plan.total, Eigen::NoChange);
    out.features.bottomRows(plan.total) = generated;
    out.labels.insert(out.labels.end(), static_cast<std::size_t>(plan.total),
                      prof.minority_label);
    return out;
}

}  // namespace cbos
