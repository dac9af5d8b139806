#pragma once

#include "cbos/types.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cbos {

inline constexpr int kDefaultKmeansMaxIters = 100;
inline constexpr double kDefaultKmeansTol = 1e-6;

struct ClusterModel {
    Matrix centroids;                   // k x d
    std::vector<Index> assignments;     // one cluster index per input point
    double inertia = 0.0;               // sum of squared point-to-centroid distances
    int iterations_run = 0;
    std::vector<double> inertia_trace;  // recorded after every assignment pass
};

/// Euclidean distance between two vectors of equal length, any orientation.
template <typename DerivedA, typename DerivedB>
double euclidean(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("euclidean: dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    double acc = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        const double diff = static_cast<double>(a(i)) - static_cast<double>(b(i));
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

/// Lloyd iterations from a k-means++ seeding. Stops when the largest centroid
/// movement drops below tol, the assignment stabilizes, or max_iters is hit.
/// Empty clusters are re-seeded with the point farthest from its assigned
/// centroid, so the returned model never contains one.
ClusterModel kmeans_fit(const Matrix& points, Index k, int max_iters = kDefaultKmeansMaxIters,
                        double tol = kDefaultKmeansTol, std::uint64_t seed = 0);

/// Index of the nearest centroid; exact distance ties go to the lowest index.
template <typename Derived>
Index assign(const ClusterModel& model, const Eigen::MatrixBase<Derived>& point) {
    if (point.size() != model.centroids.cols())
        throw std::invalid_argument("assign: point dimension " + std::to_string(point.size()) +
                                    " does not match model dimension " +
                                    std::to_string(model.centroids.cols()));
    Index best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < model.centroids.rows(); ++c) {
        double d2 = 0.0;
        for (Index f = 0; f < point.size(); ++f) {
            const double diff = static_cast<double>(point(f)) - model.centroids(c, f);
            d2 += diff * diff;
        }
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

}  // namespace cbos
