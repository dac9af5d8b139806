#include "cbos/clustering.hpp"

#include <algorithm>
#include <random>

namespace cbos {

namespace {

double squared_distance(const Matrix& points, Index row, const Matrix& centroids, Index c) {
    double acc = 0.0;
    for (Index f = 0; f < points.cols(); ++f) {
        const double diff = points(row, f) - centroids(c, f);
        acc += diff * diff;
    }
    return acc;
}

Matrix kmeanspp_init(const Matrix& points, Index k, std::mt19937_64& rng) {
    const Index n = points.rows();
    Matrix centroids(k, points.cols());

    std::uniform_int_distribution<Index> pick(0, n - 1);
    centroids.row(0) = points.row(pick(rng));

    Vector d2(n);
    for (Index i = 0; i < n; ++i) d2(i) = squared_distance(points, i, centroids, 0);

    for (Index c = 1; c < k; ++c) {
        const double total = d2.sum();
        Index chosen;
        if (total <= 0.0) {
            chosen = pick(rng);  // every point already coincides with a centroid
        } else {
            std::uniform_real_distribution<double> u(0.0, total);
            double r = u(rng);
            chosen = n - 1;
            for (Index i = 0; i < n; ++i) {
                r -= d2(i);
                if (r <= 0.0) {
                    chosen = i;
                    break;
                }
            }
        }
        centroids.row(c) = points.row(chosen);
        for (Index i = 0; i < n; ++i)
            d2(i) = std::min(d2(i), squared_distance(points, i, centroids, c));
    }
    return centroids;
}

// Nearest centroid per point, exact ties to the lowest index.
void assign_nearest(const Matrix& points, const Matrix& centroids, std::vector<Index>& out) {
    const Index n = points.rows();
    out.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        Index best = 0;
        double best_d2 = squared_distance(points, i, centroids, 0);
        for (Index c = 1; c < centroids.rows(); ++c) {
            const double d2 = squared_distance(points, i, centroids, c);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = c;
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    }
}

std::vector<Index> cluster_sizes(const std::vector<Index>& assignments, Index k) {
    std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
    for (Index a : assignments) ++sizes[static_cast<std::size_t>(a)];
    return sizes;
}

// Moves the point farthest from its assigned centroid into each empty
// cluster. The move is pinned until the next assignment pass, so the cluster
// cannot immediately drain again when centroids coincide.
void repair_empty(const Matrix& points, Matrix& centroids, std::vector<Index>& assignments) {
    const Index k = centroids.rows();
    auto sizes = cluster_sizes(assignments, k);
    for (Index e = 0; e < k; ++e) {
        if (sizes[static_cast<std::size_t>(e)] > 0) continue;
        Index farthest = -1;
        double farthest_d2 = -1.0;
        for (Index i = 0; i < points.rows(); ++i) {
            const Index home = assignments[static_cast<std::size_t>(i)];
            if (sizes[static_cast<std::size_t>(home)] < 2) continue;  // do not drain a singleton
            const double d2 = squared_distance(points, i, centroids, home);
            if (d2 > farthest_d2) {
                farthest_d2 = d2;
                farthest = i;
            }
        }
        if (farthest < 0) continue;  // unreachable while k <= n
        --sizes[static_cast<std::size_t>(assignments[static_cast<std::size_t>(farthest)])];
        centroids.row(e) = points.row(farthest);
        assignments[static_cast<std::size_t>(farthest)] = e;
        ++sizes[static_cast<std::size_t>(e)];
    }
}

double total_inertia(const Matrix& points, const Matrix& centroids,
                     const std::vector<Index>& assignments) {
    double acc = 0.0;
    for (Index i = 0; i < points.rows(); ++i)
        acc += squared_distance(points, i, centroids, assignments[static_cast<std::size_t>(i)]);
    return acc;
}

Matrix cluster_means(const Matrix& points, const std::vector<Index>& assignments, Index k) {
    Matrix means = Matrix::Zero(k, points.cols());
    std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < points.rows(); ++i) {
        const Index c = assignments[static_cast<std::size_t>(i)];
        means.row(c) += points.row(i);
        ++sizes[static_cast<std::size_t>(c)];
    }
    for (Index c = 0; c < k; ++c)
        if (sizes[static_cast<std::size_t>(c)] > 0)
            means.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
    return means;
}

}  // namespace

ClusterModel kmeans_fit(const Matrix& points, Index k, int max_iters, double tol,
                        std::uint64_t seed) {
    const Index n = points.rows();
    if (k < 1) throw std::invalid_argument("kmeans_fit: k must be >= 1");
    if (k > n)
        throw std::invalid_argument("kmeans_fit: k (" + std::to_string(k) +
                                    ") exceeds point count (" + std::to_string(n) + ")");
    if (points.cols() < 1) throw std::invalid_argument("kmeans_fit: points need >= 1 dimension");
    if (!points.allFinite()) throw std::invalid_argument("kmeans_fit: non-finite input");
    if (max_iters < 1) throw std::invalid_argument("kmeans_fit: max_iters must be >= 1");
    if (tol < 0.0) throw std::invalid_argument("kmeans_fit: tol must be >= 0");

    std::mt19937_64 rng(seed);
    ClusterModel model;
    model.centroids = kmeanspp_init(points, k, rng);

    assign_nearest(points, model.centroids, model.assignments);
    repair_empty(points, model.centroids, model.assignments);
    model.inertia_trace.push_back(total_inertia(points, model.centroids, model.assignments));

    std::vector<Index> previous = model.assignments;
    for (int iter = 0; iter < max_iters; ++iter) {
        const Matrix updated = cluster_means(points, model.assignments, k);
        double movement = 0.0;
        for (Index c = 0; c < k; ++c)
            movement = std::max(movement, euclidean(updated.row(c), model.centroids.row(c)));
        model.centroids = updated;

        previous = model.assignments;
        assign_nearest(points, model.centroids, model.assignments);
        repair_empty(points, model.centroids, model.assignments);
        model.inertia_trace.push_back(total_inertia(points, model.centroids, model.assignments));
        model.iterations_run = iter + 1;

        if (movement < tol || model.assignments == previous) break;
    }

    model.inertia = model.inertia_trace.back();
    return model;
}

}  // namespace cbos
