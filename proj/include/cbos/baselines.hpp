#pragma once

#include "cbos/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cbos {

struct NeighborList {
    std::vector<Index> indices;     // nearest first; the query itself excluded
    std::vector<double> distances;  // non-decreasing
};

/// Exact brute-force k nearest rows by Euclidean distance; equal distances
/// rank by lower row index.
NeighborList knn(const Matrix& points, Index query_index, int k);

/// Same, restricted to rows whose label equals restrict_to.
NeighborList knn(const Matrix& points, Index query_index, int k,
                 const std::vector<std::string>& labels, const std::string& restrict_to);

/// Where a synthetic row came from: base and neighbor index into the minority
/// block, and the interpolation factor u in [0, 1].
struct SyntheticProvenance {
    Index base = 0;
    Index neighbor = 0;
    double gap = 0.0;
};

/// Appends round(eta * (K_m - K_l)) uniform-with-replacement copies of
/// minority rows.
Dataset random_oversample(const Dataset& train, double eta, std::uint64_t seed);

/// Classic interpolation oversampler: base points cycle round-robin through
/// the minority rows; each synthetic row = base + u * (neighbor - base) with
/// the neighbor drawn uniformly from the base's k nearest minority neighbors.
Dataset smote(const Dataset& train, int k_neighbors, double eta, std::uint64_t seed,
              std::vector<SyntheticProvenance>* provenance = nullptr);

/// Per-minority-row hardness r_i = majority fraction among its k nearest
/// neighbors over all rows; counts are r_i / sum(r) shares of the eta-scaled
/// gap (uniform fallback when every r_i is zero). Exposed separately so the
/// allocation can be checked without touching the generator.
std::vector<long> adasyn_counts(const Dataset& train, int k_neighbors, double eta);

/// Adaptive oversampler: allocation from adasyn_counts, generation as in
/// smote (interpolation toward a random minority neighbor).
Dataset adasyn(const Dataset& train, int k_neighbors, double eta, std::uint64_t seed,
               std::vector<SyntheticProvenance>* provenance = nullptr);

/// Edited-nearest-neighbor cleaning: removes every row whose k nearest
/// neighbors' majority vote disagrees with its own label. k must be odd.
/// Deletions are decided against the pre-clean neighbor structure in a
/// single pass.
Dataset enn_clean(const Dataset& train, int k);

/// smote followed by enn_clean.
Dataset smote_enn(const Dataset& train, int k_neighbors, double eta, int enn_k,
                  std::uint64_t seed);

}  // namespace cbos
