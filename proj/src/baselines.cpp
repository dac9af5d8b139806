#include "cbos/baselines.hpp"

#include "cbos/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cbos {

namespace {

NeighborList knn_filtered(const Matrix& points, Index query_index, int k,
                          const std::vector<std::string>* labels,
                          const std::string* restrict_to) {
    if (query_index < 0 || query_index >= points.rows())
        throw std::invalid_argument("knn: query index out of range");
    if (k < 1) throw std::invalid_argument("knn: k must be >= 1");

    std::vector<std::pair<double, Index>> candidates;
    candidates.reserve(static_cast<std::size_t>(points.rows()));
    for (Index i = 0; i < points.rows(); ++i) {
        if (i == query_index) continue;
        if (labels && (*labels)[static_cast<std::size_t>(i)] != *restrict_to) continue;
        double d2 = 0.0;
        for (Index f = 0; f < points.cols(); ++f) {
            const double diff = points(i, f) - points(query_index, f);
            d2 += diff * diff;
        }
        candidates.emplace_back(d2, i);
    }
    if (candidates.empty()) throw std::invalid_argument("knn: no eligible neighbor candidates");
    if (static_cast<std::size_t>(k) > candidates.size())
        throw std::invalid_argument("knn: k (" + std::to_string(k) + ") exceeds candidate count (" +
                                    std::to_string(candidates.size()) + ")");

    std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());

    NeighborList nl;
    nl.indices.reserve(static_cast<std::size_t>(k));
    nl.distances.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        nl.indices.push_back(candidates[static_cast<std::size_t>(i)].second);
        nl.distances.push_back(std::sqrt(candidates[static_cast<std::size_t>(i)].first));
    }
    return nl;
}

struct MinorityView {
    ImbalanceProfile prof;
    std::vector<Index> rows;  // original row index per minority row
    Matrix block;             // K_l x d
};

MinorityView minority_view(const Dataset& train) {
    MinorityView v;
    v.prof = profile(train);
    for (Index r = 0; r < train.rows(); ++r)
        if (train.labels[static_cast<std::size_t>(r)] == v.prof.minority_label)
            v.rows.push_back(r);
    v.block.resize(v.prof.k_minority, train.dims());
    for (Index i = 0; i < v.prof.k_minority; ++i)
        v.block.row(i) = train.features.row(v.rows[static_cast<std::size_t>(i)]);
    return v;
}

Dataset append_minority_rows(const Dataset& train, const Matrix& rows,
                             const std::string& minority_label) {
    Dataset out = train;
    out.minority_hint.reset();
    out.features.conservativeResize(train.rows() + rows.rows(), Eigen::NoChange);
    out.features.bottomRows(rows.rows()) = rows;
    out.labels.insert(out.labels.end(), static_cast<std::size_t>(rows.rows()), minority_label);
    return out;
}

void check_eta(double eta) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must be in (0, 1], got " + std::to_string(eta));
}

}  // namespace

NeighborList knn(const Matrix& points, Index query_index, int k) {
    return knn_filtered(points, query_index, k, nullptr, nullptr);
}

NeighborList knn(const Matrix& points, Index query_index, int k,
                 const std::vector<std::string>& labels, const std::string& restrict_to) {
    if (static_cast<Index>(labels.size()) != points.rows())
        throw std::invalid_argument("knn: label count does not match row count");
    return knn_filtered(points, query_index, k, &labels, &restrict_to);
}

Dataset random_oversample(const Dataset& train, double eta, std::uint64_t seed) {
    check_eta(eta);
    const MinorityView v = minority_view(train);
    if (v.prof.k_majority <= v.prof.k_minority)
        throw DataError("random_oversample: dataset is not imbalanced");

    const long total =
        std::llround(eta * static_cast<double>(v.prof.k_majority - v.prof.k_minority));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> pick(0, v.prof.k_minority - 1);

    Matrix copies(total, train.dims());
    for (long t = 0; t < total; ++t) copies.row(t) = v.block.row(pick(rng));
    return append_minority_rows(train, copies, v.prof.minority_label);
}

Dataset smote(const Dataset& train, int k_neighbors, double eta, std::uint64_t seed,
              std::vector<SyntheticProvenance>* provenance) {
    check_eta(eta);
    if (k_neighbors < 1) throw std::invalid_argument("smote: k_neighbors must be >= 1");
    const MinorityView v = minority_view(train);
    if (v.prof.k_minority <= k_neighbors)
        throw DataError("smote: needs more than k_neighbors (" + std::to_string(k_neighbors) +
                        ") minority samples, have " + std::to_string(v.prof.k_minority));

    const long total =
        std::llround(eta * static_cast<double>(v.prof.k_majority - v.prof.k_minority));

    std::vector<NeighborList> neighbors(static_cast<std::size_t>(v.prof.k_minority));
    for (Index i = 0; i < v.prof.k_minority; ++i)
        neighbors[static_cast<std::size_t>(i)] = knn(v.block, i, k_neighbors);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_neighbor(0, k_neighbors - 1);
    std::uniform_real_distribution<double> gap(0.0, 1.0);

    Matrix synthetic(total, train.dims());
    if (provenance) provenance->clear();
    for (long t = 0; t < total; ++t) {
        const Index base = static_cast<Index>(t % v.prof.k_minority);
        const Index nb = neighbors[static_cast<std::size_t>(base)]
                             .indices[static_cast<std::size_t>(pick_neighbor(rng))];
        const double u = gap(rng);
        synthetic.row(t) = v.block.row(base) + u * (v.block.row(nb) - v.block.row(base));
        if (provenance) provenance->push_back({base, nb, u});
    }
    return append_minority_rows(train, synthetic, v.prof.minority_label);
}

std::vector<long> adasyn_counts(const Dataset& train, int k_neighbors, double eta) {
    check_eta(eta);
    const MinorityView v = minority_view(train);
    if (v.prof.k_minority < 2) throw DataError("adasyn: needs at least 2 minority samples");
    if (k_neighbors < 1 || k_neighbors > train.rows() - 1)
        throw std::invalid_argument("adasyn: k_neighbors must be in [1, rows - 1]");

    Vector hardness(v.prof.k_minority);
    for (Index i = 0; i < v.prof.k_minority; ++i) {
        const NeighborList nl =
            knn(train.features, v.rows[static_cast<std::size_t>(i)], k_neighbors);
        long majority_neighbors = 0;
        for (Index nb : nl.indices)
            if (train.labels[static_cast<std::size_t>(nb)] == v.prof.majority_label)
                ++majority_neighbors;
        hardness(i) = static_cast<double>(majority_neighbors) / static_cast<double>(k_neighbors);
    }

    const double sum = hardness.sum();
    Vector share = sum > 0.0
                       ? Vector(hardness / sum)
                       : Vector(Vector::Constant(v.prof.k_minority,
                                                 1.0 / static_cast<double>(v.prof.k_minority)));

    const double gap = static_cast<double>(v.prof.k_majority - v.prof.k_minority);
    std::vector<long> counts(static_cast<std::size_t>(v.prof.k_minority));
    for (Index i = 0; i < v.prof.k_minority; ++i)
        counts[static_cast<std::size_t>(i)] = std::llround(share(i) * gap * eta);
    return counts;
}

Dataset adasyn(const Dataset& train, int k_neighbors, double eta, std::uint64_t seed,
               std::vector<SyntheticProvenance>* provenance) {
    const std::vector<long> counts = adasyn_counts(train, k_neighbors, eta);
    const MinorityView v = minority_view(train);

    // Generation interpolates toward minority neighbors, so the neighbor
    // count caps at K_l - 1.
    const int kk = std::min<int>(k_neighbors, static_cast<int>(v.prof.k_minority - 1));
    std::vector<NeighborList> neighbors(static_cast<std::size_t>(v.prof.k_minority));
    for (Index i = 0; i < v.prof.k_minority; ++i)
        neighbors[static_cast<std::size_t>(i)] = knn(v.block, i, kk);

    long total = 0;
    for (long c : counts) total += c;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_neighbor(0, kk - 1);
    std::uniform_real_distribution<double> gap(0.0, 1.0);

    Matrix synthetic(total, train.dims());
    if (provenance) provenance->clear();
    long t = 0;
    for (Index i = 0; i < v.prof.k_minority; ++i) {
        for (long j = 0; j < counts[static_cast<std::size_t>(i)]; ++j, ++t) {
            const Index nb = neighbors[static_cast<std::size_t>(i)]
                                 .indices[static_cast<std::size_t>(pick_neighbor(rng))];
            const double u = gap(rng);
            synthetic.row(t) = v.block.row(i) + u * (v.block.row(nb) - v.block.row(i));
            if (provenance) provenance->push_back({i, nb, u});
        }
    }
    return append_minority_rows(train, synthetic, v.prof.minority_label);
}

Dataset enn_clean(const Dataset& train, int k) {
    validate(train);
    if (k % 2 == 0) throw std::invalid_argument("enn_clean: k must be odd for a clean vote");
    if (k < 1 || k > train.rows() - 1)
        throw std::invalid_argument("enn_clean: k must be in [1, rows - 1]");

    // Votes are evaluated against the original dataset, then removals happen
    // at once.
    std::vector<bool> keep(static_cast<std::size_t>(train.rows()), true);
    for (Index r = 0; r < train.rows(); ++r) {
        const NeighborList nl = knn(train.features, r, k);
        long agree = 0;
        for (Index nb : nl.indices)
            if (train.labels[static_cast<std::size_t>(nb)] == train.labels[static_cast<std::size_t>(r)])
                ++agree;
        keep[static_cast<std::size_t>(r)] = 2 * agree > k;
    }

    Index kept = 0;
    for (bool flag : keep) kept += flag ? 1 : 0;
    if (kept == 0) throw DataError("enn_clean: every row was removed");

    Dataset out;
    out.feature_names = train.feature_names;
    out.label_name = train.label_name;
    out.label_column = train.label_column;
    out.features.resize(kept, train.dims());
    out.labels.reserve(static_cast<std::size_t>(kept));
    Index w = 0;
    for (Index r = 0; r < train.rows(); ++r) {
        if (!keep[static_cast<std::size_t>(r)]) continue;
        out.features.row(w++) = train.features.row(r);
        out.labels.push_back(train.labels[static_cast<std::size_t>(r)]);
    }
    validate(out);  // cleaning must not erase a whole class
    return out;
}

Dataset smote_enn(const Dataset& train, int k_neighbors, double eta, int enn_k,
                  std::uint64_t seed) {
    return enn_clean(smote(train, k_neighbors, eta, seed), enn_k);
}

}  // namespace cbos
