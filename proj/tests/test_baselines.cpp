#include "cbos/baselines.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace cbos;
using testutil::make_dataset;
using testutil::sorted_hashes;

namespace {

// Independent kNN reimplementation: stable-sort the full distance list.
NeighborList knn_oracle(const Matrix& points, Index q, int k,
                        const std::vector<std::string>* labels = nullptr,
                        const std::string* restrict_to = nullptr) {
    std::vector<Index> order;
    for (Index i = 0; i < points.rows(); ++i) {
        if (i == q) continue;
        if (labels && (*labels)[static_cast<std::size_t>(i)] != *restrict_to) continue;
        order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double da = (points.row(a) - points.row(q)).norm();
        const double db = (points.row(b) - points.row(q)).norm();
        if (da != db) return da < db;
        return a < b;
    });
    NeighborList nl;
    for (int i = 0; i < k; ++i) {
        nl.indices.push_back(order[static_cast<std::size_t>(i)]);
        nl.distances.push_back((points.row(order[static_cast<std::size_t>(i)]) - points.row(q)).norm());
    }
    return nl;
}

// s must lie on the closed segment [a, b]: collinear and between.
bool on_segment(const RowVector& s, const RowVector& a, const RowVector& b, double tol = 1e-9) {
    const RowVector ab = b - a;
    const RowVector as = s - a;
    const double ab2 = ab.squaredNorm();
    if (ab2 == 0.0) return as.norm() <= tol;
    const double t = as.dot(ab) / ab2;
    if (t < -tol || t > 1.0 + tol) return false;
    return (as - t * ab).norm() <= tol * (1.0 + ab.norm());
}

Dataset imbalanced_fixture(Index majority, Index minority, std::uint64_t seed) {
    return make_blobs(majority, minority, 3, 2, 1.0, seed);
}

}  // namespace

TEST_CASE("knn") {
    Matrix pts(3, 2);
    pts << 0, 0, 1, 0, 5, 0;

    SUBCASE("basic ordering") {
        const NeighborList nl = knn(pts, 0, 2);
        CHECK(nl.indices == std::vector<Index>{1, 2});
        CHECK(nl.distances[0] == doctest::Approx(1.0));
        CHECK(nl.distances[1] == doctest::Approx(5.0));
    }
    SUBCASE("label restriction") {
        const std::vector<std::string> labels{"a", "a", "b"};
        const NeighborList nl = knn(pts, 0, 1, labels, "b");
        CHECK(nl.indices == std::vector<Index>{2});
    }
    SUBCASE("equidistant neighbors rank by row index") {
        Matrix sym(6, 1);
        sym << 0, 7, 7, -1, 1, -1;  // rows 3 and 5 tie at distance 1; row 4 ties too
        const NeighborList nl = knn(sym, 0, 3);
        CHECK(nl.indices == std::vector<Index>{3, 4, 5});
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(knn(pts, 0, 3), std::invalid_argument);  // k exceeds candidates
        CHECK_THROWS_AS(knn(pts, 0, 0), std::invalid_argument);
        const std::vector<std::string> labels{"a", "a", "a"};
        CHECK_THROWS_AS(knn(pts, 0, 1, labels, "b"), std::invalid_argument);  // empty set
    }
    SUBCASE("agrees with the re-sort oracle") {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int trial = 0; trial < 20; ++trial) {
            Matrix random(12, 3);
            for (Index r = 0; r < random.rows(); ++r)
                for (Index f = 0; f < random.cols(); ++f) random(r, f) = u(rng);
            const Index q = trial % random.rows();
            const int k = 1 + trial % 6;
            const NeighborList got = knn(random, q, k);
            const NeighborList expected = knn_oracle(random, q, k);
            CHECK(got.indices == expected.indices);
            for (std::size_t i = 0; i < got.distances.size(); ++i)
                CHECK(got.distances[i] == doctest::Approx(expected.distances[i]));
            for (std::size_t i = 1; i < got.distances.size(); ++i)
                CHECK(got.distances[i] >= got.distances[i - 1]);
        }
    }
}

TEST_CASE("random_oversample") {
    const Dataset train = imbalanced_fixture(90, 10, 3);

    SUBCASE("eta 1 balances the classes exactly") {
        const Dataset out = random_oversample(train, 1.0, 5);
        CHECK(out.rows() == 180);
        long minority = 0;
        for (const auto& label : out.labels) minority += label == "minority" ? 1 : 0;
        CHECK(minority == 90);
        CHECK(sorted_hashes(out, "majority") == sorted_hashes(train, "majority"));
    }
    SUBCASE("every appended row copies an original minority row") {
        const Dataset out = random_oversample(train, 0.5, 5);
        const auto originals = sorted_hashes(train, "minority");
        for (Index r = train.rows(); r < out.rows(); ++r) {
            const auto h = testutil::row_hash(out, r);
            CHECK(std::binary_search(originals.begin(), originals.end(), h));
        }
    }
    SUBCASE("eta small enough to round to zero is a no-op") {
        const Dataset nearly = imbalanced_fixture(21, 20, 3);  // gap 1
        const Dataset out = random_oversample(nearly, 0.2, 5);  // round(0.2) = 0
        CHECK(testutil::same_features(out, nearly));
    }
}

TEST_CASE("smote") {
    SUBCASE("synthetics lie on minority segments (k = 1 pairs them up)") {
        const Dataset train = make_dataset(
            {{0, 0}, {4, 4},
             {10, 0}, {11, 0}, {10, 1}, {11, 1}, {12, 0}, {12, 1}, {10, 2}, {11, 2}},
            {"pos", "pos", "neg", "neg", "neg", "neg", "neg", "neg", "neg", "neg"});
        std::vector<SyntheticProvenance> prov;
        const Dataset out = smote(train, 1, 1.0, 9, &prov);
        CHECK(out.rows() == train.rows() + 6);  // gap = 8 - 2
        RowVector a(2), b(2);
        a << 0, 0;
        b << 4, 4;
        for (Index r = train.rows(); r < out.rows(); ++r) {
            const RowVector s = out.features.row(r);
            CHECK(on_segment(s, a, b));
        }
    }
    SUBCASE("provenance reconstructs every synthetic row") {
        const Dataset train = imbalanced_fixture(60, 12, 4);
        std::vector<SyntheticProvenance> prov;
        const Dataset out = smote(train, 5, 1.0, 21, &prov);
        REQUIRE(static_cast<Index>(prov.size()) == out.rows() - train.rows());

        std::vector<Index> minority_rows;
        for (Index r = 0; r < train.rows(); ++r)
            if (train.labels[static_cast<std::size_t>(r)] == "minority")
                minority_rows.push_back(r);

        for (std::size_t i = 0; i < prov.size(); ++i) {
            const RowVector base =
                train.features.row(minority_rows[static_cast<std::size_t>(prov[i].base)]);
            const RowVector nb =
                train.features.row(minority_rows[static_cast<std::size_t>(prov[i].neighbor)]);
            const RowVector s = out.features.row(train.rows() + static_cast<Index>(i));
            CHECK(on_segment(s, base, nb));
            CHECK((s - (base + prov[i].gap * (nb - base))).norm() < 1e-12);
        }
    }
    SUBCASE("exact synthetic count and untouched majority") {
        const Dataset train = imbalanced_fixture(90, 10, 6);
        const Dataset out = smote(train, 5, 1.0, 3);
        CHECK(out.rows() - train.rows() == 80);
        CHECK(sorted_hashes(out, "majority") == sorted_hashes(train, "majority"));
    }
    SUBCASE("too few minority points") {
        const Dataset train = imbalanced_fixture(20, 4, 6);
        CHECK_THROWS_AS(smote(train, 5, 1.0, 3), DataError);
    }
}

TEST_CASE("adasyn") {
    SUBCASE("hardness drives the allocation") {
        // One minority point deep inside the majority cloud, four far away in
        // a tight cluster of their own (so each far point's 3 nearest
        // neighbors are all minority).
        const Dataset train = make_dataset(
            {{0.0, 0.0}, {0.1, 0.0}, {0.0, 0.1}, {0.1, 0.1}, {-0.1, 0.0}, {0.0, -0.1},
             {0.05, 0.05},
             {10.0, 10.0}, {10.1, 10.0}, {10.0, 10.1}, {10.1, 10.1}},
            {"neg", "neg", "neg", "neg", "neg", "neg",
             "pos",
             "pos", "pos", "pos", "pos"});
        const std::vector<long> counts = adasyn_counts(train, 3, 1.0);
        REQUIRE(counts.size() == 5);
        // Minority rows in dataset order: the surrounded point first, then
        // the clean quartet. Only the surrounded one has majority neighbors,
        // so it takes the entire (normalized) allocation.
        CHECK(counts[0] > counts[1]);
        CHECK(counts[1] == 0);
        CHECK(counts[2] == 0);
        CHECK(counts[3] == 0);
        CHECK(counts[4] == 0);
    }
    SUBCASE("separated classes fall back to uniform counts") {
        const Dataset train = make_dataset(
            {{0, 0}, {0.1, 0}, {0, 0.1}, {0.1, 0.1}, {0.2, 0}, {0.2, 0.1},
             {50, 50}, {50.1, 50}},
            {"neg", "neg", "neg", "neg", "neg", "neg", "pos", "pos"});
        const std::vector<long> counts = adasyn_counts(train, 1, 1.0);
        CHECK(counts == std::vector<long>{2, 2});  // gap 4, split evenly
    }
    SUBCASE("counts match an independent recomputation") {
        const Dataset train = imbalanced_fixture(50, 10, 12);
        const int k = 5;
        const std::vector<long> counts = adasyn_counts(train, k, 0.8);

        std::vector<Index> minority_rows;
        for (Index r = 0; r < train.rows(); ++r)
            if (train.labels[static_cast<std::size_t>(r)] == "minority")
                minority_rows.push_back(r);
        std::vector<double> hardness;
        double sum = 0.0;
        for (Index row : minority_rows) {
            const NeighborList nl = knn_oracle(train.features, row, k);
            long majority_neighbors = 0;
            for (Index nb : nl.indices)
                majority_neighbors +=
                    train.labels[static_cast<std::size_t>(nb)] == "majority" ? 1 : 0;
            hardness.push_back(static_cast<double>(majority_neighbors) / k);
            sum += hardness.back();
        }
        const double gap = 40.0;
        for (std::size_t i = 0; i < hardness.size(); ++i) {
            const double share = sum > 0 ? hardness[i] / sum : 1.0 / hardness.size();
            CHECK(counts[i] == std::llround(share * gap * 0.8));
        }

        long total = 0;
        for (long c : counts) total += c;
        CHECK(std::abs(static_cast<double>(total) - 0.8 * gap) <= 10.0 / 2.0 + 1.0);
    }
    SUBCASE("synthetics interpolate toward minority neighbors") {
        const Dataset train = imbalanced_fixture(40, 8, 2);
        std::vector<SyntheticProvenance> prov;
        const Dataset out = adasyn(train, 5, 1.0, 13, &prov);
        REQUIRE(static_cast<Index>(prov.size()) == out.rows() - train.rows());

        std::vector<Index> minority_rows;
        for (Index r = 0; r < train.rows(); ++r)
            if (train.labels[static_cast<std::size_t>(r)] == "minority")
                minority_rows.push_back(r);
        for (std::size_t i = 0; i < prov.size(); ++i) {
            const RowVector base =
                train.features.row(minority_rows[static_cast<std::size_t>(prov[i].base)]);
            const RowVector nb =
                train.features.row(minority_rows[static_cast<std::size_t>(prov[i].neighbor)]);
            CHECK(on_segment(out.features.row(train.rows() + static_cast<Index>(i)), base, nb));
        }
        CHECK(sorted_hashes(out, "majority") == sorted_hashes(train, "majority"));
    }
    SUBCASE("errors") {
        const Dataset lone = make_dataset({{0}, {1}, {2}}, {"a", "b", "b"});
        CHECK_THROWS_AS(adasyn_counts(lone, 1, 1.0), DataError);  // K_l < 2
        const Dataset train = imbalanced_fixture(10, 4, 2);
        CHECK_THROWS_AS(adasyn_counts(train, 14, 1.0), std::invalid_argument);
    }
}

TEST_CASE("enn_clean") {
    SUBCASE("an isolated minority point among majority neighbors is removed") {
        const Dataset train = make_dataset(
            {{0, 0}, {0.1, 0}, {0, 0.1}, {0.1, 0.1},
             {0.05, 0.05},
             {9, 9}, {9.1, 9}, {9, 9.1}},
            {"neg", "neg", "neg", "neg", "pos", "pos", "pos", "pos"});
        const Dataset out = enn_clean(train, 3);
        CHECK(out.rows() == 7);
        for (Index r = 0; r < out.rows(); ++r) {
            const bool is_isolated =
                out.features(r, 0) == 0.05 && out.features(r, 1) == 0.05;
            CHECK_FALSE(is_isolated);
        }
    }
    SUBCASE("well-separated blobs lose nothing") {
        const Dataset train = make_dataset(
            {{0, 0}, {0.1, 0}, {0, 0.1}, {9, 9}, {9.1, 9}, {9, 9.1}},
            {"neg", "neg", "neg", "pos", "pos", "pos"});
        const Dataset out = enn_clean(train, 3);
        CHECK(testutil::same_features(out, train));
    }
    SUBCASE("output rows are a subset of input rows") {
        const Dataset train = imbalanced_fixture(30, 10, 9);
        const Dataset out = enn_clean(train, 3);
        const auto all = sorted_hashes(train);
        const auto kept = sorted_hashes(out);
        CHECK(std::includes(all.begin(), all.end(), kept.begin(), kept.end()));
    }
    SUBCASE("even k is rejected") {
        const Dataset train = imbalanced_fixture(10, 5, 9);
        CHECK_THROWS_AS(enn_clean(train, 4), std::invalid_argument);
        CHECK_THROWS_AS(enn_clean(train, 15), std::invalid_argument);
    }
}

TEST_CASE("smote_enn composes") {
    const Dataset train = imbalanced_fixture(60, 12, 15);
    const Dataset out = smote_enn(train, 5, 1.0, 3, 8);
    // Cleaning may drop rows of either class, but the result stays binary and
    // is deterministic.
    const Dataset again = smote_enn(train, 5, 1.0, 3, 8);
    CHECK(testutil::same_features(out, again));
    CHECK_NOTHROW(validate(out));
}
