#include "cbos/evaluation.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace cbos;
using testutil::make_dataset;

namespace {

// Central finite differences of logistic_loss, coordinate by coordinate.
void fd_gradient(const Matrix& X, const Vector& y, const Vector& w, double b, Vector& grad_w,
                 double& grad_b) {
    const double h = 1e-6;
    grad_w.resize(w.size());
    for (Index f = 0; f < w.size(); ++f) {
        Vector lo = w, hi = w;
        lo(f) -= h;
        hi(f) += h;
        grad_w(f) = (logistic_loss(X, y, hi, b) - logistic_loss(X, y, lo, b)) / (2 * h);
    }
    grad_b = (logistic_loss(X, y, w, b + h) - logistic_loss(X, y, w, b - h)) / (2 * h);
}

}  // namespace

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);

    Matrix X(30, 4);
    Vector y(30);
    for (Index r = 0; r < X.rows(); ++r) {
        for (Index f = 0; f < X.cols(); ++f) X(r, f) = gauss(rng);
        y(r) = coin(rng);
    }

    for (int point = 0; point < 10; ++point) {
        Vector w(4);
        for (Index f = 0; f < 4; ++f) w(f) = gauss(rng);
        const double b = gauss(rng);

        Vector analytic_w, fd_w;
        double analytic_b = 0.0, fd_b = 0.0;
        logistic_gradient(X, y, w, b, analytic_w, analytic_b);
        fd_gradient(X, y, w, b, fd_w, fd_b);

        for (Index f = 0; f < 4; ++f) {
            const double scale = std::max(1e-8, std::abs(fd_w(f)));
            CHECK(std::abs(analytic_w(f) - fd_w(f)) / scale < 1e-4);
        }
        const double scale_b = std::max(1e-8, std::abs(fd_b));
        CHECK(std::abs(analytic_b - fd_b) / scale_b < 1e-4);
    }
}

TEST_CASE("train_linear") {
    SUBCASE("separable 1-d data is classified perfectly") {
        const Dataset d =
            make_dataset({{-1}, {-0.8}, {-1.2}, {1}, {0.8}, {1.2}},
                         {"neg", "neg", "neg", "pos", "pos", "pos"});
        const LinearModel m = train_linear(d, 500, 0.5, 7);
        for (Index r = 0; r < d.rows(); ++r)
            CHECK(predict_label(m, d.features.row(r)) ==
                  d.labels[static_cast<std::size_t>(r)]);
    }
    SUBCASE("zero epochs leaves near-prior predictions") {
        const Dataset d = make_dataset({{-1}, {1}, {2}, {-2}}, {"neg", "pos", "pos", "neg"});
        const LinearModel m = train_linear(d, 0, 0.5, 7);
        for (Index r = 0; r < d.rows(); ++r)
            CHECK(predict(m, d.features.row(r)) == doctest::Approx(0.5).epsilon(0.05));
    }
    SUBCASE("loss is non-increasing at a small learning rate") {
        const Dataset d = make_blobs(40, 12, 3, 2, 1.0, 3);
        const LinearModel m = train_linear(d, 200, 0.01, 5);
        REQUIRE(m.loss_trace.size() == 201);
        for (std::size_t t = 1; t < m.loss_trace.size(); ++t)
            CHECK(m.loss_trace[t] <= m.loss_trace[t - 1] + 1e-12);
    }
    SUBCASE("positive label resolution") {
        const Dataset d = make_dataset({{-1}, {1}, {2}}, {"neg", "pos", "neg"});
        const LinearModel auto_m = train_linear(d, 10, 0.1, 1);
        CHECK(auto_m.positive_label == "pos");  // minority
        const LinearModel flipped = train_linear(d, 10, 0.1, 1, "neg");
        CHECK(flipped.positive_label == "neg");
        CHECK_THROWS_AS(train_linear(d, 10, 0.1, 1, "zzz"), std::invalid_argument);
    }
    SUBCASE("constant features get unit std") {
        const Dataset d = make_dataset({{1, 5}, {2, 5}, {3, 5}, {4, 5}},
                                       {"a", "a", "b", "b"});
        const LinearModel m = train_linear(d, 10, 0.1, 1);
        CHECK(m.feature_stds(1) == 1.0);
    }
    SUBCASE("argument errors") {
        const Dataset d = make_dataset({{1}, {2}}, {"a", "b"});
        CHECK_THROWS_AS(train_linear(d, -1, 0.1, 1), std::invalid_argument);
        CHECK_THROWS_AS(train_linear(d, 10, 0.0, 1), std::invalid_argument);
    }
    SUBCASE("deterministic for a fixed seed, with finite parameters") {
        const Dataset d = make_blobs(30, 10, 3, 2, 1.0, 9);
        const LinearModel a = train_linear(d, 50, 0.3, 42);
        const LinearModel b = train_linear(d, 50, 0.3, 42);
        CHECK((a.weights.array() == b.weights.array()).all());
        CHECK(a.bias == b.bias);
        CHECK(a.weights.allFinite());
        CHECK(std::isfinite(a.bias));
    }
}

TEST_CASE("predict") {
    LinearModel m;
    m.weights = Vector::Zero(2);
    m.feature_means = Vector::Zero(2);
    m.feature_stds = Vector::Constant(2, 1.0);
    m.positive_label = "pos";
    m.negative_label = "neg";

    Vector x(2);
    x << 3, -4;

    SUBCASE("zero weights give 0.5") { CHECK(predict(m, x) == doctest::Approx(0.5)); }
    SUBCASE("probability is monotone in the bias and stays inside (0, 1)") {
        double previous = 0.0;
        for (double bias : {-20.0, -2.0, 0.0, 2.0, 20.0}) {
            m.bias = bias;
            const double p = predict(m, x);
            CHECK(p > 0.0);
            CHECK(p < 1.0);
            CHECK(p > previous);
            previous = p;
        }
    }
    SUBCASE("dimension mismatch") {
        Vector bad(3);
        CHECK_THROWS_AS(predict(m, bad), std::invalid_argument);
    }
}

TEST_CASE("confusion") {
    SUBCASE("perfect predictions") {
        const std::vector<std::string> truth{"p", "p", "p", "p", "p", "n", "n", "n", "n", "n"};
        const ConfusionMatrix cm = confusion(truth, truth, "p");
        CHECK(cm.tp == 5);
        CHECK(cm.tn == 5);
        CHECK(cm.fp == 0);
        CHECK(cm.fn == 0);
    }
    SUBCASE("all predicted positive") {
        const std::vector<std::string> predicted{"p", "p", "p", "p", "p"};
        const std::vector<std::string> truth{"p", "p", "n", "n", "n"};
        const ConfusionMatrix cm = confusion(predicted, truth, "p");
        CHECK(cm.tp == 2);
        CHECK(cm.fp == 3);
        CHECK(cm.tn == 0);
        CHECK(cm.fn == 0);
    }
    SUBCASE("empty vectors count nothing") {
        const ConfusionMatrix cm = confusion({}, {}, "p");
        CHECK(cm.total() == 0);
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(confusion({"p"}, {"p", "n"}, "p"), std::invalid_argument);
    }
    SUBCASE("a third label is rejected") {
        CHECK_THROWS_AS(confusion({"p", "x"}, {"p", "n"}, "p"), std::invalid_argument);
    }
}

TEST_CASE("metrics") {
    SUBCASE("reference matrix") {
        const MetricsReport r = metrics({50, 10, 30, 10}, 1.0);
        CHECK(r.precision == doctest::Approx(50.0 / 60.0));
        CHECK(r.recall == doctest::Approx(50.0 / 60.0));
        CHECK(r.accuracy == doctest::Approx(0.8));
        CHECK(r.f_score == doctest::Approx(0.8333).epsilon(1e-4));
        CHECK(r.g_mean == doctest::Approx(0.7906).epsilon(1e-4));
    }
    SUBCASE("perfect classifier") {
        const MetricsReport r = metrics({10, 0, 20, 0}, 1.0);
        CHECK(r.precision == 1.0);
        CHECK(r.recall == 1.0);
        CHECK(r.accuracy == 1.0);
        CHECK(r.f_score == 1.0);
        CHECK(r.g_mean == 1.0);
    }
    SUBCASE("zero true positives propagate zeros") {
        const MetricsReport r = metrics({0, 0, 5, 5}, 1.0);
        CHECK(r.recall == 0.0);
        CHECK(r.f_score == 0.0);
        CHECK(r.g_mean == 0.0);
        CHECK(r.precision == 0.0);  // 0/0 convention
    }
    SUBCASE("f-score at beta 1 is the harmonic mean when both parts are positive") {
        std::mt19937_64 rng(12);
        std::uniform_int_distribution<long> count(1, 40);
        for (int trial = 0; trial < 30; ++trial) {
            const ConfusionMatrix cm{count(rng), count(rng), count(rng), count(rng)};
            const MetricsReport r = metrics(cm, 1.0);
            const double harmonic = 2.0 * r.precision * r.recall / (r.precision + r.recall);
            CHECK(r.f_score == doctest::Approx(harmonic).epsilon(1e-12));
            CHECK(r.f_score >= std::min(r.precision, r.recall) - 1e-12);
            CHECK(r.f_score <= std::max(r.precision, r.recall) + 1e-12);
        }
    }
    SUBCASE("g-mean is symmetric under tp/tn and fp/fn swaps") {
        const MetricsReport a = metrics({7, 3, 11, 5}, 1.0);
        const MetricsReport b = metrics({11, 5, 7, 3}, 1.0);
        CHECK(a.g_mean == doctest::Approx(b.g_mean).epsilon(1e-12));
    }
    SUBCASE("beta weighting") {
        const ConfusionMatrix cm{30, 20, 40, 10};
        const MetricsReport r2 = metrics(cm, 2.0);
        const double p = 30.0 / 50.0, rec = 30.0 / 40.0;
        CHECK(r2.f_score == doctest::Approx(5.0 * p * rec / (4.0 * rec + p)));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(metrics({0, 0, 0, 0}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(metrics({1, 0, 0, 0}, 0.0), std::invalid_argument);
    }
}
