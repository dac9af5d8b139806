#include "cbos/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cbos {

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double safe_ratio(long num, long den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

}  // namespace

double logistic_loss(const Matrix& X, const Vector& y, const Vector& w, double b) {
    const Vector z = X * w + Vector::Constant(X.rows(), b);
    double acc = 0.0;
    for (Index i = 0; i < z.size(); ++i) acc += softplus(z(i)) - y(i) * z(i);
    return acc / static_cast<double>(z.size());
}

void logistic_gradient(const Matrix& X, const Vector& y, const Vector& w, double b,
                       Vector& grad_w, double& grad_b) {
    const Index n = X.rows();
    const Vector z = X * w + Vector::Constant(n, b);
    const Vector residual = z.unaryExpr([](double v) { return sigmoid(v); }) - y;
    grad_w = X.transpose() * residual / static_cast<double>(n);
    grad_b = residual.mean();
}

LinearModel train_linear(const Dataset& train, int epochs, double learning_rate,
                         std::uint64_t seed, const std::string& positive_label) {
    if (epochs < 0) throw std::invalid_argument("train_linear: epochs must be >= 0");
    if (!(learning_rate > 0.0))
        throw std::invalid_argument("train_linear: learning rate must be positive");
    const ImbalanceProfile prof = profile(train);

    LinearModel m;
    if (positive_label == "auto") {
        m.positive_label = prof.minority_label;
        m.negative_label = prof.majority_label;
    } else if (positive_label == prof.minority_label) {
        m.positive_label = prof.minority_label;
        m.negative_label = prof.majority_label;
    } else if (positive_label == prof.majority_label) {
        m.positive_label = prof.majority_label;
        m.negative_label = prof.minority_label;
    } else {
        throw std::invalid_argument("train_linear: positive label '" + positive_label +
                                    "' does not occur in the dataset");
    }

    const Index n = train.rows();
    const Index dims = train.dims();
    m.feature_means = train.features.colwise().mean().transpose();
    m.feature_stds.resize(dims);
    for (Index f = 0; f < dims; ++f) {
        const double var = (train.features.col(f).array() - m.feature_means(f)).square().mean();
        const double sd = std::sqrt(var);
        m.feature_stds(f) = sd > 1e-12 ? sd : 1.0;
    }

    Matrix X(n, dims);
    for (Index f = 0; f < dims; ++f)
        X.col(f) = (train.features.col(f).array() - m.feature_means(f)) / m.feature_stds(f);

    Vector y(n);
    for (Index r = 0; r < n; ++r)
        y(r) = train.labels[static_cast<std::size_t>(r)] == m.positive_label ? 1.0 : 0.0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> init(-0.01, 0.01);
    m.weights.resize(dims);
    for (Index f = 0; f < dims; ++f) m.weights(f) = init(rng);
    m.bias = 0.0;

    m.loss_trace.reserve(static_cast<std::size_t>(epochs) + 1);
    m.loss_trace.push_back(logistic_loss(X, y, m.weights, m.bias));
    Vector grad_w;
    double grad_b = 0.0;
    for (int e = 0; e < epochs; ++e) {
        logistic_gradient(X, y, m.weights, m.bias, grad_w, grad_b);
        m.weights -= learning_rate * grad_w;
        m.bias -= learning_rate * grad_b;
        m.loss_trace.push_back(logistic_loss(X, y, m.weights, m.bias));
    }
    return m;
}

std::vector<std::string> predict_labels(const LinearModel& m, const Dataset& d) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(d.rows()));
    for (Index r = 0; r < d.rows(); ++r) out.push_back(predict_label(m, d.features.row(r)));
    return out;
}

ConfusionMatrix confusion(const std::vector<std::string>& predicted,
                          const std::vector<std::string>& truth,
                          const std::string& positive_label) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("confusion: prediction count (" +
                                    std::to_string(predicted.size()) +
                                    ") does not match truth count (" +
                                    std::to_string(truth.size()) + ")");

    // Binary setting: besides the positive label, exactly one negative label
    // may occur across both vectors.
    std::string negative;
    auto check_label = [&](const std::string& label) {
        if (label == positive_label) return;
        if (negative.empty()) {
            negative = label;
        } else if (label != negative) {
            throw std::invalid_argument("confusion: unknown label '" + label +
                                        "' (expected '" + positive_label + "' or '" + negative +
                                        "')");
        }
    };

    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        check_label(predicted[i]);
        check_label(truth[i]);
        const bool pred_pos = predicted[i] == positive_label;
        const bool true_pos = truth[i] == positive_label;
        if (pred_pos && true_pos) ++cm.tp;
        else if (pred_pos && !true_pos) ++cm.fp;
        else if (!pred_pos && true_pos) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm, double beta) {
    if (cm.total() == 0) throw std::invalid_argument("metrics: all-zero confusion matrix");
    if (!(beta > 0.0)) throw std::invalid_argument("metrics: beta must be positive");

    MetricsReport r;
    r.beta = beta;
    r.precision = safe_ratio(cm.tp, cm.tp + cm.fp);
    r.recall = safe_ratio(cm.tp, cm.tp + cm.fn);
    r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());

    const double b2 = beta * beta;
    const double f_den = b2 * r.recall + r.precision;
    r.f_score = f_den > 0.0 ? (1.0 + b2) * r.recall * r.precision / f_den : 0.0;

    const double tpr = safe_ratio(cm.tp, cm.tp + cm.fn);
    const double tnr = safe_ratio(cm.tn, cm.tn + cm.fp);
    r.g_mean = std::sqrt(tpr * tnr);
    return r;
}

}  // namespace cbos
