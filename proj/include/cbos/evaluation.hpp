#pragma once

#include "cbos/dataset.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace cbos {

/// Counts with the minority class as positive.
struct ConfusionMatrix {
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;

    long total() const { return tp + fp + tn + fn; }
};

struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double f_score = 0.0;
    double g_mean = 0.0;
    double beta = 1.0;
};

/// Logistic classifier over standardized features. Standardization lives in
/// the model so resamplers always operate in raw feature space.
struct LinearModel {
    Vector weights;
    double bias = 0.0;
    Vector feature_means;
    Vector feature_stds;  // strictly positive; constant features get 1
    std::string positive_label;
    std::string negative_label;
    std::vector<double> loss_trace;  // index 0 = loss at initialization
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Mean logistic loss of the affine score X w + b against 0/1 targets y.
double logistic_loss(const Matrix& X, const Vector& y, const Vector& w, double b);

/// Analytic gradient of logistic_loss with respect to w and b.
void logistic_gradient(const Matrix& X, const Vector& y, const Vector& w, double b,
                       Vector& grad_w, double& grad_b);

/// Full-batch gradient descent on the logistic loss over standardized
/// features. The positive class maps to 1; "auto" resolves it to the
/// dataset's minority. The seed drives the small random weight
/// initialization.
LinearModel train_linear(const Dataset& train, int epochs, double learning_rate,
                         std::uint64_t seed, const std::string& positive_label = "auto");

/// Probability of the positive class, strictly inside (0, 1).
template <typename Derived>
double predict(const LinearModel& m, const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != m.weights.size())
        throw std::invalid_argument("predict: feature dimension " + std::to_string(x.size()) +
                                    " does not match model dimension " +
                                    std::to_string(m.weights.size()));
    double z = m.bias;
    for (Index f = 0; f < x.size(); ++f)
        z += m.weights(f) * ((static_cast<double>(x(f)) - m.feature_means(f)) / m.feature_stds(f));
    return sigmoid(z);
}

/// Positive iff predicted probability >= 0.5.
template <typename Derived>
std::string predict_label(const LinearModel& m, const Eigen::MatrixBase<Derived>& x) {
    return predict(m, x) >= 0.5 ? m.positive_label : m.negative_label;
}

std::vector<std::string> predict_labels(const LinearModel& m, const Dataset& d);

/// Standard counts; any entry that is neither positive_label nor the single
/// negative label seen across both vectors is rejected.
ConfusionMatrix confusion(const std::vector<std::string>& predicted,
                          const std::vector<std::string>& truth,
                          const std::string& positive_label);

/// precision, recall, accuracy, F-score with the given beta, and G-mean.
/// Every 0/0 ratio is defined as 0.
MetricsReport metrics(const ConfusionMatrix& cm, double beta = 1.0);

}  // namespace cbos
