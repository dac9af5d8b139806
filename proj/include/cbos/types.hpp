#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cbos {

// Dense row-major-by-convention containers: rows are samples, columns are
// features. Eigen is the only math dependency.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

/// Malformed or contract-violating data (bad CSV, non-binary labels,
/// unreachable imbalance target, ...). The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cbos
