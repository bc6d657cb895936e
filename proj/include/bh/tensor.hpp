#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace bh::tensor {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// out = matrix applied along `axis` of a row-major tensor. The output shape equals
/// `shape` with shape[axis] replaced by matrix.rows().
std::vector<double> apply_along_axis(const std::vector<double>& values,
                                     const std::vector<std::size_t>& shape, std::size_t axis,
                                     const Matrix& matrix);

}  // namespace bh::tensor
