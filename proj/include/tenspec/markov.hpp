#pragma once

#include <vector>

#include "tenspec/tensor.hpp"

namespace tenspec {

// closed strongly connected classes of the support graph of a nonnegative matrix
std::vector<std::vector<std::size_t>> recurrent_classes(const Matrix& p);
// stationary distribution of the chain restricted to a closed class (sums to 1)
Vector stationary_distribution(const Matrix& p, const std::vector<std::size_t>& cls);

}  // namespace tenspec
