#pragma once

#include <cstdint>
#include <random>

#include "tenspec/tensor.hpp"

namespace tenspec {

using Rng = std::mt19937_64;

// uniform on (0, 1]
double uniform01(Rng& rng);
Vector random_positive_vector(Rng& rng, std::size_t n, double lo = 0.1, double hi = 1.0);
Vector random_simplex_point(Rng& rng, std::size_t n);

struct GenOptions {
    std::size_t n = 3;
    std::size_t d = 3;
    double density = 1.0;
    bool weakly_irreducible = true;
    std::size_t max_attempts = 100000;
};

// entries iid uniform(0,1], thinned to density, tail-symmetrized; weak
// irreducibility by rejection
DenseTensor random_tensor(Rng& rng, const GenOptions& opt);
// same distribution on concise entries
SparseSupportTensor random_sparse_tensor(Rng& rng, const GenOptions& opt);
// uniform(0,1] on every orbit, no thinning, no symmetrization loss
DenseTensor random_positive_tensor(Rng& rng, std::size_t n, std::size_t d);
DenseTensor random_general_tensor(Rng& rng, const std::vector<std::size_t>& dims, double density = 1.0);

}  // namespace tenspec
