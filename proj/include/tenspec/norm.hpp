#pragma once

#include <cstdint>
#include <vector>

#include "tenspec/check.hpp"
#include "tenspec/tensor.hpp"

namespace tenspec {

struct NormOptions {
    std::size_t restarts = 16;  // random starts in addition to the ones vector
    std::uint64_t seed = 0;
    double tol = 1e-15;
    std::size_t max_sweeps = 20000;
};

// value is a certified lower bound of the spectral norm
struct NormCertificate {
    double value = 0.0;
    std::vector<Vector> maximizers;
    std::size_t restarts = 0;
    bool is_lower_bound = true;
    std::vector<double> start_values;
    std::size_t agreeing_starts = 0;  // starts within 1e-8 (relative) of the best
    bool monotone = true;             // every sweep was nondecreasing

    bool stabilized() const { return agreeing_starts >= 2; }
};

NormCertificate spectral_norm(const DenseTensor& t, const NormOptions& opt = {});
double hilbert_schmidt(const DenseTensor& t);
double ell_inf(const DenseTensor& t);

CheckRecord norm_radius_bound_check(const DenseTensor& t, const NormOptions& opt = {}, double tol = 1e-9);

struct NormSuiteParams {
    std::uint64_t seed = 0;
    double alpha = 0.5;
    double tol = 1e-9;
    NormOptions norm;
};
std::vector<CheckRecord> norm_inequality_suite(const DenseTensor& a, const DenseTensor& b,
                                               const NormSuiteParams& params = {});

}  // namespace tenspec
