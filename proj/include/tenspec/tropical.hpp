#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tenspec/tensor.hpp"

namespace tenspec {

enum class TropicalMethod { km_iteration, policy_iteration, cycle_enumeration };
const char* method_name(TropicalMethod m);

// choice[i] indexes SparseSupportTensor::entries(); unset outside the domain
struct Policy {
    std::vector<std::optional<std::size_t>> choice;
    bool partial() const;
};

struct TropicalEigenPair {
    double rho_trop = 0.0;
    double log_rho_trop = 0.0;  // -inf encoded only when rho_trop == 0
    Vector v;
    TropicalMethod method = TropicalMethod::km_iteration;
    std::optional<Policy> optimal_policy;
    std::size_t iterations = 0;
};

Vector tropical_apply(const SparseSupportTensor& t, const Vector& x);
// max relative defect of the tropical eigen-equation over rows with v_i > 0
double tropical_eigen_residual(const SparseSupportTensor& t, const TropicalEigenPair& p);

struct KmOptions {
    double tol = 1e-12;
    std::size_t max_iter = 2000000;
};
TropicalEigenPair tropical_eigenpair_km(const SparseSupportTensor& t, const KmOptions& opt = {});
TropicalEigenPair tropical_eigenpair_policy(const SparseSupportTensor& t);

struct KCycle {
    std::vector<std::size_t> vertices;  // sorted
    std::vector<std::size_t> actions;   // entry index chosen at each vertex
    Matrix A;                           // tail-count adjacency on the vertices
    Vector u;                           // A^T u = (d-1) u, sum 1
};

constexpr std::size_t kPolicyCap = 1000000;
std::size_t policy_count(const SparseSupportTensor& t);  // saturates at SIZE_MAX
std::vector<KCycle> enumerate_k_cycles(const SparseSupportTensor& t, std::size_t cap = kPolicyCap);
double log_cycle_weight(const KCycle& g, const SparseSupportTensor& t);
double cycle_weight(const KCycle& g, const SparseSupportTensor& t);
TropicalEigenPair tropical_radius_by_cycles(const SparseSupportTensor& t, std::size_t cap = kPolicyCap);

// occupation frequencies of the optimal policy on a max-gain recurrent class,
// one value per concise entry (zero off the class)
std::vector<double> policy_occupation(const SparseSupportTensor& t, const TropicalEigenPair& p);

struct RhoInfinity {
    double value = 0.0;  // rho(T^{.s})^{1/s} at the last s
    std::vector<std::pair<double, double>> trace;
    bool regularized = false;
};
std::vector<double> default_s_schedule();
RhoInfinity rho_infinity(const DenseTensor& t, const std::vector<double>& schedule = default_s_schedule());

struct TropicalBoundsReport {
    double rho_t = 0.0, rho_e = 0.0, rho_te = 0.0, rho_pattern_e = 0.0, rho_trop_e = 0.0;
    double hadamard_margin = 0.0;  // rho(T) rho_trop(E) - rho(T.E)
    double pattern_margin = 0.0;   // rho(pat E) rho_trop(E) - rho(E)
    bool pass = false;
};
TropicalBoundsReport tropical_bounds_check(const DenseTensor& t, const DenseTensor& e, double tol = 1e-9);

}  // namespace tenspec
