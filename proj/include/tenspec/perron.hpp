#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tenspec/check.hpp"
#include "tenspec/tensor.hpp"

namespace tenspec {

struct PerronOptions {
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    bool record_trace = false;
};

struct CwBounds {
    double lower = 0.0;
    double upper = 0.0;
};

struct EigenCertificate {
    double rho = 0.0;
    Vector u;      // u_n = 1; empty when unset (zero tensor)
    Vector u_max;  // same direction, max entry 1
    Vector w;      // w.u = 1; empty when not computed
    Matrix A;
    double cw_lower = 0.0;
    double cw_upper = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;  // at u_max
    bool regularized = false;
    std::vector<CwBounds> trace;

    bool has_eigenvector() const { return u.size() > 0; }
    bool has_left_data() const { return w.size() > 0; }
};

CwBounds collatz_wielandt(const DenseTensor& t, const Vector& x);
EigenCertificate spectral_radius(const DenseTensor& t, const PerronOptions& opt = {});
std::pair<Matrix, Vector> left_data(const DenseTensor& t, const EigenCertificate& cert);
double perturbation_coefficient(const DenseTensor& t, const DenseTensor& s, const EigenCertificate& cert);

// log rho(T^{.s}) computed with log-domain contractions
struct LogRadius {
    double log_rho = 0.0;
    double log_lower = 0.0;
    double log_upper = 0.0;
    bool regularized = false;
    bool zero = false;
};
LogRadius log_spectral_radius_power(const DenseTensor& t, double s, const PerronOptions& opt = {});

struct KroneckerReport {
    double rho_e = 0.0, rho_f = 0.0, rho_kron = 0.0;
    double product_gap = 0.0;
    std::optional<double> rho_hadamard;
    std::optional<double> hadamard_margin;
    bool pass = false;
};
KroneckerReport kronecker_radius_check(const DenseTensor& e, const DenseTensor& f, double tol = 1e-9);

struct ScalingCertificate {
    Vector b;  // first-index scaling (log)
    Vector c;  // tail scaling (log)
    DenseTensor scaled;
    double objective_gradient_norm = 0.0;
    std::size_t iterations = 0;
};
struct ScalingOptions {
    double grad_tol = 1e-10;
    std::size_t max_iter = 50000;
};
ScalingCertificate diagonal_equivalence(const DenseTensor& t, const Vector& u, const Vector& w,
                                        const ScalingOptions& opt = {});
// max-norm residuals of T(u) = u^{d-1} and A^T w = (d-1) w
std::pair<double, double> scaling_residuals(const ScalingCertificate& cert, const Vector& u, const Vector& w);

struct FkReport {
    double lhs = 0.0;  // rho(diag(y) T)
    double rhs = 0.0;  // rho(T) prod y_i^{u_i w_i}
    double margin = 0.0;
    std::optional<double> symmetric_rhs;
    bool pass = false;
};
FkReport friedland_karlin_check(const DenseTensor& t, const Vector& y, const EigenCertificate& cert, double tol = 1e-9);

// sum_i u_i w_i log(T(x)_i / x_i^{d-1})
double fk_min_functional(const DenseTensor& t, const EigenCertificate& cert, const Vector& x);
struct MinCharReport {
    std::size_t trials = 0;
    std::size_t violations = 0;
    double min_margin = 0.0;      // over random x, value - log rho
    double equality_error = 0.0;  // |value(u) - log rho|
    bool pass = false;
};
MinCharReport fk_min_characterization(const DenseTensor& t, const EigenCertificate& cert, std::size_t trials,
                                      std::uint64_t seed, double tol = 1e-9);

double convex_form_ratio(const DenseTensor& t, const Vector& y, const Vector& x);
struct ConvexFormReport {
    double sampled_sup = 0.0;  // sup ratio / d^{d/(d-1)}
    double bound = 0.0;        // rho(diag(y) T)^{1/(d-1)}
    double at_eigenvector = 0.0;
    double margin = 0.0;
    double min_form_on_sphere = 0.0;
    // smallest Hessian eigenvalue of x^T T(x) over the sampled unit x; negative = not convex
    double min_hessian_eig = 0.0;
    bool pass = false;
};
// convexity of x^T T(x) is assumed, not verified
ConvexFormReport convex_form_sup_check(const DenseTensor& t, const Vector& y, std::size_t samples,
                                       std::uint64_t seed, double tol = 1e-9);

CheckRecord kingman_check(const DenseTensor& f, const DenseTensor& g, double alpha, double tol = 1e-9);
CheckRecord cohen_midpoint_check(const DenseTensor& t, const Vector& diag_direction, double tau1, double tau2,
                                 double tol = 1e-9);
CheckRecord monotonicity_check(const DenseTensor& e, const DenseTensor& f, double tol = 1e-9);

}  // namespace tenspec
