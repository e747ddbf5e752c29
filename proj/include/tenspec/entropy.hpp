#pragma once

#include <vector>

#include "tenspec/extended_real.hpp"
#include "tenspec/perron.hpp"
#include "tenspec/random.hpp"
#include "tenspec/tensor.hpp"

namespace tenspec {

struct MeasureResiduals {
    double mass_error = 0.0;     // |sum mu - 1|
    double balance_error = 0.0;  // max_j |row_j - col_j|
    double min_entry = 0.0;
    bool valid(double tol) const { return mass_error <= tol && balance_error <= tol && min_entry >= -tol; }
};

// matrix occupation measures: mass 1, row sums equal column sums
MeasureResiduals matrix_measure_residuals(const Matrix& mu);
// tensor occupation measures: mass 1, row_j = sum of mu over i2 = j
MeasureResiduals tensor_measure_residuals(const DenseTensor& mu);

Matrix cycle_measure(const std::vector<std::size_t>& gamma, std::size_t n);

struct CycleTerm {
    std::vector<std::size_t> cycle;
    double weight = 0.0;
};
std::vector<CycleTerm> extreme_point_decompose(const Matrix& mu);

Matrix psi_map(const Matrix& mu);

struct PhiResult {
    std::vector<Matrix> measures;  // one per recurrent class
    bool unique = false;
};
PhiResult phi_map(const Matrix& a);

ExtendedReal matrix_entropy_objective(const Matrix& a, const Matrix& mu);
ExtendedReal tensor_entropy_objective(const DenseTensor& t, const DenseTensor& mu);
DenseTensor optimal_tensor_measure(const DenseTensor& t, const EigenCertificate& cert);

struct DvOptions {
    double grad_tol = 1e-11;
    std::size_t max_iter = 200000;
};
// inf over x > 0 of sum p_i log(T(x)_i / x_i^{d-1}); cert may be null
ExtendedReal donsker_varadhan(const DenseTensor& t, const Vector& p, const EigenCertificate* cert = nullptr,
                              const DvOptions& opt = {});
// inf over x > 0 of sum p_i T(x)_i / x_i^{d-1}
double donsker_varadhan_exp(const DenseTensor& t, const Vector& p, const EigenCertificate* cert = nullptr,
                            const DvOptions& opt = {});

// feasible measure supported in supp(T): random start projected onto the
// balance polytope by Dykstra's alternating projections
DenseTensor random_feasible_measure(const DenseTensor& t, Rng& rng, double tol = 1e-12);

}  // namespace tenspec
