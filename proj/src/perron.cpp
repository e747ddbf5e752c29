#include "tenspec/perron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tenspec/errors.hpp"
#include "tenspec/structure.hpp"

namespace tenspec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse2(double a, double b) {
    const double m = std::max(a, b);
    if (m == kNegInf) return kNegInf;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// relative CW gap for log-bounds
double gap_measure(double lo, double up) {
    if (lo == kNegInf) return 1.0;
    return -std::expm1(lo - up);
}

struct LogIteration {
    Vector y;
    double lo = 0.0, up = 0.0;
    std::size_t iterations = 0;
    std::vector<CwBounds> trace;
};

// normalized shifted power iteration in log coordinates; log_apply(y) = log T(e^y)
template <class F>
LogIteration log_power_iterate(std::size_t n, std::size_t d, F&& log_apply, double log_sigma, const PerronOptions& opt) {
    const double dm1 = static_cast<double>(d - 1);
    LogIteration st;
    Vector y = Vector::Zero(static_cast<Eigen::Index>(n));
    Vector best_y = y;
    double best_lo = kNegInf, best_up = std::numeric_limits<double>::infinity();
    std::size_t polish = 0, stale = 0;
    bool converged = false;
    for (std::size_t it = 0;; ++it) {
        Vector z = log_apply(y);
        Vector r = z - dm1 * y;
        const double lo = r.minCoeff(), up = r.maxCoeff();
        if (opt.record_trace) st.trace.push_back({lo, up});
        if (up - lo < best_up - best_lo || it == 0) {
            best_y = y;
            best_lo = lo;
            best_up = up;
            stale = 0;
        } else {
            ++stale;
        }
        st.iterations = it + 1;
        if (!converged && gap_measure(best_lo, best_up) <= opt.tol) converged = true;
        if (converged) {
            // a few extra sweeps drive the gap toward rounding level
            if (++polish > 200 || stale >= 3 || best_up - best_lo <= 4e-16 * (1.0 + std::abs(best_up))) break;
        } else if (it + 1 >= opt.max_iter) {
            throw ConvergenceError("power iteration hit max_iter", std::exp(best_lo), std::exp(best_up), st.iterations);
        }
        // shift tracks half the current lower bound; any positive shift keeps the bounds monotone
        const double shift = lo == kNegInf ? log_sigma : lo + std::log(0.5);
        Vector next(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < next.size(); ++i) next[i] = lse2(z[i], shift + dm1 * y[i]) / dm1;
        y = next.array() - next.maxCoeff();
    }
    st.y = best_y;
    st.lo = best_lo;
    st.up = best_up;
    return st;
}

void require_solver_input(const DenseTensor& t) {
    t.n();
    for (double v : t.values())
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("tensor entries must be finite and nonnegative");
    if (!is_tail_symmetric(t)) throw SymmetryError("tensor is not partially symmetric; symmetrize_tail first");
}

double max_diagonal(const DenseTensor& t) {
    double m = 0.0;
    for (std::size_t i = 0; i < t.n(); ++i) m = std::max(m, t(Index(t.order(), i)));
    return m;
}

struct DirectSolve {
    double rho;
    Vector u_max;
    CwBounds bounds;
    std::size_t iterations;
    std::vector<CwBounds> trace;
};

DirectSolve solve_weakly_irreducible(const DenseTensor& t, const PerronOptions& opt) {
    const std::size_t n = t.n(), d = t.order();
    const double row_max = apply(t, Vector::Ones(static_cast<Eigen::Index>(n))).maxCoeff();
    const double sigma = std::max(max_diagonal(t), 0.25 * row_max) + std::numeric_limits<double>::epsilon() * row_max;
    auto log_apply = [&](const Vector& y) -> Vector { return apply(t, y.array().exp().matrix()).array().log(); };
    LogIteration it = log_power_iterate(n, d, log_apply, std::log(sigma), opt);
    DirectSolve out;
    out.u_max = it.y.array().exp();
    out.bounds = collatz_wielandt(t, out.u_max);
    out.rho = 0.5 * (out.bounds.lower + out.bounds.upper);
    out.iterations = it.iterations;
    for (const CwBounds& b : it.trace) out.trace.push_back({std::exp(b.lower), std::exp(b.upper)});
    return out;
}

double eigen_residual(const DenseTensor& t, const Vector& u, double rho) {
    const double dm1 = static_cast<double>(t.order() - 1);
    Vector r = apply(t, u) - rho * u.array().pow(dm1).matrix();
    return r.cwiseAbs().maxCoeff();
}

}  // namespace

CwBounds collatz_wielandt(const DenseTensor& t, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != t.n()) throw ShapeError("vector length does not match n");
    if ((x.array() <= 0.0).any()) throw DomainError("collatz_wielandt needs a positive vector");
    const double dm1 = static_cast<double>(t.order() - 1);
    Vector r = apply(t, x).array() / x.array().pow(dm1);
    return {r.minCoeff(), r.maxCoeff()};
}

EigenCertificate spectral_radius(const DenseTensor& t, const PerronOptions& opt) {
    require_solver_input(t);
    const std::size_t n = t.n();
    EigenCertificate cert;
    if (t.max_entry() == 0.0) return cert;

    if (weak_irreducibility(t).holds) {
        DirectSolve s = solve_weakly_irreducible(t, opt);
        cert.rho = s.rho;
        cert.u_max = s.u_max;
        cert.cw_lower = s.bounds.lower;
        cert.cw_upper = s.bounds.upper;
        cert.iterations = s.iterations;
        cert.trace = std::move(s.trace);
    } else {
        // eps J regularization, scaled by the largest entry, with linear extrapolation in eps
        const double m = t.max_entry();
        const double eps[3] = {1e-4, 1e-6, 1e-8};
        double rho[3] = {0, 0, 0};
        DirectSolve last;
        for (int k = 0; k < 3; ++k) {
            DenseTensor te = add(t, DenseTensor::ones(n, t.order()), eps[k] * m);
            last = solve_weakly_irreducible(te, opt);
            rho[k] = last.rho;
            cert.iterations += last.iterations;
        }
        double extrap = rho[2] - (rho[1] - rho[2]) * eps[2] / (eps[1] - eps[2]);
        cert.cw_upper = last.bounds.upper;  // rho(T) <= rho(T + eps J)
        cert.cw_lower = std::max(0.0, collatz_wielandt(t, last.u_max).lower);
        cert.rho = std::clamp(extrap, cert.cw_lower, cert.cw_upper);
        cert.u_max = last.u_max;
        cert.regularized = true;
    }
    cert.u = cert.u_max / cert.u_max[static_cast<Eigen::Index>(n - 1)];
    cert.residual = eigen_residual(t, cert.u_max, cert.rho);
    if (!cert.regularized) std::tie(cert.A, cert.w) = left_data(t, cert);
    return cert;
}

std::pair<Matrix, Vector> left_data(const DenseTensor& t, const EigenCertificate& cert) {
    if (!cert.has_eigenvector() || (cert.u.array() <= 0.0).any())
        throw DomainError("left_data needs a converged positive eigenvector");
    const std::size_t n = t.n();
    const double dm2 = static_cast<double>(t.order() - 2);
    const Vector& u = cert.u;
    Matrix A = u.array().pow(-dm2).matrix().asDiagonal() * differential(t, u);
    // Perron root of A from its own ratio bounds at u
    Vector ratio = (A * u).array() / u.array();
    const double lambda = 0.5 * (ratio.minCoeff() + ratio.maxCoeff());
    Matrix M(n + 1, n);
    M.topRows(n) = A.transpose() - lambda * Matrix::Identity(n, n);
    M.row(n) = u.transpose();
    Vector rhs = Vector::Zero(static_cast<Eigen::Index>(n + 1));
    rhs[static_cast<Eigen::Index>(n)] = 1.0;
    Vector w = M.colPivHouseholderQr().solve(rhs);
    return {A, w};
}

double perturbation_coefficient(const DenseTensor& t, const DenseTensor& s, const EigenCertificate& cert) {
    if (!(s.shape() == t.shape())) throw ShapeError("perturbation direction has a different shape");
    if (!is_tail_symmetric(s)) throw SymmetryError("perturbation direction must be partially symmetric");
    Index idx(t.order(), 0);
    do {
        if (t(idx) == 0.0 && s(idx) < 0.0) {
            std::string where;
            for (std::size_t i : idx) where += (where.empty() ? "" : ",") + std::to_string(i + 1);
            throw DomainError("direction is negative at (" + where + ") where the tensor vanishes");
        }
    } while (t.shape().next(idx));
    if (!cert.has_left_data()) throw DomainError("certificate carries no left eigenvector");
    const double dm2 = static_cast<double>(t.order() - 2);
    Vector su = apply(s, cert.u);
    return (cert.w.array() * cert.u.array().pow(-dm2) * su.array()).sum();
}

LogRadius log_spectral_radius_power(const DenseTensor& t, double s, const PerronOptions& opt) {
    require_solver_input(t);
    if (!(s > 0.0)) throw DomainError("power must be positive");
    const std::size_t n = t.n(), d = t.order();
    LogRadius out;
    if (t.max_entry() == 0.0) {
        out.zero = true;
        out.log_rho = out.log_lower = out.log_upper = kNegInf;
        return out;
    }
    const std::size_t block = t.size() / n;
    std::vector<double> logt(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) logt[k] = t[k] > 0.0 ? s * std::log(t[k]) : kNegInf;

    auto solve = [&](const std::vector<double>& L) {
        // log T(e^y)_i by running log-sum-exp over the tail
        auto log_apply = [&](const Vector& y) -> Vector {
            std::vector<double> cur = L;
            std::size_t width = cur.size();
            for (std::size_t k = 1; k < d; ++k) {
                std::vector<double> nxt(width / n);
                for (std::size_t q = 0; q < nxt.size(); ++q) {
                    double m = kNegInf;
                    for (std::size_t j = 0; j < n; ++j) m = std::max(m, cur[q * n + j] + y[static_cast<Eigen::Index>(j)]);
                    double acc = 0.0;
                    if (m != kNegInf)
                        for (std::size_t j = 0; j < n; ++j)
                            acc += std::exp(cur[q * n + j] + y[static_cast<Eigen::Index>(j)] - m);
                    nxt[q] = m == kNegInf ? kNegInf : m + std::log(acc);
                }
                cur = std::move(nxt);
                width = cur.size();
            }
            return Eigen::Map<Vector>(cur.data(), static_cast<Eigen::Index>(n));
        };
        double row_max = kNegInf, diag_max = kNegInf;
        for (std::size_t i = 0; i < n; ++i) {
            double m = kNegInf;
            for (std::size_t q = 0; q < block; ++q) m = std::max(m, L[i * block + q]);
            double acc = 0.0;
            for (std::size_t q = 0; q < block; ++q) acc += std::exp(L[i * block + q] - m);
            row_max = std::max(row_max, m + std::log(acc));
            diag_max = std::max(diag_max, L[t.shape().flat(Index(d, i))]);
        }
        const double log_sigma = std::max(diag_max, std::log(0.25) + row_max);
        return log_power_iterate(n, d, log_apply, log_sigma, opt);
    };

    if (weak_irreducibility(t).holds) {
        LogIteration it = solve(logt);
        out.log_lower = it.lo;
        out.log_upper = it.up;
        out.log_rho = 0.5 * (it.lo + it.up);
        return out;
    }
    // same eps J path as the linear solver, relative to the largest entry of T^{.s}
    double lmax = *std::max_element(logt.begin(), logt.end());
    const double eps[3] = {1e-4, 1e-6, 1e-8};
    double lr[3];
    LogIteration last;
    for (int k = 0; k < 3; ++k) {
        std::vector<double> L(logt.size());
        for (std::size_t q = 0; q < L.size(); ++q) L[q] = lse2(logt[q], std::log(eps[k]) + lmax);
        last = solve(L);
        lr[k] = 0.5 * (last.lo + last.up);
    }
    // extrapolate rho linearly in eps, relative to the smallest-eps value
    const double r1 = std::exp(lr[1] - lr[2]);
    const double ratio = 1.0 - (r1 - 1.0) * eps[2] / (eps[1] - eps[2]);
    out.log_upper = last.up;
    out.log_rho = ratio > 0.0 ? lr[2] + std::log(ratio) : lr[2];
    out.log_lower = kNegInf;
    out.regularized = true;
    return out;
}

KroneckerReport kronecker_radius_check(const DenseTensor& e, const DenseTensor& f, double tol) {
    if (e.order() != f.order()) throw ShapeError("kronecker_radius_check needs equal orders");
    KroneckerReport r;
    r.rho_e = spectral_radius(e).rho;
    r.rho_f = spectral_radius(f).rho;
    r.rho_kron = spectral_radius(kronecker(e, f)).rho;
    const double prod = r.rho_e * r.rho_f;
    r.product_gap = std::abs(prod - r.rho_kron);
    r.pass = r.product_gap <= tol * std::max(1.0, prod);
    if (e.shape() == f.shape()) {
        r.rho_hadamard = spectral_radius(hadamard(e, f)).rho;
        r.hadamard_margin = prod - *r.rho_hadamard;
        r.pass = r.pass && *r.hadamard_margin >= -tol * std::max(1.0, prod);
    }
    return r;
}

}  // namespace tenspec
