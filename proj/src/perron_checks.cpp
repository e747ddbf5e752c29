#include <cmath>
#include <random>

#include "tenspec/errors.hpp"
#include "tenspec/perron.hpp"
#include "tenspec/random.hpp"

namespace tenspec {

namespace {

void require_left_data(const EigenCertificate& cert) {
    if (!cert.has_left_data()) throw DomainError("check needs a certificate with u and w (weakly irreducible input)");
}

double scale(double x) { return std::max(1.0, std::abs(x)); }

}  // namespace

FkReport friedland_karlin_check(const DenseTensor& t, const Vector& y, const EigenCertificate& cert, double tol) {
    require_left_data(cert);
    if (y.size() != cert.u.size()) throw ShapeError("y has the wrong length");
    if ((y.array() <= 0.0).any()) throw DomainError("y must be positive");
    FkReport r;
    r.lhs = spectral_radius(diag_scale(y, t)).rho;
    const Vector p = cert.u.cwiseProduct(cert.w);
    r.rhs = cert.rho * std::exp((p.array() * y.array().log()).sum());
    r.margin = r.lhs - r.rhs;
    r.pass = r.margin >= -tol * scale(r.rhs);
    if (is_symmetric(t)) {
        const double dd = static_cast<double>(t.order());
        Vector ud = cert.u.array().pow(dd);
        ud /= ud.sum();
        r.symmetric_rhs = cert.rho * std::exp((ud.array() * y.array().log()).sum());
        r.pass = r.pass && r.lhs - *r.symmetric_rhs >= -tol * scale(*r.symmetric_rhs);
    }
    return r;
}

double fk_min_functional(const DenseTensor& t, const EigenCertificate& cert, const Vector& x) {
    require_left_data(cert);
    if ((x.array() <= 0.0).any()) throw DomainError("x must be positive");
    const double dm1 = static_cast<double>(t.order() - 1);
    Vector tx = apply(t, x);
    Vector p = cert.u.cwiseProduct(cert.w);
    return (p.array() * (tx.array().log() - dm1 * x.array().log())).sum();
}

MinCharReport fk_min_characterization(const DenseTensor& t, const EigenCertificate& cert, std::size_t trials,
                                      std::uint64_t seed, double tol) {
    require_left_data(cert);
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double log_rho = std::log(cert.rho);
    MinCharReport r;
    r.trials = trials;
    r.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < trials; ++k) {
        Vector x = cert.u;
        // alternate between far and near perturbations of u
        const double spread = k % 2 == 0 ? 1.0 : 1e-3;
        for (auto& v : x) v *= std::exp(spread * gauss(rng));
        const double m = fk_min_functional(t, cert, x) - log_rho;
        r.min_margin = std::min(r.min_margin, m);
        if (m < -tol * scale(log_rho)) ++r.violations;
    }
    r.equality_error = std::abs(fk_min_functional(t, cert, cert.u) - log_rho);
    r.pass = r.violations == 0 && r.equality_error <= tol * scale(log_rho);
    return r;
}

double convex_form_ratio(const DenseTensor& t, const Vector& y, const Vector& x) {
    const std::size_t d = t.order();
    if (d % 2 != 0) throw DomainError("convex_form_ratio needs even order d");
    if (!is_symmetric(t)) throw SymmetryError("convex_form_ratio needs a symmetric tensor");
    if ((y.array() <= 0.0).any()) throw DomainError("y must be positive");
    const double dd = static_cast<double>(d), dm1 = dd - 1.0;
    Vector tx = apply(t, x);
    const double F = x.dot(tx);
    if (!(F > 0.0)) throw HypothesisError("x^T T(x) <= 0 at the given x");
    double num = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        num += std::pow(y[i], 1.0 / dm1) * std::pow(std::abs(dd * tx[i]), dd / dm1);
    return num / F;
}

ConvexFormReport convex_form_sup_check(const DenseTensor& t, const Vector& y, std::size_t samples,
                                       std::uint64_t seed, double tol) {
    const std::size_t n = t.n(), d = t.order();
    if (d % 2 != 0) throw DomainError("convex_form_ratio needs even order d");
    if (!is_symmetric(t)) throw SymmetryError("convex_form_ratio needs a symmetric tensor");
    const double dd = static_cast<double>(d), dm1 = dd - 1.0;
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_unit = [&] {
        Vector x(static_cast<Eigen::Index>(n));
        for (auto& v : x) v = gauss(rng);
        return Vector(x.normalized());
    };

    // positivity of F on the sphere by multistart projected descent
    ConvexFormReport r;
    r.min_form_on_sphere = std::numeric_limits<double>::infinity();
    const double lip = dd * dm1 * apply(t, Vector::Ones(static_cast<Eigen::Index>(n))).maxCoeff();
    for (int start = 0; start < 16; ++start) {
        Vector x = random_unit();
        double fx = x.dot(apply(t, x));
        double step = 1.0 / lip;
        for (int it = 0; it < 500; ++it) {
            Vector g = dd * apply(t, x);
            g -= g.dot(x) * x;
            Vector xn = (x - step * g).normalized();
            double fn = xn.dot(apply(t, xn));
            if (fn < fx) {
                x = xn;
                fx = fn;
                step *= 1.5;
            } else {
                step *= 0.5;
            }
        }
        r.min_form_on_sphere = std::min(r.min_form_on_sphere, fx);
    }
    if (!(r.min_form_on_sphere > 1e-12 * lip)) throw HypothesisError("x^T T(x) is not positive on the unit sphere");

    const double norm = std::pow(dd, dd / dm1);
    EigenCertificate cy = spectral_radius(diag_scale(y, t));
    r.bound = std::pow(cy.rho, 1.0 / dm1);
    r.at_eigenvector = convex_form_ratio(t, y, cy.u_max) / norm;
    r.sampled_sup = r.at_eigenvector;
    r.min_hessian_eig = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples; ++k) {
        Vector x = random_unit();
        if (k % 2 == 1) x = x.cwiseAbs();
        r.sampled_sup = std::max(r.sampled_sup, convex_form_ratio(t, y, x) / norm);
        const Matrix h = dd * differential(t, x);
        r.min_hessian_eig = std::min(r.min_hessian_eig, Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues()(0));
    }
    r.margin = r.bound - r.sampled_sup;
    r.pass = r.margin >= -tol * scale(r.bound) && std::abs(r.at_eigenvector - r.bound) <= 1e-8 * scale(r.bound);
    return r;
}

CheckRecord kingman_check(const DenseTensor& f, const DenseTensor& g, double alpha, double tol) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
    const double rf = spectral_radius(f).rho, rg = spectral_radius(g).rho;
    const double lhs = spectral_radius(hadamard(hadamard_power(f, alpha), hadamard_power(g, 1.0 - alpha))).rho;
    const double rhs = std::pow(rf, alpha) * std::pow(rg, 1.0 - alpha);
    CheckRecord c;
    c.id = "perron-kingman";
    c.reference = "Kingman log-convexity of the spectral radius";
    c.margin = rhs - lhs;
    c.tolerance = tol * scale(rhs);
    c.status = status_from_margin(c.margin, c.tolerance);
    c.detail = "alpha=" + std::to_string(alpha);
    return c;
}

CheckRecord cohen_midpoint_check(const DenseTensor& t, const Vector& dir, double tau1, double tau2, double tol) {
    const std::size_t n = t.n(), d = t.order();
    auto g = [&](double tau) {
        std::vector<double> v = t.values();
        for (std::size_t i = 0; i < n; ++i) v[t.shape().flat(Index(d, i))] += tau * dir[static_cast<Eigen::Index>(i)];
        return spectral_radius(DenseTensor(t.shape(), std::move(v), t.partially_symmetric())).rho;
    };
    const double g1 = g(tau1), g2 = g(tau2), gm = g(0.5 * (tau1 + tau2));
    CheckRecord c;
    c.id = "perron-cohen-convexity";
    c.reference = "convexity of the spectral radius in the diagonal entries";
    c.margin = 0.5 * (g1 + g2) - gm;
    c.tolerance = tol * scale(gm);
    c.status = status_from_margin(c.margin, c.tolerance);
    return c;
}

CheckRecord monotonicity_check(const DenseTensor& e, const DenseTensor& f, double tol) {
    for (std::size_t k = 0; k < e.size(); ++k)
        if (e[k] > f[k]) throw DomainError("monotonicity_check needs e <= f entrywise");
    const double re = spectral_radius(e).rho, rf = spectral_radius(f).rho;
    CheckRecord c;
    c.id = "perron-monotonicity";
    c.reference = "spectral radius is monotone in the entries";
    c.margin = rf - re;
    c.tolerance = tol * scale(rf);
    c.status = status_from_margin(c.margin, c.tolerance);
    return c;
}

}  // namespace tenspec
