#include <algorithm>
#include <cmath>

#include "tenspec/errors.hpp"
#include "tenspec/perron.hpp"
#include "tenspec/structure.hpp"

namespace tenspec {

namespace {

// tensor with entries t * exp(row[i1] + sum_{tail} col[i_j])
DenseTensor rescale(const DenseTensor& t, const Vector& row, const Vector& col) {
    std::vector<double> v(t.size());
    Index idx(t.order(), 0);
    std::size_t f = 0;
    do {
        // sorted tail so permuted positions get bitwise-equal factors
        Index tail(idx.begin() + 1, idx.end());
        std::sort(tail.begin(), tail.end());
        double e = row[static_cast<Eigen::Index>(idx[0])];
        for (std::size_t k : tail) e += col[static_cast<Eigen::Index>(k)];
        v[f] = t[f] * std::exp(e);
        ++f;
    } while (t.shape().next(idx));
    return DenseTensor(t.shape(), std::move(v), t.partially_symmetric());
}

struct Objective {
    const DenseTensor& t;
    Vector p;
    double dm1;

    double value(const Vector& x) const {
        Vector tx = apply(t, x.array().exp().matrix());
        return (p.array() * (tx.array().log() - dm1 * x.array())).sum();
    }
    Vector gradient(const Vector& x) const {
        Vector ex = x.array().exp();
        Vector tx = apply(t, ex);
        Matrix D = differential(t, ex);
        Vector q = p.array() / tx.array();
        Vector g = (D.transpose() * q).cwiseProduct(ex) - dm1 * p;
        return g.array() - g.mean();
    }
};

}  // namespace

ScalingCertificate diagonal_equivalence(const DenseTensor& t, const Vector& u, const Vector& w,
                                        const ScalingOptions& opt) {
    const std::size_t n = t.n();
    const std::size_t d = t.order();
    if (static_cast<std::size_t>(u.size()) != n || static_cast<std::size_t>(w.size()) != n)
        throw ShapeError("u and w must have length n");
    if ((u.array() <= 0.0).any() || (w.array() <= 0.0).any()) throw DomainError("u and w must be positive");
    if (std::abs(u.dot(w) - 1.0) > 1e-9) throw DomainError("diagonal_equivalence needs sum u_i w_i = 1");
    if (!is_tail_symmetric(t)) throw SymmetryError("tensor must be partially symmetric");
    for (std::size_t i = 0; i < n; ++i)
        if (!(t(Index(d, i)) > 0.0))
            throw DomainError("diagonal entry (" + std::to_string(i + 1) + ",...," + std::to_string(i + 1) +
                              ") must be positive");
    if (!irreducibility(t).holds) throw HypothesisError("diagonal_equivalence needs an irreducible tensor");

    Objective obj{t, u.cwiseProduct(w), static_cast<double>(d - 1)};
    Vector x = Vector::Zero(static_cast<Eigen::Index>(n));
    double fx = obj.value(x);
    Vector g = obj.gradient(x);
    double step = 1.0;
    Vector x_prev, g_prev;
    std::size_t it = 0;
    for (; it < opt.max_iter && g.cwiseAbs().maxCoeff() > opt.grad_tol; ++it) {
        if (it > 0) {
            // Barzilai-Borwein trial step, safeguarded by Armijo backtracking below
            Vector sx = x - x_prev, sg = g - g_prev;
            const double sy = sx.dot(sg);
            if (sy > 0.0) step = std::clamp(sx.squaredNorm() / sy, 1e-12, 1e12);
        }
        const double gg = g.squaredNorm();
        Vector xn;
        double fn;
        for (int bt = 0;; ++bt) {
            xn = x - step * g;
            fn = obj.value(xn);
            if (fn <= fx - 1e-4 * step * gg) break;
            step *= 0.5;
            if (bt > 60) {
                step = 0.0;
                break;
            }
        }
        if (step == 0.0) break;  // stalled at rounding level
        x_prev = x;
        g_prev = g;
        x = xn;
        fx = fn;
        g = obj.gradient(x);
    }
    const double gnorm = g.cwiseAbs().maxCoeff();
    if (gnorm > std::max(opt.grad_tol, 1e-8))
        throw ConvergenceError("diagonal_equivalence did not converge; projected gradient norm " + std::to_string(gnorm),
                               gnorm, gnorm, it);

    ScalingCertificate cert;
    cert.c = x - u.array().log().matrix();
    DenseTensor hat = rescale(t, Vector::Zero(static_cast<Eigen::Index>(n)), cert.c);
    Vector hu = apply(hat, u);
    cert.b = (static_cast<double>(d - 1) * u.array().log() - hu.array().log()).matrix();
    cert.scaled = rescale(t, cert.b, cert.c);
    cert.objective_gradient_norm = gnorm;
    cert.iterations = it;
    return cert;
}

std::pair<double, double> scaling_residuals(const ScalingCertificate& cert, const Vector& u, const Vector& w) {
    const DenseTensor& t = cert.scaled;
    const double dm1 = static_cast<double>(t.order() - 1);
    const double dm2 = static_cast<double>(t.order() - 2);
    double r1 = (apply(t, u) - u.array().pow(dm1).matrix()).cwiseAbs().maxCoeff();
    Matrix A = u.array().pow(-dm2).matrix().asDiagonal() * differential(t, u);
    double r2 = (A.transpose() * w - dm1 * w).cwiseAbs().maxCoeff();
    return {r1, r2};
}

}  // namespace tenspec
