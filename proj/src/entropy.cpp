#include "tenspec/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tenspec/errors.hpp"
#include "tenspec/markov.hpp"

namespace tenspec {

MeasureResiduals matrix_measure_residuals(const Matrix& mu) {
    MeasureResiduals r;
    r.mass_error = std::abs(mu.sum() - 1.0);
    r.balance_error = (mu.rowwise().sum() - mu.colwise().sum().transpose()).cwiseAbs().maxCoeff();
    r.min_entry = mu.minCoeff();
    return r;
}

MeasureResiduals tensor_measure_residuals(const DenseTensor& mu) {
    const std::size_t n = mu.n();
    MeasureResiduals r;
    Vector row = Vector::Zero(static_cast<Eigen::Index>(n)), col = row;
    double mass = 0.0;
    r.min_entry = std::numeric_limits<double>::infinity();
    Index idx(mu.order(), 0);
    std::size_t f = 0;
    do {
        const double v = mu[f++];
        mass += v;
        row[static_cast<Eigen::Index>(idx[0])] += v;
        col[static_cast<Eigen::Index>(idx[1])] += v;
        r.min_entry = std::min(r.min_entry, v);
    } while (mu.shape().next(idx));
    r.mass_error = std::abs(mass - 1.0);
    r.balance_error = (row - col).cwiseAbs().maxCoeff();
    if (!is_tail_symmetric(mu)) r.balance_error = std::numeric_limits<double>::infinity();
    return r;
}

Matrix cycle_measure(const std::vector<std::size_t>& gamma, std::size_t n) {
    if (gamma.empty()) throw DomainError("cycle must be nonempty");
    std::vector<std::size_t> sorted = gamma;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DomainError("cycle repeats a vertex");
    if (sorted.back() >= n) throw DomainError("cycle vertex out of range");
    Matrix mu = Matrix::Zero(n, n);
    const double w = 1.0 / static_cast<double>(gamma.size());
    for (std::size_t k = 0; k < gamma.size(); ++k) mu(gamma[k], gamma[(k + 1) % gamma.size()]) = w;
    return mu;
}

std::vector<CycleTerm> extreme_point_decompose(const Matrix& mu) {
    const std::size_t n = static_cast<std::size_t>(mu.rows());
    MeasureResiduals res = matrix_measure_residuals(mu);
    if (!res.valid(1e-10)) throw DomainError("input is not an occupation measure");
    Matrix r = mu.cwiseMax(0.0);
    const double zero = 1e-15;
    std::vector<CycleTerm> out;
    for (std::size_t round = 0; round < n * n + 1; ++round) {
        if (r.sum() <= 1e-13) break;
        // walk along the heaviest out-edges until a vertex repeats
        Eigen::Index start;
        r.rowwise().sum().maxCoeff(&start);
        std::vector<std::size_t> path;
        std::vector<std::size_t> pos(n, n);
        std::size_t v = static_cast<std::size_t>(start);
        while (pos[v] == n) {
            pos[v] = path.size();
            path.push_back(v);
            Eigen::Index next;
            double m = r.row(v).maxCoeff(&next);
            if (m <= zero) throw DomainError("numerically infeasible residual in cycle peeling");
            v = static_cast<std::size_t>(next);
        }
        std::vector<std::size_t> cyc(path.begin() + static_cast<std::ptrdiff_t>(pos[v]), path.end());
        const std::size_t k = cyc.size();
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < k; ++e) m = std::min(m, r(cyc[e], cyc[(e + 1) % k]));
        for (std::size_t e = 0; e < k; ++e) {
            double& x = r(cyc[e], cyc[(e + 1) % k]);
            x -= m;
            if (x <= zero) x = 0.0;
        }
        out.push_back({cyc, m * static_cast<double>(k)});
    }
    Matrix re = Matrix::Zero(n, n);
    double wsum = 0.0;
    for (const CycleTerm& c : out) {
        re += c.weight * cycle_measure(c.cycle, n);
        wsum += c.weight;
    }
    if ((re - mu).cwiseAbs().maxCoeff() > 1e-10 || std::abs(wsum - 1.0) > 1e-10)
        throw DomainError("cycle decomposition does not reassemble the measure");
    return out;
}

Matrix psi_map(const Matrix& mu) {
    const Eigen::Index n = mu.rows();
    Matrix a = Matrix::Zero(n, n);
    std::vector<Eigen::Index> zero_rows;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = mu.row(i).sum();
        if (r > 0.0)
            a.row(i) = mu.row(i) / r;
        else
            zero_rows.push_back(i);
    }
    const double k = static_cast<double>(zero_rows.size());
    for (Eigen::Index i : zero_rows)
        for (Eigen::Index j : zero_rows) a(i, j) = 1.0 / k;
    return a;
}

PhiResult phi_map(const Matrix& a) {
    if ((a.array() < 0.0).any() || (a.rowwise().sum().array() - 1.0).abs().maxCoeff() > 1e-10)
        throw DomainError("phi_map needs a row-stochastic matrix");
    PhiResult out;
    const Eigen::Index n = a.rows();
    for (const auto& cls : recurrent_classes(a)) {
        Vector z = stationary_distribution(a, cls);
        Vector full = Vector::Zero(n);
        for (std::size_t k = 0; k < cls.size(); ++k) full[static_cast<Eigen::Index>(cls[k])] = z[static_cast<Eigen::Index>(k)];
        out.measures.push_back(full.asDiagonal() * a);
    }
    out.unique = out.measures.size() == 1;
    return out;
}

namespace {

// sum over entries of mu log(a * row / mu), 0 log 0 = 0, positive mass on a zero entry -> -inf
template <class Entry>
ExtendedReal entropy_sum(std::size_t rows, std::size_t width, Entry&& entry) {
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        double r = 0.0;
        for (std::size_t q = 0; q < width; ++q) r += entry(i, q).second;
        for (std::size_t q = 0; q < width; ++q) {
            auto [a, m] = entry(i, q);
            if (m == 0.0) continue;
            if (a == 0.0) return ExtendedReal::neg_infinity();
            total += m * std::log(a * r / m);
        }
    }
    return total;
}

}  // namespace

ExtendedReal matrix_entropy_objective(const Matrix& a, const Matrix& mu) {
    if (a.rows() != mu.rows() || a.cols() != mu.cols()) throw ShapeError("matrix and measure shapes differ");
    return entropy_sum(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()),
                       [&](std::size_t i, std::size_t j) { return std::pair<double, double>(a(i, j), mu(i, j)); });
}

ExtendedReal tensor_entropy_objective(const DenseTensor& t, const DenseTensor& mu) {
    if (!(t.shape() == mu.shape())) throw ShapeError("tensor and measure shapes differ");
    const std::size_t n = t.n();
    const std::size_t width = t.size() / n;
    return entropy_sum(n, width, [&](std::size_t i, std::size_t q) {
        return std::pair<double, double>(t[i * width + q], mu[i * width + q]);
    });
}

DenseTensor optimal_tensor_measure(const DenseTensor& t, const EigenCertificate& cert) {
    if (!(cert.rho > 0.0)) throw DomainError("optimal measure needs rho > 0");
    if (!cert.has_left_data()) throw DomainError("optimal measure needs a certificate with u and w");
    const double dm2 = static_cast<double>(t.order() - 2);
    const Vector& u = cert.u;
    std::vector<double> v(t.size());
    Index idx(t.order(), 0);
    std::size_t f = 0;
    do {
        const auto i = static_cast<Eigen::Index>(idx[0]);
        double x = cert.w[i] * std::pow(u[i], -dm2) * t[f] / cert.rho;
        Index tail(idx.begin() + 1, idx.end());
        std::sort(tail.begin(), tail.end());
        for (std::size_t k : tail) x *= u[static_cast<Eigen::Index>(k)];
        v[f++] = x;
    } while (t.shape().next(idx));
    return DenseTensor(t.shape(), std::move(v), true);
}

namespace {

void check_simplex(const DenseTensor& t, const Vector& p) {
    if (static_cast<std::size_t>(p.size()) != t.n()) throw ShapeError("p has the wrong length");
    if ((p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-9) throw DomainError("p must lie in the simplex");
}

// descent with Barzilai-Borwein trial steps and Armijo backtracking
struct Descent {
    Vector y;
    double value;
    double grad_norm;
    bool unbounded = false;
    bool converged = false;
};

template <class F, class G>
Descent descend(Vector y, F&& f, G&& grad, double floor, double grad_tol, std::size_t max_iter) {
    double fy = f(y);
    Vector g = grad(y);
    Vector y_prev, g_prev;
    double step = 1.0;
    Descent out;
    // infimum on the boundary: the gradient stays put while the value settles
    constexpr std::size_t window = 200;
    std::vector<double> history;
    for (std::size_t it = 0; it < max_iter; ++it) {
        const double gn = g.cwiseAbs().maxCoeff();
        if (gn <= grad_tol * std::max(1.0, std::abs(fy))) {
            out.converged = true;
            break;
        }
        history.push_back(fy);
        if (history.size() > window && history[history.size() - 1 - window] - fy <= 1e-14 * std::max(1.0, std::abs(fy))) {
            out.converged = true;
            break;
        }
        if (fy < floor) {
            out.unbounded = true;
            break;
        }
        if (it > 0) {
            Vector s = y - y_prev, dg = g - g_prev;
            const double sy = s.dot(dg);
            if (sy > 0.0) step = std::clamp(s.squaredNorm() / sy, 1e-12, 1e12);
        }
        const double gg = g.squaredNorm();
        Vector yn;
        double fn = 0.0;
        bool moved = false;
        for (int bt = 0; bt < 80; ++bt) {
            yn = y - step * g;
            fn = f(yn);
            if (fn <= fy - 1e-4 * step * gg) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            out.converged = true;  // no representable decrease left
            break;
        }
        y_prev = y;
        g_prev = g;
        y = yn.array() - yn.mean();
        fy = f(y);
        g = grad(y);
    }
    out.y = y;
    out.value = fy;
    out.grad_norm = g.cwiseAbs().maxCoeff();
    if (!out.converged && !out.unbounded && fy < floor) out.unbounded = true;
    return out;
}

double reference_log_rho(const DenseTensor& t, const EigenCertificate* cert) {
    if (cert) return std::log(cert->rho);
    return std::log(spectral_radius(t).rho);
}

}  // namespace

ExtendedReal donsker_varadhan(const DenseTensor& t, const Vector& p, const EigenCertificate* cert, const DvOptions& opt) {
    check_simplex(t, p);
    const std::size_t n = t.n();
    const double dm1 = static_cast<double>(t.order() - 1);
    const double log_rho = reference_log_rho(t, cert);
    if (!std::isfinite(log_rho)) return ExtendedReal::neg_infinity();
    // a row with mass but no entries sends the objective to -inf
    Vector t1 = apply(t, Vector::Ones(static_cast<Eigen::Index>(n)));
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p[i] > 0.0 && t1[i] == 0.0) return ExtendedReal::neg_infinity();
    auto f = [&](const Vector& y) {
        Vector tx = apply(t, y.array().exp().matrix());
        double s = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i)
            if (p[i] > 0.0) s += p[i] * (std::log(tx[i]) - dm1 * y[i]);
        return s;
    };
    auto grad = [&](const Vector& y) {
        Vector ex = y.array().exp();
        Vector tx = apply(t, ex);
        Vector q = Vector::Zero(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i)
            if (p[i] > 0.0) q[i] = p[i] / tx[i];
        Vector g = (differential(t, ex).transpose() * q).cwiseProduct(ex) - dm1 * p;
        return Vector(g.array() - g.mean());
    };
    Vector y0 = cert && cert->has_eigenvector() ? Vector(cert->u.array().log()) : Vector::Zero(static_cast<Eigen::Index>(n));
    Descent r = descend(y0, f, grad, log_rho - 50.0, opt.grad_tol, opt.max_iter);
    if (r.unbounded) return ExtendedReal::neg_infinity();
    if (!r.converged)
        throw ConvergenceError("donsker_varadhan did not converge; gradient norm " + std::to_string(r.grad_norm),
                               r.value, r.value, opt.max_iter);
    return r.value;
}

double donsker_varadhan_exp(const DenseTensor& t, const Vector& p, const EigenCertificate* cert, const DvOptions& opt) {
    check_simplex(t, p);
    const std::size_t n = t.n();
    const double dm1 = static_cast<double>(t.order() - 1);
    auto f = [&](const Vector& y) {
        Vector tx = apply(t, y.array().exp().matrix());
        return (p.array() * tx.array() * (-dm1 * y.array()).exp()).sum();
    };
    auto grad = [&](const Vector& y) {
        Vector ex = y.array().exp();
        Vector tx = apply(t, ex);
        Vector q = p.array() * (-dm1 * y.array()).exp();
        Vector g = (differential(t, ex).transpose() * q).cwiseProduct(ex) - dm1 * q.cwiseProduct(tx);
        return Vector(g.array() - g.mean());
    };
    Vector y0 = cert && cert->has_eigenvector() ? Vector(cert->u.array().log()) : Vector::Zero(static_cast<Eigen::Index>(n));
    Descent r = descend(y0, f, grad, -1.0, opt.grad_tol, opt.max_iter);
    if (!r.converged)
        throw ConvergenceError("donsker_varadhan_exp did not converge; gradient norm " + std::to_string(r.grad_norm),
                               r.value, r.value, opt.max_iter);
    return r.value;
}

DenseTensor random_feasible_measure(const DenseTensor& t, Rng& rng, double tol) {
    const std::size_t n = t.n();
    const double dm1 = static_cast<double>(t.order() - 1);
    // one variable per orbit of the support: the orbit's total mass
    std::vector<Index> classes;
    Index idx(t.order(), 0);
    do {
        if (std::is_sorted(idx.begin() + 1, idx.end()) && t(idx) > 0.0) classes.push_back(idx);
    } while (t.shape().next(idx));
    const Eigen::Index m = static_cast<Eigen::Index>(classes.size());
    if (m == 0) throw DomainError("tensor has empty support");
    Matrix B = Matrix::Zero(static_cast<Eigen::Index>(n + 1), m);
    Vector b = Vector::Zero(static_cast<Eigen::Index>(n + 1));
    b[0] = 1.0;
    for (Eigen::Index c = 0; c < m; ++c) {
        const Index& cl = classes[static_cast<std::size_t>(c)];
        B(0, c) = 1.0;
        B(static_cast<Eigen::Index>(cl[0]) + 1, c) += 1.0;
        for (std::size_t k = 1; k < cl.size(); ++k) B(static_cast<Eigen::Index>(cl[k]) + 1, c) -= 1.0 / dm1;
    }
    const Matrix pinv = B.completeOrthogonalDecomposition().pseudoInverse();
    auto project_affine = [&](const Vector& v) { return Vector(v - pinv * (B * v - b)); };

    auto one_point = [&]() {
        std::exponential_distribution<double> e(1.0);
        Vector x(m);
        for (auto& v : x) v = e(rng) / static_cast<double>(m);
        Vector q = Vector::Zero(m);
        for (int it = 0; it < 200000; ++it) {
            Vector y = project_affine(x);
            Vector xn = (y + q).cwiseMax(0.0);
            q = y + q - xn;
            x = xn;
            if ((B * x - b).cwiseAbs().maxCoeff() <= tol) return x;
        }
        throw ConvergenceError("alternating projection did not reach the balance polytope", 0, 0, 200000);
    };
    std::uniform_int_distribution<int> howmany(1, 3);
    const int k = howmany(rng);
    Vector nu = Vector::Zero(m);
    Vector weights = random_simplex_point(rng, static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) nu += weights[j] * one_point();

    std::vector<double> v(t.size(), 0.0);
    for (Eigen::Index c = 0; c < m; ++c) {
        Index p = classes[static_cast<std::size_t>(c)];
        const double share = nu[c] / static_cast<double>(orbit_size(p));
        do {
            v[t.shape().flat(p)] = share;
        } while (std::next_permutation(p.begin() + 1, p.end()));
    }
    return DenseTensor(t.shape(), std::move(v), true);
}

}  // namespace tenspec
