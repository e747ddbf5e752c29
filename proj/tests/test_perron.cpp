#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "tenspec/errors.hpp"
#include "tenspec/perron.hpp"
#include "tenspec/random.hpp"
#include "tenspec/structure.hpp"

using namespace tenspec;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

DenseTensor random_irreducible_positive_diagonal(Rng& rng, std::size_t n, std::size_t d, double density) {
    for (;;) {
        DenseTensor t = random_tensor(rng, {n, d, density, true});
        std::vector<double> v = t.values();
        for (std::size_t i = 0; i < n; ++i) v[t.shape().flat(Index(d, i))] = 0.1 + uniform01(rng);
        DenseTensor s(t.shape(), std::move(v), true);
        if (irreducibility(s).holds) return s;
    }
}

// g = f * prod_tail u / (a_i1 * prod_tail v) with a chosen so that v is G's eigenvector
DenseTensor kingman_partner(const DenseTensor& f, const Vector& u, const Vector& v, double c) {
    const std::size_t d = f.order();
    std::vector<double> g(f.size());
    Index idx(d, 0);
    std::size_t k = 0;
    do {
        const double a = c * std::pow(u[idx[0]] / v[idx[0]], static_cast<double>(d - 1));
        double r = f[k] / a;
        for (std::size_t j = 1; j < d; ++j) r *= u[idx[j]] / v[idx[j]];
        g[k++] = r;
    } while (f.shape().next(idx));
    return symmetrize_tail(DenseTensor(f.shape(), g, false));
}

}  // namespace

TEST_CASE("closed-form spectral radii") {
    const EigenCertificate id = spectral_radius(DenseTensor::identity(3, 3));
    CHECK(id.rho == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((id.u - Vector::Ones(3)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(id.regularized);

    for (std::size_t n : {2u, 3u})
        for (std::size_t d : {2u, 3u, 4u}) {
            const EigenCertificate j = spectral_radius(DenseTensor::ones(n, d));
            CHECK(rel(j.rho, std::pow(double(n), double(d - 1))) < 1e-12);
            CHECK((j.u - Vector::Ones(n)).cwiseAbs().maxCoeff() < 1e-12);
        }
    Matrix m(2, 2);
    m << 2, 1, 1, 2;
    CHECK(spectral_radius(DenseTensor::from_matrix(m)).rho == doctest::Approx(3.0).epsilon(1e-12));

    const EigenCertificate z = spectral_radius(DenseTensor::zeros(Shape::cube(2, 3)));
    CHECK(z.rho == 0.0);
    CHECK_FALSE(z.has_eigenvector());
}

TEST_CASE("input checks") {
    std::vector<double> v(8, 0.0);
    v[1] = 1.0;
    CHECK_THROWS_AS(spectral_radius(DenseTensor(Shape::cube(2, 3), v, false)), SymmetryError);
    v[1] = -1.0;
    v[2] = -1.0;
    CHECK_THROWS_AS(spectral_radius(DenseTensor(Shape::cube(2, 3), v, true)), DomainError);
    CHECK_THROWS_AS(spectral_radius(DenseTensor::zeros(Shape({2, 3}))), ShapeError);
    PerronOptions o;
    o.max_iter = 1;
    Rng rng(1);
    CHECK_THROWS_AS(spectral_radius(random_tensor(rng, {3, 3, 0.5, true}), o), ConvergenceError);
}

TEST_CASE("certificate and oracle agreement") {
    Rng rng(21);
    for (int k = 0; k < 40; ++k) {
        const std::size_t n = 2 + k % 3, d = 2 + k % 3;
        const DenseTensor t = random_tensor(rng, {n, d, 0.6, true});
        PerronOptions o;
        o.record_trace = true;
        const EigenCertificate c = spectral_radius(t, o);
        CHECK(c.cw_lower <= c.rho);
        CHECK(c.rho <= c.cw_upper);
        CHECK(c.cw_upper - c.cw_lower <= 1e-10 * c.cw_upper);
        CHECK(c.residual <= 1e-10 * std::max(1.0, c.rho));
        CHECK((c.u.array() > 0).all());
        CHECK(c.u[static_cast<Eigen::Index>(n - 1)] == 1.0);
        // sandwich is monotone along the iteration
        for (std::size_t i = 1; i < c.trace.size(); ++i) {
            CHECK(c.trace[i].lower >= c.trace[i - 1].lower * (1 - 1e-12));
            CHECK(c.trace[i].upper <= c.trace[i - 1].upper * (1 + 1e-12));
        }
        const auto [lo, up] = oracle::sampled_cw(t, rng, 2000);
        CHECK(lo <= c.rho * (1 + 1e-12));
        CHECK(up >= c.rho * (1 - 1e-12));
        if (d == 2) {
            Eigen::EigenSolver<Matrix> es(t.to_matrix());
            CHECK(rel(es.eigenvalues().cwiseAbs().maxCoeff(), c.rho) < 1e-9);
        }
    }
}

TEST_CASE("equivariance") {
    Rng rng(22);
    for (int k = 0; k < 10; ++k) {
        const DenseTensor t = random_tensor(rng, {3, 3, 0.7, true});
        const EigenCertificate c = spectral_radius(t);
        const EigenCertificate s = spectral_radius(t.scaled(4.5));
        CHECK(rel(s.rho, 4.5 * c.rho) < 1e-10);
        CHECK((s.u - c.u).cwiseAbs().maxCoeff() < 1e-8);
        std::vector<std::size_t> perm(3);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(rel(spectral_radius(permute_labels(t, perm)).rho, c.rho) < 1e-10);
    }
}

TEST_CASE("regularized path") {
    // reducible: block diagonal with radii 2 and 5
    std::vector<double> v(27, 0.0);
    const Shape sh = Shape::cube(3, 3);
    v[sh.flat(Index{0, 0, 0})] = 2.0;
    for (std::size_t i : {1u, 2u})
        for (std::size_t j : {1u, 2u})
            for (std::size_t k : {1u, 2u}) v[sh.flat(Index{i, j, k})] = 1.25;
    const DenseTensor t(sh, v, true);
    CHECK_FALSE(weak_irreducibility(t).holds);
    const EigenCertificate c = spectral_radius(t);
    CHECK(c.regularized);
    CHECK(c.rho == doctest::Approx(5.0).epsilon(1e-6));
    CHECK(c.cw_lower <= c.rho);
    CHECK(c.rho <= c.cw_upper);
    CHECK_FALSE(c.has_left_data());
}

TEST_CASE("collatz_wielandt") {
    const CwBounds b = collatz_wielandt(DenseTensor::ones(2, 3), Vector::LinSpaced(2, 1, 2));
    CHECK(b.lower == doctest::Approx(9.0 / 4.0));
    CHECK(b.upper == doctest::Approx(9.0));
    const CwBounds i = collatz_wielandt(DenseTensor::identity(3, 4), Vector::LinSpaced(3, 0.5, 2));
    CHECK(i.lower == doctest::Approx(1.0));
    CHECK(i.upper == doctest::Approx(1.0));
    CHECK_THROWS_AS(collatz_wielandt(DenseTensor::ones(2, 3), Vector::Zero(2)), DomainError);
    Rng rng(23);
    const DenseTensor t = random_tensor(rng, {3, 3, 1.0, true});
    const EigenCertificate c = spectral_radius(t);
    const CwBounds at_u = collatz_wielandt(t, c.u);
    CHECK(rel(at_u.lower, c.rho) < 1e-10);
    CHECK(rel(at_u.upper, c.rho) < 1e-10);
}

TEST_CASE("left data") {
    Rng rng(24);
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 2 + k % 3, d = 2 + k % 3;
        const DenseTensor t = random_tensor(rng, {n, d, 0.6, true});
        const EigenCertificate c = spectral_radius(t);
        const double lam = static_cast<double>(d - 1) * c.rho;
        CHECK((c.A * c.u - lam * c.u).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, lam));
        CHECK((c.A.transpose() * c.w - lam * c.w).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, lam));
        CHECK(c.w.dot(c.u) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((c.w.array() > 0).all());
        CHECK((c.A.array() >= 0).all());
        if (d == 2) CHECK((c.A - t.to_matrix()).cwiseAbs().maxCoeff() < 1e-14);
    }
    // symmetric: w proportional to u^{d-1}
    DenseTensor p = random_positive_tensor(rng, 3, 3);
    std::vector<double> sym(p.size());
    Index idx(3, 0);
    std::size_t f = 0;
    do {
        Index s = idx;
        std::sort(s.begin(), s.end());
        sym[f++] = p(s);
    } while (p.shape().next(idx));
    const DenseTensor st(p.shape(), sym, true);
    REQUIRE(is_symmetric(st));
    const EigenCertificate c = spectral_radius(st);
    Vector w2 = c.u.array().square();
    w2 /= w2.dot(c.u);
    CHECK((w2 - c.w).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("perturbation coefficient") {
    Rng rng(25);
    const DenseTensor t = random_tensor(rng, {3, 3, 0.8, true});
    const EigenCertificate c = spectral_radius(t);
    CHECK(perturbation_coefficient(t, t, c) == doctest::Approx(c.rho).epsilon(1e-9));
    CHECK(perturbation_coefficient(t, DenseTensor::zeros(t.shape()).with_flag(true), c) == 0.0);
    const DenseTensor pos = random_positive_tensor(rng, 3, 3);
    const EigenCertificate cp = spectral_radius(pos);
    for (int k = 0; k < 10; ++k) {
        const DenseTensor s = random_tensor(rng, {3, 3, 1.0, false}).scaled(0.1);
        const double h = 1e-5;
        const double fd = (spectral_radius(add(pos, s, h)).rho - spectral_radius(add(pos, s, -h)).rho) / (2 * h);
        CHECK(std::abs(fd - perturbation_coefficient(pos, s, cp)) <= 1e-3 * cp.rho);
    }
    std::vector<double> v(t.size(), 0.0);
    std::size_t zero = 0;
    while (t[zero] > 0) ++zero;
    const Index where = t.shape().unflat(zero);
    Index p = where;
    std::sort(p.begin() + 1, p.end());
    do {
        v[t.shape().flat(p)] = -1.0;
    } while (std::next_permutation(p.begin() + 1, p.end()));
    try {
        perturbation_coefficient(t, DenseTensor(t.shape(), v, true), c);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("(" + std::to_string(where[0] + 1)) != std::string::npos);
    }
}

TEST_CASE("kronecker radius") {
    CHECK(kronecker_radius_check(DenseTensor::identity(2, 3), DenseTensor::identity(2, 3)).pass);
    const KroneckerReport j = kronecker_radius_check(DenseTensor::ones(2, 3), DenseTensor::ones(2, 3));
    CHECK(j.rho_kron == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(j.pass);
    Rng rng(26);
    for (int k = 0; k < 5; ++k) {
        const KroneckerReport r =
            kronecker_radius_check(random_tensor(rng, {2, 3, 1.0, true}), random_tensor(rng, {3, 3, 1.0, true}));
        CHECK(r.product_gap <= 1e-6 * r.rho_kron);
    }
}

TEST_CASE("diagonal equivalence") {
    Rng rng(27);
    // d = 2 against Sinkhorn
    for (int k = 0; k < 5; ++k) {
        const Matrix a = (Matrix::Random(3, 3).array().abs() + 0.05).matrix();
        Vector u = random_positive_vector(rng, 3), w = random_positive_vector(rng, 3);
        w /= u.dot(w);
        const ScalingCertificate sc = diagonal_equivalence(DenseTensor::from_matrix(a), u, w);
        const Matrix b = oracle::sinkhorn_equivalence(a, u, w);
        CHECK((sc.scaled.to_matrix() - b).cwiseAbs().maxCoeff() < 1e-8 * b.maxCoeff());
    }
    for (int k = 0; k < 10; ++k) {
        const DenseTensor t = random_irreducible_positive_diagonal(rng, 2 + k % 2, 3 + k % 2, 0.5);
        Vector u = random_positive_vector(rng, t.n()), w = random_positive_vector(rng, t.n());
        w /= u.dot(w);
        const ScalingCertificate sc = diagonal_equivalence(t, u, w);
        const auto [r1, r2] = scaling_residuals(sc, u, w);
        CHECK(r1 <= 1e-8);
        CHECK(r2 <= 1e-8);
        CHECK(spectral_radius(sc.scaled).rho == doctest::Approx(1.0).epsilon(1e-9));
        // entries are t times exp(b + sum c)
        Index idx(t.order(), 0);
        std::size_t f = 0;
        do {
            double e = sc.b[idx[0]];
            for (std::size_t j = 1; j < idx.size(); ++j) e += sc.c[idx[j]];
            CHECK(sc.scaled[f] == doctest::Approx(t[f] * std::exp(e)).epsilon(1e-12));
            ++f;
        } while (t.shape().next(idx));
    }
    // fixed point: already scaled
    const DenseTensor t = random_irreducible_positive_diagonal(rng, 3, 3, 1.0);
    Vector u = random_positive_vector(rng, 3), w = random_positive_vector(rng, 3);
    w /= u.dot(w);
    const ScalingCertificate once = diagonal_equivalence(t, u, w);
    const ScalingCertificate twice = diagonal_equivalence(once.scaled, u, w);
    // (b, c) is only fixed up to b + (d-1)k, c - k
    const Vector gauge = twice.b + 2.0 * twice.c(0) * Vector::Ones(3);
    CHECK(gauge.cwiseAbs().maxCoeff() < 1e-8);
    CHECK((twice.c.array() - twice.c(0)).abs().maxCoeff() < 1e-8);

    std::vector<double> v = t.values();
    v[0] = 0.0;
    CHECK_THROWS_AS(diagonal_equivalence(DenseTensor(t.shape(), v, true), u, w), DomainError);
    CHECK_THROWS_AS(diagonal_equivalence(t, u, 2.0 * w), DomainError);
}

TEST_CASE("Friedland-Karlin") {
    Rng rng(28);
    const DenseTensor t = random_tensor(rng, {3, 3, 0.7, true});
    const EigenCertificate c = spectral_radius(t);
    const FkReport eq = friedland_karlin_check(t, Vector::Constant(3, 2.5), c);
    CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-9));
    CHECK(eq.pass);
    for (int k = 0; k < 100; ++k) CHECK(friedland_karlin_check(t, random_positive_vector(rng, 3, 0.01, 5.0), c).pass);
    // y = x^{d-1} / T(x): rho(diag(y) T) = 1
    const Vector x = random_positive_vector(rng, 3);
    const Vector y = x.array().square() / apply(t, x).array();
    const FkReport r = friedland_karlin_check(t, y, c);
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.pass);
}

TEST_CASE("min characterization") {
    Rng rng(29);
    for (int k = 0; k < 5; ++k) {
        const DenseTensor t = random_tensor(rng, {3, 3, 0.5, true});
        const EigenCertificate c = spectral_radius(t);
        const MinCharReport r = fk_min_characterization(t, c, 100, 7 + k);
        CHECK(r.pass);
        CHECK(r.equality_error <= 1e-10);
        CHECK(r.violations == 0);
        const Vector up = c.u.cwiseProduct(random_positive_vector(rng, 3, 0.8, 1.2));
        CHECK(fk_min_functional(t, c, up) > std::log(c.rho));
    }
}

TEST_CASE("convex form") {
    Rng rng(30);
    // sum of fourth powers of nonnegative linear forms: symmetric, positive and convex
    const std::size_t n = 3;
    std::vector<Vector> forms;
    for (int k = 0; k < 4; ++k) forms.push_back(random_positive_vector(rng, n, 0.0, 1.0));
    forms.push_back(Vector::Unit(n, 0));
    forms.push_back(Vector::Unit(n, 1));
    forms.push_back(Vector::Unit(n, 2));
    std::vector<double> v(81, 0.0);
    Index idx(4, 0);
    std::size_t f = 0;
    do {
        Index s = idx;
        std::sort(s.begin(), s.end());
        for (const Vector& a : forms) v[f] += a[s[0]] * a[s[1]] * a[s[2]] * a[s[3]];
        ++f;
    } while (Shape::cube(n, 4).next(idx));
    const DenseTensor t(Shape::cube(n, 4), v, true);
    REQUIRE(is_symmetric(t));
    for (int k = 0; k < 3; ++k) {
        const Vector y = random_positive_vector(rng, n, 0.5, 2.0);
        const ConvexFormReport r = convex_form_sup_check(t, y, 500, 3 + k);
        CHECK(r.pass);
        CHECK(r.min_hessian_eig >= 0.0);
        CHECK(r.at_eigenvector == doctest::Approx(r.bound).epsilon(1e-8));
        CHECK(r.sampled_sup <= r.bound * (1 + 1e-9));
    }
    // y = 1, x = u gives rho(T) back
    const EigenCertificate c = spectral_radius(t);
    const double ratio = convex_form_ratio(t, Vector::Ones(n), c.u);
    CHECK(ratio / std::pow(4.0, 4.0 / 3.0) == doctest::Approx(std::pow(c.rho, 1.0 / 3.0)).epsilon(1e-8));
    // G(x) = (sum x)^4, the one-row construction
    const Vector ones = Vector::Ones(2);
    const double g = convex_form_ratio(DenseTensor::ones(2, 4), ones, ones);
    // F_i = 4 * 2^3, F = 2^4
    CHECK(g == doctest::Approx(2.0 * std::pow(32.0, 4.0 / 3.0) / 16.0).epsilon(1e-12));
    CHECK(g / std::pow(4.0, 4.0 / 3.0) == doctest::Approx(std::pow(8.0, 1.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(convex_form_ratio(DenseTensor::ones(2, 3), ones, ones), DomainError);
    CHECK_THROWS_AS(convex_form_sup_check(DenseTensor::ones(2, 4), ones, 10, 1), HypothesisError);
}

TEST_CASE("a nonconvex form is detected") {
    Rng rng(33);
    const DenseTensor p = random_positive_tensor(rng, 2, 4);
    std::vector<double> sym(p.size());
    Index idx(4, 0);
    std::size_t f = 0;
    do {
        Index s = idx;
        std::sort(s.begin(), s.end());
        sym[f++] = p(s);
    } while (p.shape().next(idx));
    const ConvexFormReport r =
        convex_form_sup_check(DenseTensor(p.shape(), sym, true), random_positive_vector(rng, 2, 0.5, 2.0), 500, 3);
    if (!r.pass) CHECK(r.min_hessian_eig < 0.0);
}

TEST_CASE("Kingman, Cohen and monotonicity") {
    Rng rng(31);
    for (int k = 0; k < 30; ++k) {
        const DenseTensor f = random_positive_tensor(rng, 3, 3), g = random_positive_tensor(rng, 3, 3);
        for (double a : {0.25, 0.5, 0.75}) CHECK(kingman_check(f, g, a).status == Status::pass);
    }
    for (int k = 0; k < 5; ++k) {
        const DenseTensor f = random_tensor(rng, {3, 3, 0.6, true});
        const EigenCertificate cf = spectral_radius(f);
        const Vector v = random_positive_vector(rng, 3, 0.2, 1.0);
        const DenseTensor g = kingman_partner(f, cf.u, v, 1.7);
        const CheckRecord r = kingman_check(f, g, 0.4);
        CHECK(std::abs(r.margin) <= 1e-8);
    }
    for (int k = 0; k < 10; ++k) {
        const DenseTensor t = random_tensor(rng, {3, 3, 0.6, true});
        CHECK(cohen_midpoint_check(t, random_positive_vector(rng, 3), 0.1, 3.0).status == Status::pass);
        std::vector<double> e = t.values();
        for (double& x : e) x *= 0.5;
        CHECK(monotonicity_check(DenseTensor(t.shape(), e, true), t).status == Status::pass);
    }
    CHECK_THROWS_AS(monotonicity_check(DenseTensor::ones(2, 3), DenseTensor::identity(2, 3)), DomainError);
}

TEST_CASE("log-domain power radius") {
    Rng rng(32);
    const DenseTensor t = random_tensor(rng, {3, 3, 0.7, true});
    const double rho = spectral_radius(t).rho;
    const LogRadius one = log_spectral_radius_power(t, 1.0);
    CHECK(std::exp(one.log_rho) == doctest::Approx(rho).epsilon(1e-10));
    const LogRadius big = log_spectral_radius_power(t, 200.0);
    CHECK(std::isfinite(big.log_rho));
    CHECK(big.log_upper - big.log_lower <= 1e-9);
    CHECK(log_spectral_radius_power(DenseTensor::zeros(t.shape()).with_flag(true), 2.0).zero);
}
