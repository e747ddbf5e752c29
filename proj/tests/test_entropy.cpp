#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tenspec/entropy.hpp"
#include "tenspec/errors.hpp"
#include "tenspec/markov.hpp"
#include "tenspec/structure.hpp"

using namespace tenspec;

namespace {

Matrix reassemble(const std::vector<CycleTerm>& terms, std::size_t n) {
    Matrix m = Matrix::Zero(n, n);
    for (const CycleTerm& c : terms) m += c.weight * cycle_measure(c.cycle, n);
    return m;
}

Matrix random_stochastic(Rng& rng, std::size_t n, double density) {
    Matrix a = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, (i + 1) % n) = uniform01(rng);
        for (std::size_t j = 0; j < n; ++j)
            if (uniform01(rng) < density) a(i, j) = uniform01(rng);
        a.row(i) /= a.row(i).sum();
    }
    return a;
}

}  // namespace

TEST_CASE("cycle measures") {
    const Matrix s = cycle_measure({0}, 2);
    CHECK(s(0, 0) == 1.0);
    CHECK(s.sum() == 1.0);
    const Matrix two = cycle_measure({0, 1}, 2);
    CHECK(two(0, 1) == 0.5);
    CHECK(two(1, 0) == 0.5);
    const Matrix three = cycle_measure({0, 2, 1}, 3);
    CHECK(three(0, 2) == doctest::Approx(1.0 / 3));
    CHECK(three(2, 1) == doctest::Approx(1.0 / 3));
    CHECK(three(1, 0) == doctest::Approx(1.0 / 3));
    CHECK(matrix_measure_residuals(three).valid(1e-15));
    CHECK_THROWS_AS(cycle_measure({0, 1, 0}, 3), DomainError);
    CHECK_THROWS_AS(cycle_measure({}, 3), DomainError);
}

TEST_CASE("extreme point decomposition") {
    const Matrix g = cycle_measure({0, 1, 2}, 3);
    const auto one = extreme_point_decompose(g);
    REQUIRE(one.size() == 1);
    CHECK(one[0].weight == doctest::Approx(1.0));

    const Matrix mix = 0.5 * cycle_measure({0}, 3) + 0.5 * cycle_measure({1, 2}, 3);
    const auto two = extreme_point_decompose(mix);
    CHECK(two.size() == 2);
    for (const auto& t : two) CHECK(t.weight == doctest::Approx(0.5));
    CHECK((reassemble(two, 3) - mix).cwiseAbs().maxCoeff() < 1e-12);

    Rng rng(41);
    for (int k = 0; k < 30; ++k) {
        const std::size_t n = 2 + k % 5;
        const PhiResult phi = phi_map(random_stochastic(rng, n, 0.4));
        REQUIRE(phi.measures.size() == 1);
        const auto terms = extreme_point_decompose(phi.measures[0]);
        double total = 0;
        for (const auto& t : terms) {
            CHECK(t.weight >= 0);
            total += t.weight;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((reassemble(terms, n) - phi.measures[0]).cwiseAbs().maxCoeff() <= 1e-10);
    }
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS(extreme_point_decompose(bad));
}

TEST_CASE("psi and phi") {
    const Matrix p = psi_map(cycle_measure({0, 1}, 2));
    CHECK(p(0, 1) == 1.0);
    CHECK(p(1, 0) == 1.0);
    CHECK(p.diagonal().cwiseAbs().maxCoeff() == 0.0);

    Matrix zero_row = Matrix::Zero(2, 2);
    zero_row(0, 0) = 1.0;
    CHECK(psi_map(zero_row).isApprox(Matrix::Identity(2, 2)));

    const PhiResult id = phi_map(Matrix::Identity(2, 2));
    CHECK_FALSE(id.unique);
    REQUIRE(id.measures.size() == 2);

    const PhiResult perm = phi_map(psi_map(cycle_measure({0, 1}, 2)));
    CHECK(perm.unique);
    CHECK((perm.measures[0] - cycle_measure({0, 1}, 2)).cwiseAbs().maxCoeff() < 1e-14);

    Rng rng(42);
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 2 + k % 4;
        const Matrix a = random_stochastic(rng, n, 0.5);
        const PhiResult phi = phi_map(a);
        REQUIRE(phi.unique);
        const Matrix& mu = phi.measures[0];
        CHECK(matrix_measure_residuals(mu).valid(1e-12));
        // irreducible: Psi(mu(a)) = a and Phi(Psi(mu)) = {mu}
        CHECK((psi_map(mu) - a).cwiseAbs().maxCoeff() <= 1e-10);
        const PhiResult back = phi_map(psi_map(mu));
        CHECK((back.measures[0] - mu).cwiseAbs().maxCoeff() <= 1e-10);
    }
    // mu with a zero row: Phi(Psi(mu)) still contains mu
    Matrix m = Matrix::Zero(3, 3);
    m(1, 2) = m(2, 1) = 0.5;
    const PhiResult z = phi_map(psi_map(m));
    bool contains = false;
    for (const Matrix& c : z.measures) contains = contains || (c - m).cwiseAbs().maxCoeff() < 1e-12;
    CHECK(contains);
}

TEST_CASE("markov helpers") {
    Matrix p = Matrix::Identity(3, 3);
    p(2, 2) = 0;
    p(2, 0) = 0.5;
    p(2, 1) = 0.5;
    const auto cls = recurrent_classes(p);
    CHECK(cls.size() == 2);
    const Vector s = stationary_distribution(psi_map(cycle_measure({0, 1, 2}, 3)), {0, 1, 2});
    CHECK((s.array() - 1.0 / 3).abs().maxCoeff() < 1e-14);
}

TEST_CASE("matrix entropy objective") {
    Matrix a(2, 2);
    a << 0, 1, 1, 0;
    CHECK(matrix_entropy_objective(a, cycle_measure({0, 1}, 2)).value() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(matrix_entropy_objective(a, cycle_measure({0}, 2)).is_neg_infinity());

    Rng rng(43);
    for (int k = 0; k < 10; ++k) {
        const DenseTensor t = random_tensor(rng, {3, 2, 0.6, true});
        const EigenCertificate c = spectral_radius(t);
        const Matrix a2 = t.to_matrix();
        Matrix mu = c.w.asDiagonal() * a2 * c.u.asDiagonal();
        mu /= c.rho;
        CHECK(matrix_measure_residuals(mu).valid(1e-12));
        CHECK(std::abs(matrix_entropy_objective(a2, mu).value() - std::log(c.rho)) <= 1e-10);
        // d = 2 optimal tensor measure is the same matrix
        const DenseTensor opt = optimal_tensor_measure(t, c);
        CHECK((opt.to_matrix() - mu).cwiseAbs().maxCoeff() < 1e-14);
        // consistency: tensor objective equals matrix objective on the same mu
        const DenseTensor m = random_feasible_measure(t, rng);
        CHECK(tensor_entropy_objective(t, m).value() == matrix_entropy_objective(a2, m.to_matrix()).value());
    }
}

TEST_CASE("tensor occupation measures") {
    Rng rng(44);
    const EigenCertificate id = spectral_radius(DenseTensor::identity(2, 3));
    // identity takes the regularized path; use u = 1, w = 1/n directly
    EigenCertificate c = id;
    c.u = Vector::Ones(2);
    c.w = Vector::Constant(2, 0.5);
    c.rho = 1.0;
    const DenseTensor mu = optimal_tensor_measure(DenseTensor::identity(2, 3), c);
    CHECK(mu.at({0, 0, 0}) == doctest::Approx(0.5));
    CHECK(mu.at({1, 1, 1}) == doctest::Approx(0.5));
    CHECK(tensor_entropy_objective(DenseTensor::identity(2, 3), mu).value() == doctest::Approx(0.0));

    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 2 + k % 2, d = 3 + k % 2;
        const DenseTensor t = random_tensor(rng, {n, d, 0.5, true});
        const EigenCertificate cert = spectral_radius(t);
        const DenseTensor opt = optimal_tensor_measure(t, cert);
        const MeasureResiduals r = tensor_measure_residuals(opt);
        CHECK(r.valid(1e-10));
        CHECK(is_tail_symmetric(opt));
        const double lr = std::log(cert.rho);
        CHECK(std::abs(tensor_entropy_objective(t, opt).value() - lr) <= 1e-9);
        for (int s = 0; s < 20; ++s) {
            const DenseTensor m = random_feasible_measure(t, rng);
            CHECK(tensor_measure_residuals(m).valid(1e-12));
            CHECK(tensor_entropy_objective(t, m) <= lr + 1e-9);
        }
    }
    // support escaping supp(T)
    const DenseTensor t = random_tensor(rng, {2, 3, 0.5, true});
    std::size_t z = 0;
    while (t[z] > 0) ++z;
    const DenseTensor opt = optimal_tensor_measure(t, spectral_radius(t));
    std::vector<double> v = opt.values();
    for (double& x : v) x *= 0.5;
    const Index zi = t.shape().unflat(z);
    // add mass on the zero entry's orbit and on a balancing diagonal entry
    Index p = zi;
    std::sort(p.begin() + 1, p.end());
    std::size_t orbit = 0;
    do {
        ++orbit;
    } while (std::next_permutation(p.begin() + 1, p.end()));
    do {
        v[t.shape().flat(p)] += 0.5 / static_cast<double>(orbit);
    } while (std::next_permutation(p.begin() + 1, p.end()));
    CHECK(tensor_entropy_objective(t, DenseTensor(t.shape(), v, true)).is_neg_infinity());
    CHECK_THROWS_AS(optimal_tensor_measure(DenseTensor::zeros(t.shape()).with_flag(true), EigenCertificate{}),
                    DomainError);
}

TEST_CASE("Donsker-Varadhan") {
    Rng rng(45);
    const DenseTensor id = DenseTensor::identity(3, 3);
    for (int k = 0; k < 5; ++k) {
        const Vector p = random_simplex_point(rng, 3);
        CHECK(std::abs(donsker_varadhan(id, p).value()) < 1e-12);
        CHECK(donsker_varadhan_exp(id, p) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (int k = 0; k < 10; ++k) {
        const std::size_t n = 2 + k % 2, d = 2 + k % 3;
        const DenseTensor t = random_tensor(rng, {n, d, 0.7, true});
        const EigenCertificate c = spectral_radius(t);
        const Vector uw = c.u.cwiseProduct(c.w);
        CHECK(std::abs(donsker_varadhan(t, uw, &c).value() - std::log(c.rho)) <= 1e-6);
        CHECK(std::abs(donsker_varadhan(t, uw).value() - std::log(c.rho)) <= 1e-6);
        CHECK(std::abs(donsker_varadhan_exp(t, uw, &c) - c.rho) <= 1e-5 * c.rho);
        for (int s = 0; s < 10; ++s) {
            const Vector p = random_simplex_point(rng, n);
            CHECK(donsker_varadhan(t, p, &c) <= std::log(c.rho) + 1e-6);
            CHECK(donsker_varadhan_exp(t, p, &c) <= c.rho + 1e-6);
        }
    }
    // unbounded descent: log(x2 / x1) with all weight on state 1
    Matrix a(2, 2);
    a << 0, 1, 1, 0;
    CHECK(donsker_varadhan(DenseTensor::from_matrix(a), Vector::Unit(2, 0)).is_neg_infinity());
    // a zero row is -inf for any x
    a << 1, 1, 0, 0;
    CHECK(donsker_varadhan(DenseTensor::from_matrix(a), Vector::Unit(2, 1)).is_neg_infinity());
    CHECK_THROWS_AS(donsker_varadhan(id, Vector::Constant(3, 0.5)), DomainError);
}
