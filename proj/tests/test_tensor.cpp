#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tenspec/errors.hpp"
#include "tenspec/io.hpp"
#include "tenspec/random.hpp"
#include "tenspec/tensor.hpp"

using namespace tenspec;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector x(static_cast<Eigen::Index>(v.size()));
    std::size_t k = 0;
    for (double e : v) x[static_cast<Eigen::Index>(k++)] = e;
    return x;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("shape basics") {
    Shape s({2, 3, 4});
    CHECK(s.order() == 3);
    CHECK(s.size() == 24);
    CHECK_FALSE(s.equidimensional());
    CHECK(Shape::cube(3, 3).equidimensional());
    CHECK_THROWS_AS(Shape({3}), ShapeError);
    CHECK_THROWS_AS(Shape({2, 0}), ShapeError);
    Index idx{1, 2, 3};
    CHECK(s.unflat(s.flat(idx)) == idx);
}

TEST_CASE("validate") {
    CHECK(validate(DenseTensor::identity(2, 3)).empty());

    DenseTensor t = DenseTensor::zeros(Shape::cube(2, 3)).with_flag(true);
    std::vector<double> v = t.values();
    v[Shape::cube(2, 3).flat(Index{0, 0, 1})] = 1.0;
    const DenseTensor bad(Shape::cube(2, 3), v, true);
    auto viol = validate(bad);
    CHECK(viol.size() == 1);

    std::vector<double> w(8, 0.0);
    w[3] = -1.0;
    CHECK(validate(DenseTensor(Shape::cube(2, 3), w, false)).size() == 1);
}

TEST_CASE("symmetrize_tail") {
    std::vector<double> v(8, 0.0);
    const Shape s = Shape::cube(2, 3);
    v[s.flat(Index{0, 0, 1})] = 2.0;
    const DenseTensor t(s, v, false);
    const DenseTensor r = symmetrize_tail(t);
    CHECK(r(Index{0, 0, 1}) == 1.0);
    CHECK(r(Index{0, 1, 0}) == 1.0);
    CHECK(is_tail_symmetric(r));
    CHECK(validate(r).empty());

    const DenseTensor id = DenseTensor::identity(3, 3);
    CHECK(symmetrize_tail(id).values() == id.values());

    Rng rng(1);
    for (int k = 0; k < 5; ++k) {
        const DenseTensor g = random_general_tensor(rng, {3, 3, 3});
        const DenseTensor sg = symmetrize_tail(g);
        CHECK(is_tail_symmetric(sg));
        for (int j = 0; j < 10; ++j) {
            const Vector x = random_positive_vector(rng, 3);
            CHECK((apply(g, x) - apply(sg, x)).cwiseAbs().maxCoeff() <= 1e-12 * apply(g, x).cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("apply") {
    const Vector x = vec({0.5, 2.0, 3.0});
    CHECK((apply(DenseTensor::identity(3, 4), x) - x.array().pow(3).matrix()).norm() < 1e-14);
    CHECK(apply(DenseTensor::ones(2, 3), vec({1, 1})) == vec({4, 4}));

    Matrix m(2, 2);
    m << 1, 2, 3, 4;
    CHECK((apply(DenseTensor::from_matrix(m), vec({1, -1})) - m * vec({1, -1})).norm() == 0.0);
    CHECK_THROWS_AS(apply(DenseTensor::ones(2, 3), vec({1, 2, 3})), ShapeError);

    Rng rng(2);
    const DenseTensor t = random_tensor(rng, {3, 4, 1.0, true});
    const Vector y = random_positive_vector(rng, 3);
    const double c = 1.7;
    CHECK((apply(t, c * y) - std::pow(c, 3) * apply(t, y)).cwiseAbs().maxCoeff() <= 1e-12 * apply(t, c * y).maxCoeff());
}

TEST_CASE("differential") {
    Rng rng(3);
    Matrix m = Matrix::Random(3, 3).cwiseAbs();
    const DenseTensor tm = DenseTensor::from_matrix(m);
    CHECK((differential(tm, vec({1, 2, 3})) - m).norm() < 1e-14);

    const DenseTensor t = random_tensor(rng, {3, 3, 1.0, true});
    const Vector x = random_positive_vector(rng, 3);
    const Matrix D = differential(t, x);
    CHECK((D * x - 2.0 * apply(t, x)).cwiseAbs().maxCoeff() <= 1e-12 * apply(t, x).maxCoeff());
    const double h = 1e-6;
    for (Eigen::Index j = 0; j < 3; ++j) {
        Vector xe = x;
        xe[j] += h;
        const Vector fd = (apply(t, xe) - apply(t, x)) / h;
        CHECK((fd - D.col(j)).cwiseAbs().maxCoeff() < 1e-4);
    }
    std::vector<double> v(8, 0.0);
    v[1] = 1.0;
    CHECK_THROWS_AS(differential(DenseTensor(Shape::cube(2, 3), v, false), vec({1, 1})), SymmetryError);
}

TEST_CASE("hadamard and powers") {
    Rng rng(4);
    const DenseTensor a = random_tensor(rng, {3, 3, 0.7, false});
    CHECK(hadamard(a, DenseTensor::ones(3, 3)).values() == a.values());
    CHECK(hadamard(a, DenseTensor::zeros(a.shape())).max_entry() == 0.0);
    CHECK(hadamard(DenseTensor::identity(3, 3), DenseTensor::ones(3, 3)).values() ==
          DenseTensor::identity(3, 3).values());
    CHECK_THROWS_AS(hadamard(a, DenseTensor::ones(2, 3)), ShapeError);

    CHECK(hadamard_power(a, 1.0).values() == a.values());
    std::vector<double> v = {0.0, 4.0, 1.0, 9.0};
    const DenseTensor m(Shape::cube(2, 2), v, false);
    CHECK(hadamard_power(m, 0.0)[0] == 0.0);
    CHECK(hadamard_power(m, 0.0)[1] == 1.0);
    CHECK(hadamard_power(m, 0.5)[1] == 2.0);
    const DenseTensor p = random_positive_tensor(rng, 3, 3);
    const DenseTensor lhs = hadamard_power(p, 0.7 + 1.6);
    const DenseTensor rhs = hadamard(hadamard_power(p, 0.7), hadamard_power(p, 1.6));
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(rel(lhs[k], rhs[k]) < 1e-12);
}

TEST_CASE("kronecker") {
    Rng rng(5);
    const DenseTensor a = random_tensor(rng, {2, 3, 1.0, true});
    const DenseTensor one = DenseTensor::ones(1, 3);
    CHECK(kronecker(a, one).values() == a.values());

    Matrix x = Matrix::Random(2, 3), y = Matrix::Random(3, 2);
    const DenseTensor k = kronecker(DenseTensor::from_matrix(x), DenseTensor::from_matrix(y));
    CHECK(k.shape().dim(0) == 6);
    CHECK(k.shape().dim(1) == 6);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            for (Eigen::Index p = 0; p < 3; ++p)
                for (Eigen::Index q = 0; q < 2; ++q)
                    CHECK(k(Index{static_cast<std::size_t>(i * 3 + p), static_cast<std::size_t>(j * 2 + q)}) ==
                          doctest::Approx(x(i, j) * y(p, q)));

    const DenseTensor b = random_tensor(rng, {3, 3, 1.0, true});
    const DenseTensor ab = kronecker(a, b);
    const Vector u = random_positive_vector(rng, 2), v = random_positive_vector(rng, 3);
    Vector uv(6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) uv[i * 3 + j] = u[i] * v[j];
    const Vector lhs = apply(ab, uv);
    const Vector au = apply(a, u), bv = apply(b, v);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) CHECK(rel(lhs[i * 3 + j], au[i] * bv[j]) < 1e-12);
    CHECK_THROWS_AS(kronecker(a, DenseTensor::ones(2, 4)), ShapeError);
}

TEST_CASE("pattern and diag_scale") {
    Rng rng(6);
    const DenseTensor p = random_positive_tensor(rng, 3, 3);
    CHECK(pattern(p).values() == DenseTensor::ones(3, 3).values());
    CHECK(pattern(DenseTensor::zeros(Shape::cube(2, 3))).max_entry() == 0.0);
    const DenseTensor a = random_tensor(rng, {3, 3, 0.5, false});
    CHECK(pattern(pattern(a)).values() == pattern(a).values());

    CHECK(diag_scale(Vector::Ones(3), a).values() == a.values());
    const Vector y = random_positive_vector(rng, 3), x = random_positive_vector(rng, 3);
    CHECK((apply(diag_scale(y, a), x) - y.cwiseProduct(apply(a, x))).norm() < 1e-12);
    CHECK(is_tail_symmetric(diag_scale(y, a)));
    Matrix m = Matrix::Random(3, 3).cwiseAbs();
    CHECK((diag_scale(y, DenseTensor::from_matrix(m)).to_matrix() - y.asDiagonal() * m).norm() < 1e-14);
}

TEST_CASE("sparse round trips") {
    const DenseTensor id = DenseTensor::identity(2, 3);
    CHECK(dense_from_sparse(sparse_from_dense(id)).values() == id.values());

    SparseSupportTensor s(2, 3, {{{0, 0, 1}, 1.5}});
    const DenseTensor d = dense_from_sparse(s);
    CHECK(d(Index{0, 0, 1}) == 1.5);
    CHECK(d(Index{0, 1, 0}) == 1.5);
    CHECK(d.max_entry() == 1.5);

    SparseSupportTensor ex(2, 4, {{{0, 0, 0, 1}, 8}, {{0, 0, 1, 1}, 1}, {{1, 0, 0, 0}, 16}, {{1, 1, 1, 1}, 2}});
    const DenseTensor de = dense_from_sparse(ex);
    CHECK(validate(de).empty());
    CHECK(de(Index{0, 1, 0, 0}) == 8);
    CHECK(de(Index{0, 1, 0, 1}) == 1);

    CHECK_THROWS_AS(SparseSupportTensor(2, 3, {{{0, 1, 0}, 1.0}}), DomainError);
    CHECK_THROWS_AS(SparseSupportTensor(2, 3, {{{0, 0, 1}, 1.0}, {{0, 0, 1}, 2.0}}), DomainError);
    std::vector<double> v(8, 0.0);
    v[1] = 1.0;
    CHECK_THROWS_AS(sparse_from_dense(DenseTensor(Shape::cube(2, 3), v, false)), SymmetryError);
}

TEST_CASE("json io") {
    const auto j = nlohmann::json::parse(R"({"n": 2, "d": 3, "format": "sparse", "symmetric_tail": true,
        "entries": [{"idx": [1, 1, 2], "value": 2.5}, {"idx": [2, 2, 2], "value": 1}]})");
    const LoadedTensor lt = tensor_from_json(j);
    REQUIRE(lt.sparse);
    CHECK(lt.dense(Index{0, 1, 0}) == 2.5);
    CHECK(tensor_from_json(to_json(lt.dense)).dense.values() == lt.dense.values());
    CHECK(tensor_from_json(to_json(*lt.sparse)).dense.values() == lt.dense.values());

    const auto dup = nlohmann::json::parse(R"({"n": 2, "d": 3, "format": "sparse",
        "entries": [{"idx": [1, 1, 2], "value": 1}, {"idx": [1, 1, 2], "value": 2}]})");
    CHECK_THROWS(tensor_from_json(dup));
    const auto unsorted = nlohmann::json::parse(R"({"n": 2, "d": 3, "format": "sparse",
        "entries": [{"idx": [1, 2, 1], "value": 1}]})");
    CHECK_THROWS(tensor_from_json(unsorted));
    const auto dense = nlohmann::json::parse(R"({"n": 2, "d": 2, "format": "dense", "values": [1, 2, 3, 4]})");
    CHECK(tensor_from_json(dense).dense(Index{1, 0}) == 3);

    try {
        parse_json_text("{\n  \"n\": 2,\n  \"d\": oops\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK(parse_vector("1, 2.5,3") == vec({1, 2.5, 3}));
    CHECK(parse_vector("[1, 2]") == vec({1, 2}));
}

TEST_CASE("generator") {
    Rng a(42), b(42);
    const DenseTensor x = random_tensor(a, {3, 3, 0.5, true});
    const DenseTensor y = random_tensor(b, {3, 3, 0.5, true});
    CHECK(x.values() == y.values());
    CHECK(is_tail_symmetric(x));
    for (double v : x.values()) CHECK(v >= 0.0);
}
