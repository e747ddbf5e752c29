#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tenspec/errors.hpp"
#include "tenspec/random.hpp"
#include "tenspec/structure.hpp"

using namespace tenspec;

namespace {

DenseTensor from_support(std::size_t n, std::size_t d, const std::vector<Index>& support) {
    std::vector<SparseEntry> e;
    for (const Index& i : support) e.push_back({i, 1.0});
    return dense_from_sparse(SparseSupportTensor(n, d, e));
}

}  // namespace

TEST_CASE("weak irreducibility examples") {
    CHECK(weak_irreducibility(DenseTensor::ones(3, 3)).holds);
    CHECK_FALSE(weak_irreducibility(DenseTensor::identity(3, 3)).holds);
    const DenseTensor block = from_support(2, 3, {{0, 0, 0}, {1, 1, 1}});
    const StructureResult r = weak_irreducibility(block);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness);
    CHECK(*r.witness == std::vector<std::size_t>{0});
}

TEST_CASE("irreducibility examples") {
    CHECK(irreducibility(DenseTensor::ones(3, 4)).holds);
    CHECK_FALSE(irreducibility(DenseTensor::identity(2, 3)).holds);
    // weakly irreducible but not irreducible
    const DenseTensor t = from_support(2, 3, {{0, 0, 1}, {1, 0, 0}});
    CHECK(weak_irreducibility(t).holds);
    const StructureResult r = irreducibility(t);
    CHECK_FALSE(r.holds);
    CHECK(oracle::weakly_irreducible(t));
    CHECK_FALSE(oracle::irreducible(t));
    REQUIRE(r.witness);
    // the witness really violates the definition
    std::size_t mask = 0;
    for (std::size_t i : *r.witness) mask |= std::size_t{1} << i;
    bool escapes = false;
    oracle::for_each_entry(t, [&](const Index& idx, double v) {
        if (!(v > 0) || !(mask >> idx[0] & 1)) return;
        bool out = true;
        for (std::size_t k = 1; k < idx.size(); ++k) out = out && !(mask >> idx[k] & 1);
        escapes = escapes || out;
    });
    CHECK_FALSE(escapes);
}

TEST_CASE("indecomposability examples") {
    CHECK(weak_indecomposability(DenseTensor::ones(2, 3)).holds);
    CHECK_FALSE(weak_indecomposability(DenseTensor::zeros(Shape::cube(2, 3))).holds);
    CHECK(indecomposability(DenseTensor::ones(2, 3)).holds);
    CHECK_FALSE(indecomposability(DenseTensor::zeros(Shape::cube(2, 3))).holds);
    // d = 2: bipartite connectivity of the support
    Matrix m(2, 3);
    m << 1, 0, 0, 0, 1, 1;
    CHECK_FALSE(weak_indecomposability(DenseTensor::from_matrix(m)).holds);
    m(0, 1) = 1;
    CHECK(weak_indecomposability(DenseTensor::from_matrix(m)).holds);
    CHECK_THROWS_AS(indecomposability(DenseTensor::ones(7, 3)), CapabilityError);
}

TEST_CASE("brute force agreement and implications") {
    Rng rng(11);
    std::size_t irr = 0, wirr = 0, ind = 0;
    for (int k = 0; k < 150; ++k) {
        const std::size_t n = 2 + k % 2, d = 2 + (k / 2) % 3;
        const double density = 0.2 + 0.1 * (k % 5);
        const DenseTensor t = random_tensor(rng, {n, d, density, false});
        const StructureReport r = analyze_structure(t);
        CHECK(r.weakly_irreducible->holds == oracle::weakly_irreducible(t));
        CHECK(r.irreducible->holds == oracle::irreducible(t));
        CHECK(r.weakly_indecomposable.holds == oracle::weakly_indecomposable(t));
        REQUIRE(r.indecomposable);
        CHECK(r.indecomposable->holds == oracle::indecomposable(t));
        if (r.irreducible->holds) CHECK(r.weakly_irreducible->holds);
        if (r.indecomposable->holds) CHECK(r.weakly_indecomposable.holds);
        irr += r.irreducible->holds;
        wirr += r.weakly_irreducible->holds;
        ind += r.indecomposable->holds;
    }
    // the ensemble exercises both outcomes
    CHECK(irr > 0);
    CHECK(wirr > irr);
    CHECK(ind > 0);
}

TEST_CASE("general shapes") {
    Rng rng(12);
    for (int k = 0; k < 40; ++k) {
        const DenseTensor t = random_general_tensor(rng, {2, 3, 2}, 0.35);
        CHECK(weak_indecomposability(t).holds == oracle::weakly_indecomposable(t));
        CHECK(indecomposability(t).holds == oracle::indecomposable(t));
        const StructureReport r = analyze_structure(t);
        CHECK_FALSE(r.weakly_irreducible);
    }
}

TEST_CASE("weak irreducibility is invariant under diagonal scaling") {
    Rng rng(13);
    for (int k = 0; k < 30; ++k) {
        const DenseTensor t = random_tensor(rng, {3, 3, 0.3, false});
        const Vector y = random_positive_vector(rng, 3, 0.01, 100.0);
        CHECK(weak_irreducibility(diag_scale(y, t)).holds == weak_irreducibility(t).holds);
    }
}

TEST_CASE("scc") {
    const auto c = strongly_connected_components({{1}, {0}, {2}, {}});
    CHECK(c.size() == 3);
}
