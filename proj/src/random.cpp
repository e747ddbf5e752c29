#include "tenspec/random.hpp"

#include <algorithm>

#include "tenspec/errors.hpp"
#include "tenspec/structure.hpp"

namespace tenspec {

double uniform01(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return 1.0 - u(rng);
}

Vector random_positive_vector(Rng& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = u(rng);
    return v;
}

Vector random_simplex_point(Rng& rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = e(rng);
    return v / v.sum();
}

namespace {

void check(const GenOptions& opt) {
    if (opt.n == 0 || opt.d < 2) throw DomainError("generator needs n >= 1 and d >= 2");
    if (!(opt.density > 0.0 && opt.density <= 1.0)) throw DomainError("density must lie in (0, 1]");
}

}  // namespace

DenseTensor random_tensor(Rng& rng, const GenOptions& opt) {
    check(opt);
    Shape s = Shape::cube(opt.n, opt.d);
    std::bernoulli_distribution keep(opt.density);
    for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
        std::vector<double> v(s.size());
        for (double& x : v) {
            const double val = uniform01(rng);
            x = keep(rng) ? val : 0.0;
        }
        DenseTensor t = symmetrize_tail(DenseTensor(s, std::move(v), false));
        if (!opt.weakly_irreducible || weak_irreducibility(t).holds) return t;
    }
    throw ConvergenceError("rejection sampling found no weakly irreducible tensor", 0, 0, opt.max_attempts);
}

SparseSupportTensor random_sparse_tensor(Rng& rng, const GenOptions& opt) {
    check(opt);
    std::bernoulli_distribution keep(opt.density);
    Shape s = Shape::cube(opt.n, opt.d);
    for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
        std::vector<SparseEntry> es;
        Index idx(opt.d, 0);
        do {
            if (!std::is_sorted(idx.begin() + 1, idx.end())) continue;
            const double val = uniform01(rng);
            if (keep(rng)) es.push_back({idx, val});
        } while (s.next(idx));
        SparseSupportTensor sp(opt.n, opt.d, std::move(es));
        if (!opt.weakly_irreducible || weak_irreducibility(dense_from_sparse(sp)).holds) return sp;
    }
    throw ConvergenceError("rejection sampling found no weakly irreducible tensor", 0, 0, opt.max_attempts);
}

DenseTensor random_positive_tensor(Rng& rng, std::size_t n, std::size_t d) {
    GenOptions opt;
    opt.n = n;
    opt.d = d;
    opt.weakly_irreducible = false;
    return dense_from_sparse(random_sparse_tensor(rng, opt));
}

DenseTensor random_general_tensor(Rng& rng, const std::vector<std::size_t>& dims, double density) {
    Shape s(dims);
    std::bernoulli_distribution keep(density);
    std::vector<double> v(s.size());
    for (double& x : v) {
        const double val = uniform01(rng);
        x = keep(rng) ? val : 0.0;
    }
    return DenseTensor(s, std::move(v), false);
}

}  // namespace tenspec
