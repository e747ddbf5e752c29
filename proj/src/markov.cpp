#include "tenspec/markov.hpp"

#include <algorithm>

#include "tenspec/structure.hpp"

namespace tenspec {

std::vector<std::vector<std::size_t>> recurrent_classes(const Matrix& p) {
    const std::size_t n = static_cast<std::size_t>(p.rows());
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (p(i, j) > 0.0) adj[i].push_back(j);
    auto comps = strongly_connected_components(adj);
    std::vector<std::size_t> comp_of(n);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (std::size_t v : comps[c]) comp_of[v] = c;
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        bool closed = true;
        for (std::size_t v : comps[c])
            for (std::size_t w : adj[v]) closed &= comp_of[w] == c;
        if (closed) out.push_back(comps[c]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Vector stationary_distribution(const Matrix& p, const std::vector<std::size_t>& cls) {
    const Eigen::Index k = static_cast<Eigen::Index>(cls.size());
    Matrix m(k + 1, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) m(a, b) = p(cls[b], cls[a]) - (a == b ? 1.0 : 0.0);
    m.row(k).setOnes();
    Vector rhs = Vector::Zero(k + 1);
    rhs[k] = 1.0;
    Vector z = m.colPivHouseholderQr().solve(rhs);
    z = z.cwiseMax(0.0);
    return z / z.sum();
}

}  // namespace tenspec
