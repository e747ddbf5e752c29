#include "tenspec/structure.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>

#include "tenspec/errors.hpp"

namespace tenspec {

std::vector<std::vector<std::size_t>> strongly_connected_components(const std::vector<std::vector<std::size_t>>& adj) {
    // iterative Tarjan
    const std::size_t n = adj.size();
    const std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unset), low(n, 0), stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::vector<std::size_t>> comps;
    std::size_t counter = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, e] = call.back();
            if (e < adj[v].size()) {
                std::size_t w = adj[v][e++];
                if (index[w] == unset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
            std::size_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return comps;
}

namespace {

std::vector<std::vector<std::size_t>> support_digraph(const DenseTensor& t) {
    const std::size_t n = t.n();
    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    Index idx(t.order(), 0);
    std::size_t f = 0;
    do {
        if (t[f++] > 0.0)
            for (std::size_t k = 1; k < idx.size(); ++k) edge[idx[0]][idx[k]] = true;
    } while (t.shape().next(idx));
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (edge[i][j]) adj[i].push_back(j);
    return adj;
}

std::vector<bool> reach(const std::vector<std::vector<std::size_t>>& adj, std::size_t from) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<std::size_t> todo{from};
    seen[from] = true;
    while (!todo.empty()) {
        std::size_t v = todo.back();
        todo.pop_back();
        for (std::size_t w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                todo.push_back(w);
            }
    }
    return seen;
}

std::vector<std::size_t> members(const std::vector<bool>& mask, bool value = true) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i] == value) out.push_back(i);
    return out;
}

}  // namespace

StructureResult weak_irreducibility(const DenseTensor& t) {
    auto adj = support_digraph(t);
    const std::size_t n = adj.size();
    if (strongly_connected_components(adj).size() == 1) return {true, std::nullopt};
    // witness: a proper vertex set with no edge leaving it
    for (std::size_t v = 0; v < n; ++v) {
        auto r = reach(adj, v);
        if (static_cast<std::size_t>(std::count(r.begin(), r.end(), true)) < n) return {false, members(r)};
    }
    return {false, std::nullopt};  // unreachable
}

StructureResult irreducibility(const DenseTensor& t) {
    const std::size_t n = t.n();
    // J is invariant when every positive entry with tail inside J has its head in J;
    // T is reducible iff some proper nonempty J is invariant (then I = [n] \ J fails).
    std::vector<Index> positive;
    Index idx(t.order(), 0);
    std::size_t f = 0;
    do {
        if (t[f++] > 0.0) positive.push_back(idx);
    } while (t.shape().next(idx));
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<bool> in(n, false);
        in[v] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (const Index& p : positive) {
                if (in[p[0]]) continue;
                bool tail_in = true;
                for (std::size_t k = 1; k < p.size() && tail_in; ++k) tail_in = in[p[k]];
                if (tail_in) {
                    in[p[0]] = true;
                    grew = true;
                }
            }
        }
        if (static_cast<std::size_t>(std::count(in.begin(), in.end(), true)) < n) return {false, members(in, false)};
    }
    return {true, std::nullopt};
}

namespace {

std::vector<std::size_t> mode_offsets(const Shape& s) {
    std::vector<std::size_t> off(s.order() + 1, 0);
    for (std::size_t k = 0; k < s.order(); ++k) off[k + 1] = off[k] + s.dim(k);
    return off;
}

}  // namespace

StructureResult weak_indecomposability(const DenseTensor& t) {
    const Shape& s = t.shape();
    auto off = mode_offsets(s);
    const std::size_t total = off.back();
    std::vector<std::size_t> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    Index idx(s.order(), 0);
    std::size_t f = 0;
    do {
        if (t[f++] > 0.0)
            for (std::size_t k = 1; k < s.order(); ++k) parent[root(off[k] + idx[k])] = root(off[0] + idx[0]);
    } while (s.next(idx));
    std::vector<bool> comp0(total);
    for (std::size_t v = 0; v < total; ++v) comp0[v] = root(v) == root(0);
    if (std::all_of(comp0.begin(), comp0.end(), [](bool b) { return b; })) return {true, std::nullopt};
    return {false, members(comp0)};
}

StructureResult indecomposability(const DenseTensor& t) {
    const Shape& s = t.shape();
    auto off = mode_offsets(s);
    const std::size_t total = off.back();
    const std::size_t d = s.order();
    if (total > kIndecomposabilityVertexCap)
        throw CapabilityError("indecomposability enumerates vertex subsets; " + std::to_string(total) +
                              " vertices exceeds the cap of " + std::to_string(kIndecomposabilityVertexCap));
    std::vector<std::uint32_t> part(d), entries;
    for (std::size_t k = 0; k < d; ++k)
        for (std::size_t i = 0; i < s.dim(k); ++i) part[k] |= std::uint32_t{1} << (off[k] + i);
    Index idx(d, 0);
    std::size_t f = 0;
    do {
        if (t[f++] > 0.0) {
            std::uint32_t m = 0;
            for (std::size_t k = 0; k < d; ++k) m |= std::uint32_t{1} << (off[k] + idx[k]);
            entries.push_back(m);
        }
    } while (s.next(idx));
    const std::uint32_t full = total == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << total) - 1;
    for (std::uint32_t I = 1; I < full; ++I) {
        std::size_t whole_parts = 0;
        for (std::size_t k = 0; k < d; ++k) whole_parts += (I & part[k]) == part[k];
        if (whole_parts >= 2) continue;
        bool ok = false;
        for (std::uint32_t m : entries)
            if (std::popcount(m & I) == 1) {
                ok = true;
                break;
            }
        if (!ok) {
            std::vector<std::size_t> w;
            for (std::size_t v = 0; v < total; ++v)
                if (I >> v & 1u) w.push_back(v);
            return {false, w};
        }
    }
    return {true, std::nullopt};
}

StructureReport analyze_structure(const DenseTensor& t) {
    StructureReport r;
    if (t.shape().equidimensional()) {
        r.weakly_irreducible = weak_irreducibility(t);
        r.irreducible = irreducibility(t);
    }
    r.weakly_indecomposable = weak_indecomposability(t);
    std::size_t total = 0;
    for (std::size_t m : t.shape().dims()) total += m;
    if (total <= kIndecomposabilityVertexCap) r.indecomposable = indecomposability(t);
    return r;
}

}  // namespace tenspec
