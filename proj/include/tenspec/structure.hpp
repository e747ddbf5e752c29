#pragma once

#include <optional>
#include <vector>

#include "tenspec/tensor.hpp"

namespace tenspec {

struct StructureResult {
    bool holds = false;
    // separating set, 0-based; for the general-shape properties vertices are
    // numbered mode by mode (mode k vertex i -> offset_k + i)
    std::optional<std::vector<std::size_t>> witness;
};

struct StructureReport {
    // unset for non-equidimensional shapes
    std::optional<StructureResult> weakly_irreducible;
    std::optional<StructureResult> irreducible;
    StructureResult weakly_indecomposable;
    std::optional<StructureResult> indecomposable;  // unset when above the enumeration cap
};

constexpr std::size_t kIndecomposabilityVertexCap = 20;

StructureResult weak_irreducibility(const DenseTensor& t);
StructureResult irreducibility(const DenseTensor& t);
StructureResult weak_indecomposability(const DenseTensor& t);
StructureResult indecomposability(const DenseTensor& t);
StructureReport analyze_structure(const DenseTensor& t);

// strongly connected components of a digraph given by adjacency lists
std::vector<std::vector<std::size_t>> strongly_connected_components(const std::vector<std::vector<std::size_t>>& adj);

}  // namespace tenspec
