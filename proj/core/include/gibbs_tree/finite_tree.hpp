#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "gibbs_tree/model.hpp"

namespace gibbs_tree {

/// Ball V_n of radius n around the root of the order-k Cayley tree.
///
/// Vertices are numbered breadth-first, so generation W_d is a contiguous
/// index range and every parent has a smaller index than its children. The
/// root has k+1 children; every other interior vertex has k.
struct FiniteTree {
    static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();
    static constexpr std::size_t kMaxVertices = 1'000'000;

    int n = 0;
    int k = 1;
    std::vector<std::size_t> parent;
    std::vector<int> depth;
    std::vector<std::vector<std::size_t>> generations;  // W_0 .. W_n
    std::vector<Edge> edges;                            // L_n, as (parent, child)

    std::size_t vertex_count() const noexcept { return parent.size(); }
    const std::vector<std::size_t>& boundary() const { return generations.back(); }
};

/// |W_d| = (k+1) k^{d-1} for d >= 1. Throws OverflowError past size_t.
std::size_t generation_size(int k, int d);

/// Throws BudgetError when |V_n| exceeds FiniteTree::kMaxVertices.
FiniteTree build_tree(int k, int n);

}  // namespace gibbs_tree
