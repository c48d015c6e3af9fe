#include "gibbs_tree/finite_tree.hpp"

#include <string>

#include "gibbs_tree/errors.hpp"

namespace gibbs_tree {

std::size_t generation_size(int k, int d) {
    if (k < 1 || d < 0) throw DomainError("generation_size needs k >= 1, d >= 0");
    if (d == 0) return 1;
    std::size_t size = static_cast<std::size_t>(k) + 1;
    for (int i = 1; i < d; ++i) {
        if (size > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(k)) {
            throw OverflowError("generation size overflows");
        }
        size *= static_cast<std::size_t>(k);
    }
    return size;
}

FiniteTree build_tree(int k, int n) {
    if (k < 1 || n < 0) throw DomainError("build_tree needs k >= 1 and n >= 0");
    std::size_t total = 0;
    for (int d = 0; d <= n; ++d) {
        total += generation_size(k, d);
        if (total > FiniteTree::kMaxVertices) {
            throw BudgetError("tree of order " + std::to_string(k) + " and depth " + std::to_string(n) +
                              " exceeds " + std::to_string(FiniteTree::kMaxVertices) + " vertices");
        }
    }

    FiniteTree tree;
    tree.n = n;
    tree.k = k;
    tree.parent.reserve(total);
    tree.depth.reserve(total);
    tree.edges.reserve(total - 1);
    tree.generations.resize(static_cast<std::size_t>(n) + 1);

    tree.parent.push_back(FiniteTree::kNoParent);
    tree.depth.push_back(0);
    tree.generations[0].push_back(0);
    for (int d = 1; d <= n; ++d) {
        auto& next = tree.generations[static_cast<std::size_t>(d)];
        for (std::size_t p : tree.generations[static_cast<std::size_t>(d - 1)]) {
            const int children = d == 1 ? k + 1 : k;
            for (int c = 0; c < children; ++c) {
                const std::size_t v = tree.parent.size();
                tree.parent.push_back(p);
                tree.depth.push_back(d);
                tree.edges.emplace_back(p, v);
                next.push_back(v);
            }
        }
    }
    return tree;
}

}  // namespace gibbs_tree
