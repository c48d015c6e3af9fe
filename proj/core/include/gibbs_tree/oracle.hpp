#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "gibbs_tree/finite_tree.hpp"
#include "gibbs_tree/model.hpp"

namespace gibbs_tree {

struct ConsistencyReport {
    double max_relative_error = 0.0;
    std::size_t pairs_checked = 0;
    bool passed = false;
};

struct ConsistencyOptions {
    /// Random comparison configurations on V_{n-1}, besides the all-ones one.
    int random_configs = 20;
    std::uint64_t seed = 20240611;
    /// Upper bound on q^{|W_n|}.
    double max_enumeration = 1e7;
    /// Worker threads for the boundary sum; 0 picks hardware_concurrency.
    unsigned threads = 0;
};

/// q^{|W_n|}, the number of boundary configurations summed per check.
double enumeration_size(const FiniteTree& tree, int q);

/// Compensated sum over all boundary configurations omega on W_n of the
/// weight of (inner | omega). `inner` fixes the spins of V_{n-1}.
double boundary_marginal(const FiniteTree& tree, const ModelParams& params,
                         const PeriodTwoField& field, std::span<const int> inner,
                         unsigned threads = 1);

/// Kolmogorov consistency check by exhaustive enumeration.
///
/// For pairs (sigma, sigma') on V_{n-1} compares
///   sum_omega w_n(sigma v omega) / sum_omega w_n(sigma' v omega)
/// with w_{n-1}(sigma) / w_{n-1}(sigma'). The ratio form cancels Z_n.
/// sigma is the all-ones configuration; sigma' runs over seeded random ones.
/// At n = 1 the root of V_0 carries the recursion field (k+1) F(h_odd).
ConsistencyReport check_consistency(const FiniteTree& tree, const ModelParams& params,
                                    const PeriodTwoField& field, double tol,
                                    const ConsistencyOptions& options = {});

/// Central difference (fn(x + step) - fn(x - step)) / (2 step).
double finite_difference(const std::function<double(double)>& fn, double x, double step = 1e-6);

}  // namespace gibbs_tree
