#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gibbs_tree/invariant_systems.hpp"
#include "gibbs_tree/model.hpp"

namespace gibbs_tree {

using ScalarFn = std::function<double(double)>;

/// Grid cell with a sign change: f_lo and f_hi have opposite signs, or one of
/// them is exactly zero.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

struct SolverConfig {
    int grid_points = 10'000;
    double refine_tol = 1e-12;
    double dedup_tol = 1e-8;
    int max_refine_iters = 200;

    /// grid_points >= 100, tolerances in (0, 1e-2), max_refine_iters >= 1.
    void validate() const;
};

enum class GridKind {
    Uniform,
    /// Uniform in ln x; needs 0 < lo.
    Geometric,
};

/// Evaluates fn on grid_points nodes spanning [lo, hi] and returns every cell
/// whose endpoint values change sign. A node value of exactly zero counts as a
/// sign change with both neighbours.
std::vector<Bracket> scan_sign_changes(const ScalarFn& fn, double lo, double hi,
                                       const SolverConfig& config,
                                       GridKind grid = GridKind::Uniform);

/// Brent's method on a bracket. The result r has a sign change of fn within
/// [r - refine_tol, r + refine_tol].
double refine(const ScalarFn& fn, const Bracket& bracket, const SolverConfig& config);

/// Analytic enclosure of IM fixed points, widened by 1% on each side.
std::pair<double, double> scan_interval_for_im(const ModelParams& params, int m);

/// All fixed points of g on I_m, sorted ascending in x. Always contains x = 1.
std::vector<ReducedScalar> solve_im(const ModelParams& params, int m,
                                    const SolverConfig& config = {});

/// A root of the IM_PRIME polynomial with no admissible (z, t) preimage.
struct RejectedRoot {
    double z = 0.0;
    std::optional<double> t;
    double system_residual = 0.0;
    const char* reason = "";
};

struct ImPrimeSolution {
    std::vector<ReducedScalar> solutions;  // sorted ascending in x
    std::vector<RejectedRoot> diagnostics;
};

/// Upper end of the polynomial scan: doubles from max(2, 2(theta+m-1)/m) until
/// poly11 stays negative over one full doubling.
double scan_upper_for_im_prime(const ModelParams& params, int m);

/// Roots of the IM_PRIME polynomial with back-substituted t. Always contains
/// z = t = 1.
ImPrimeSolution solve_im_prime(const ModelParams& params, int m,
                               const SolverConfig& config = {});

/// Dispatches on set.kind. Diagnostics of the IM_PRIME solve are dropped.
std::vector<ReducedScalar> solve_set(const ModelParams& params, const InvariantSetId& set,
                                     const SolverConfig& config = {});

}  // namespace gibbs_tree
