#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gibbs_tree/invariant_systems.hpp"
#include "gibbs_tree/model.hpp"

namespace gibbs_tree {

enum class Classification { TRANSLATION_INVARIANT, PERIOD_TWO };

const char* to_string(Classification c) noexcept;
/// "TI" or "P2".
const char* short_name(Classification c) noexcept;

struct MeasureDescriptor {
    Classification classification = Classification::TRANSLATION_INVARIANT;
    PeriodTwoField field;
    InvariantSetId origin_set;
    /// origin_permutation[i] is the source coordinate of coordinate i (0-based).
    std::vector<int> origin_permutation;
    ReducedScalar source_solution;
};

inline constexpr double kClassifyTol = 1e-10;
inline constexpr double kResidualBound = 1e-9;
inline constexpr double kOrbitTol = 1e-12;

/// TI iff x = y (IM) or z = t (IM_PRIME) to 1e-10 relative. Throws
/// ResidualError when the solution's residual exceeds 1e-9.
MeasureDescriptor classify(const ReducedScalar& sol, const ModelParams& params);

/// Distinct images of desc under S_{q-1} acting on coordinates of both
/// h_even and h_odd. Images carry the composed permutation.
std::vector<MeasureDescriptor> orbit_expand(const MeasureDescriptor& desc, int q);

/// Distinct ordered field pairs reachable from `field` by relabeling all q
/// spins (then re-pinning component q to zero) and by swapping even/odd.
std::vector<PeriodTwoField> relabel_orbit(const PeriodTwoField& field, int q);

/// Exact binomial coefficient; throws OverflowError when it does not fit.
std::uint64_t binomial(int n, int r);

/// 2 C(q, m), for 1 <= m <= q.
std::uint64_t count_im(int q, int m);

/// 2 C(q, m) C(q-m, m), for 1 <= m <= q/2.
std::uint64_t count_im_prime(int q, int m);

struct CountReport {
    int q = 0;
    std::vector<std::pair<int, std::uint64_t>> per_im;
    std::vector<std::pair<int, std::uint64_t>> per_im_prime;
    std::uint64_t total_lower_bound = 0;
};

/// 2 (2^q - 1 + sum_{m=1}^{q/2} C(q,m) C(q-m,m)), with checked arithmetic.
CountReport total_lower_bound(int q);

}  // namespace gibbs_tree
