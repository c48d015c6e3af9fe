#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gibbs_tree {

struct FiniteTree;

/// Potts model constants: q spin states on the Cayley tree of order k, with
/// theta = exp(J * beta). J and beta are kept only as provenance.
struct ModelParams {
    int q = 3;
    int k = 3;
    double theta = 0.5;
    std::optional<double> j_coupling;
    std::optional<double> beta;

    /// Validated construction: q >= 2, k >= 1, theta > 0 and finite.
    static ModelParams make(int q, int k, double theta);

    /// theta = exp(j_coupling * beta); beta must be positive.
    static ModelParams from_coupling(int q, int k, double j_coupling, double beta);

    /// Throws DomainError if the basic invariants do not hold.
    void validate() const;

    std::size_t field_dim() const noexcept { return static_cast<std::size_t>(q - 1); }
};

/// Throws HypothesisError unless k >= 3, 3 <= q < k+1 and 0 < theta < 1.
void require_solver_hypothesis(const ModelParams& params);

/// Log-space boundary field with the q-th component pinned to zero, so it
/// stores q-1 entries. All entries are finite.
class FieldVector {
public:
    FieldVector() = default;
    explicit FieldVector(std::vector<double> entries);

    static FieldVector zeros(std::size_t dim) { return FieldVector(std::vector<double>(dim, 0.0)); }

    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> entries() const noexcept { return entries_; }

    /// Field weight of spin s in {1..q}: entries_[s-1] for s < q, 0 for s = q.
    double spin_field(int spin) const;

    double max_abs() const noexcept;

    friend bool operator==(const FieldVector&, const FieldVector&) = default;

private:
    std::vector<double> entries_;
};

/// Boundary field depending only on the parity of the distance to the root.
/// The root has even parity.
struct PeriodTwoField {
    FieldVector h_even;
    FieldVector h_odd;

    PeriodTwoField() = default;
    PeriodTwoField(FieldVector even, FieldVector odd);

    static PeriodTwoField zeros(std::size_t dim) {
        return {FieldVector::zeros(dim), FieldVector::zeros(dim)};
    }

    const FieldVector& at_depth(int depth) const { return depth % 2 == 0 ? h_even : h_odd; }
};

/// Tree recursion map F(h, theta) on R^{q-1}:
///   F_i = ln(((theta-1) e^{h_i} + sum_j e^{h_j} + 1) / (theta + sum_j e^{h_j})).
/// Evaluated with the largest exponent factored out.
FieldVector compat_map(const FieldVector& h, const ModelParams& params);

/// Residuals (h_even - k F(h_odd), h_odd - k F(h_even)) of the period-two
/// fixed-point system.
std::pair<FieldVector, FieldVector> period2_residual(const PeriodTwoField& field,
                                                     const ModelParams& params);

/// Max-norm over both residual vectors.
double period2_residual_norm(const PeriodTwoField& field, const ModelParams& params);

/// One application of the recursion map on period-two fields:
/// (h_even, h_odd) -> (k F(h_odd), k F(h_even)).
PeriodTwoField w_map(const PeriodTwoField& field, const ModelParams& params);

using Edge = std::pair<std::size_t, std::size_t>;

/// -J times the number of monochromatic edges. spins[v] is the spin of vertex v.
double hamiltonian(std::span<const int> spins, std::span<const Edge> edges, double j_coupling, int q);

/// How the root carries a field in the single-vertex volume V_0.
enum class RootField {
    /// Root uses h_even, as its distance to itself is zero.
    Parity,
    /// Root uses sum over its k+1 children of F(h_odd), i.e. (k+1) F(h_odd).
    /// This is the value the recursion assigns to the root.
    Recursion,
};

/// ln of the unnormalized finite-volume weight
///   theta^{#monochromatic edges of L_n} * exp(sum_{x in W_n} h_{sigma(x), x}).
double log_finite_volume_weight(std::span<const int> spins, const FiniteTree& tree,
                                const ModelParams& params, const PeriodTwoField& field,
                                RootField root = RootField::Parity);

double finite_volume_weight(std::span<const int> spins, const FiniteTree& tree,
                            const ModelParams& params, const PeriodTwoField& field,
                            RootField root = RootField::Parity);

}  // namespace gibbs_tree
