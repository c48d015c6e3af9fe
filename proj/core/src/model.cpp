#include "gibbs_tree/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/finite_tree.hpp"

namespace gibbs_tree {

ModelParams ModelParams::make(int q, int k, double theta) {
    ModelParams p;
    p.q = q;
    p.k = k;
    p.theta = theta;
    p.validate();
    return p;
}

ModelParams ModelParams::from_coupling(int q, int k, double j_coupling, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta) || !std::isfinite(j_coupling)) {
        throw DomainError("beta must be positive and J finite");
    }
    ModelParams p;
    p.q = q;
    p.k = k;
    p.theta = std::exp(j_coupling * beta);
    p.j_coupling = j_coupling;
    p.beta = beta;
    p.validate();
    return p;
}

void ModelParams::validate() const {
    if (q < 2) throw DomainError("q must be >= 2, got " + std::to_string(q));
    if (k < 1) throw DomainError("k must be >= 1, got " + std::to_string(k));
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw DomainError("theta must be positive and finite");
    }
    if (j_coupling && beta) {
        const double expected = std::exp(*j_coupling * *beta);
        if (std::abs(theta - expected) > 1e-12 * theta) {
            throw DomainError("theta disagrees with exp(J * beta)");
        }
    }
}

void require_solver_hypothesis(const ModelParams& params) {
    params.validate();
    if (params.k < 3) {
        throw HypothesisError("solver requires k >= 3, got k = " + std::to_string(params.k));
    }
    if (params.q < 3 || params.q >= params.k + 1) {
        throw HypothesisError("solver requires 3 <= q < k+1, got q = " + std::to_string(params.q) +
                              ", k = " + std::to_string(params.k));
    }
    if (!(params.theta < 1.0)) {
        throw HypothesisError("solver requires 0 < theta < 1");
    }
}

FieldVector::FieldVector(std::vector<double> entries) : entries_(std::move(entries)) {
    for (double v : entries_) {
        if (!std::isfinite(v)) throw DomainError("field entries must be finite");
    }
}

double FieldVector::spin_field(int spin) const {
    const auto q = static_cast<int>(entries_.size()) + 1;
    if (spin < 1 || spin > q) throw DomainError("spin " + std::to_string(spin) + " outside 1..q");
    return spin == q ? 0.0 : entries_[static_cast<std::size_t>(spin - 1)];
}

double FieldVector::max_abs() const noexcept {
    double r = 0.0;
    for (double v : entries_) r = std::max(r, std::abs(v));
    return r;
}

PeriodTwoField::PeriodTwoField(FieldVector even, FieldVector odd)
    : h_even(std::move(even)), h_odd(std::move(odd)) {
    if (h_even.size() != h_odd.size()) throw ShapeError("even and odd fields differ in length");
}

FieldVector compat_map(const FieldVector& h, const ModelParams& params) {
    params.validate();
    if (h.size() != params.field_dim()) {
        throw ShapeError("field has " + std::to_string(h.size()) + " entries, expected q-1 = " +
                         std::to_string(params.field_dim()));
    }
    const auto entries = h.entries();
    // The q-th component contributes e^0 = 1; include it in the shift.
    const double shift = std::max(0.0, *std::max_element(entries.begin(), entries.end(),
                                                         [](double a, double b) { return a < b; }));
    const double theta = params.theta;
    const double pinned = std::exp(-shift);
    double sum = 0.0;
    std::vector<double> scaled(entries.size());
    for (std::size_t j = 0; j < entries.size(); ++j) {
        scaled[j] = std::exp(entries[j] - shift);
        sum += scaled[j];
    }
    const double denom = theta * pinned + sum;
    std::vector<double> out(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        // (theta - 1) e^{h_i} + sum_j e^{h_j} + 1, with the e^{h_i} term folded in.
        const double numer = theta * scaled[i] + (sum - scaled[i]) + pinned;
        out[i] = std::log(numer / denom);
    }
    return FieldVector(std::move(out));
}

std::pair<FieldVector, FieldVector> period2_residual(const PeriodTwoField& field,
                                                     const ModelParams& params) {
    const FieldVector f_odd = compat_map(field.h_odd, params);
    const FieldVector f_even = compat_map(field.h_even, params);
    const std::size_t dim = params.field_dim();
    std::vector<double> r_even(dim), r_odd(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        r_even[i] = field.h_even[i] - params.k * f_odd[i];
        r_odd[i] = field.h_odd[i] - params.k * f_even[i];
    }
    return {FieldVector(std::move(r_even)), FieldVector(std::move(r_odd))};
}

double period2_residual_norm(const PeriodTwoField& field, const ModelParams& params) {
    const auto [r_even, r_odd] = period2_residual(field, params);
    return std::max(r_even.max_abs(), r_odd.max_abs());
}

namespace {

FieldVector scaled(const FieldVector& v, double factor) {
    std::vector<double> out(v.entries().begin(), v.entries().end());
    for (double& e : out) e *= factor;
    return FieldVector(std::move(out));
}

}  // namespace

PeriodTwoField w_map(const PeriodTwoField& field, const ModelParams& params) {
    return {scaled(compat_map(field.h_odd, params), params.k),
            scaled(compat_map(field.h_even, params), params.k)};
}

double hamiltonian(std::span<const int> spins, std::span<const Edge> edges, double j_coupling, int q) {
    std::size_t aligned = 0;
    for (const auto& [a, b] : edges) {
        if (a >= spins.size() || b >= spins.size()) throw DomainError("edge endpoint has no spin");
        const int sa = spins[a];
        const int sb = spins[b];
        if (sa < 1 || sa > q || sb < 1 || sb > q) throw DomainError("spin outside 1..q");
        if (sa == sb) ++aligned;
    }
    return -j_coupling * static_cast<double>(aligned);
}

double log_finite_volume_weight(std::span<const int> spins, const FiniteTree& tree,
                                const ModelParams& params, const PeriodTwoField& field,
                                RootField root) {
    if (spins.size() != tree.vertex_count()) {
        throw ShapeError("configuration does not cover V_n");
    }
    if (field.h_even.size() != params.field_dim()) {
        throw ShapeError("field length does not match q-1");
    }
    for (int s : spins) {
        if (s < 1 || s > params.q) throw DomainError("spin outside 1..q");
    }
    std::size_t aligned = 0;
    for (const auto& [a, b] : tree.edges) {
        if (spins[a] == spins[b]) ++aligned;
    }
    double log_w = static_cast<double>(aligned) * std::log(params.theta);

    if (tree.n == 0 && root == RootField::Recursion) {
        const FieldVector root_field = scaled(compat_map(field.h_odd, params), params.k + 1);
        log_w += root_field.spin_field(spins[0]);
        return log_w;
    }
    const FieldVector& boundary_field = field.at_depth(tree.n);
    for (std::size_t v : tree.boundary()) log_w += boundary_field.spin_field(spins[v]);
    return log_w;
}

double finite_volume_weight(std::span<const int> spins, const FiniteTree& tree,
                            const ModelParams& params, const PeriodTwoField& field,
                            RootField root) {
    const double w = std::exp(log_finite_volume_weight(spins, tree, params, field, root));
    if (!std::isfinite(w) || !(w > 0.0)) throw OverflowError("finite-volume weight out of range");
    return w;
}

}  // namespace gibbs_tree
