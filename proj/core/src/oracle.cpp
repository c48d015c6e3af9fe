#include "gibbs_tree/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gibbs_tree/errors.hpp"

namespace gibbs_tree {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Fixed so that results do not depend on the number of worker threads.
constexpr std::size_t kChunks = 64;

}  // namespace

double enumeration_size(const FiniteTree& tree, int q) {
    return std::pow(static_cast<double>(q), static_cast<double>(tree.boundary().size()));
}

double boundary_marginal(const FiniteTree& tree, const ModelParams& params,
                         const PeriodTwoField& field, std::span<const int> inner,
                         unsigned threads) {
    if (tree.n < 1) throw DomainError("boundary_marginal needs depth n >= 1");
    const std::size_t boundary_start = tree.boundary().front();
    if (inner.size() != boundary_start) throw ShapeError("inner configuration does not cover V_{n-1}");

    const std::size_t width = tree.boundary().size();
    const auto q = static_cast<std::uint64_t>(params.q);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < width; ++i) {
        if (total > std::numeric_limits<std::uint64_t>::max() / q) throw BudgetError("enumeration too large");
        total *= q;
    }

    const std::size_t chunks = static_cast<std::size_t>(std::min<std::uint64_t>(kChunks, total));
    std::vector<double> partial(chunks, 0.0);

    auto run_chunk = [&](std::size_t c) {
        const std::uint64_t begin = total * c / chunks;
        const std::uint64_t end = total * (c + 1) / chunks;
        std::vector<int> spins(tree.vertex_count());
        std::copy(inner.begin(), inner.end(), spins.begin());
        // Decode `begin` in base q; boundary vertex 0 is the least significant digit.
        std::uint64_t rest = begin;
        for (std::size_t i = 0; i < width; ++i) {
            spins[boundary_start + i] = static_cast<int>(rest % q) + 1;
            rest /= q;
        }
        CompensatedSum sum;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            sum.add(std::exp(log_finite_volume_weight(spins, tree, params, field)));
            for (std::size_t i = 0; i < width; ++i) {
                int& s = spins[boundary_start + i];
                if (s < params.q) {
                    ++s;
                    break;
                }
                s = 1;
            }
        }
        partial[c] = sum.value();
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t c = next++; c < chunks; c = next++) run_chunk(c);
            });
        }
        for (auto& t : pool) t.join();
    }

    CompensatedSum sum;
    for (double p : partial) sum.add(p);
    return sum.value();
}

ConsistencyReport check_consistency(const FiniteTree& tree, const ModelParams& params,
                                    const PeriodTwoField& field, double tol,
                                    const ConsistencyOptions& options) {
    params.validate();
    if (tree.n < 1) throw DomainError("consistency check needs depth n >= 1");
    if (field.h_even.size() != params.field_dim()) throw ShapeError("field length does not match q-1");
    const double size = enumeration_size(tree, params.q);
    if (size > options.max_enumeration) {
        throw BudgetError("enumeration of " + std::to_string(params.q) + "^" +
                          std::to_string(tree.boundary().size()) + " boundary configurations exceeds budget " +
                          std::to_string(options.max_enumeration));
    }

    const FiniteTree inner_tree = build_tree(tree.k, tree.n - 1);
    const unsigned threads =
        options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;

    std::vector<int> reference(inner_tree.vertex_count(), 1);
    const double ref_marginal = boundary_marginal(tree, params, field, reference, threads);
    const double ref_log_weight =
        log_finite_volume_weight(reference, inner_tree, params, field, RootField::Recursion);

    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<int> spin(1, params.q);

    ConsistencyReport report;
    for (int i = 0; i < options.random_configs; ++i) {
        std::vector<int> other(inner_tree.vertex_count());
        for (int& s : other) s = spin(rng);
        const double marginal = boundary_marginal(tree, params, field, other, threads);
        const double log_weight =
            log_finite_volume_weight(other, inner_tree, params, field, RootField::Recursion);
        const double lhs = ref_marginal / marginal;
        const double rhs = std::exp(ref_log_weight - log_weight);
        report.max_relative_error = std::max(report.max_relative_error, std::abs(lhs / rhs - 1.0));
        ++report.pairs_checked;
    }
    report.passed = report.max_relative_error <= tol;
    return report;
}

double finite_difference(const std::function<double(double)>& fn, double x, double step) {
    if (!(step > 0.0)) throw DomainError("finite difference step must be positive");
    const double up = fn(x + step);
    const double down = fn(x - step);
    if (!std::isfinite(up) || !std::isfinite(down)) {
        throw EvaluationError("non-finite value in finite difference", x);
    }
    return (up - down) / (2.0 * step);
}

}  // namespace gibbs_tree
