#include "gibbs_tree/measure_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gibbs_tree/errors.hpp"

namespace gibbs_tree {

const char* to_string(Classification c) noexcept {
    return c == Classification::TRANSLATION_INVARIANT ? "TRANSLATION_INVARIANT" : "PERIOD_TWO";
}

const char* short_name(Classification c) noexcept {
    return c == Classification::TRANSLATION_INVARIANT ? "TI" : "P2";
}

namespace {

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<int> identity_permutation(std::size_t n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

using Column = std::pair<double, double>;

bool columns_equal(const Column& a, const Column& b) {
    return std::abs(a.first - b.first) <= kOrbitTol && std::abs(a.second - b.second) <= kOrbitTol;
}

// Assigns equal ids to columns that agree within kOrbitTol.
std::vector<int> column_classes(const std::vector<Column>& columns) {
    std::vector<int> ids(columns.size());
    std::vector<Column> reps;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        auto it = std::find_if(reps.begin(), reps.end(),
                               [&](const Column& r) { return columns_equal(r, columns[i]); });
        if (it == reps.end()) {
            ids[i] = static_cast<int>(reps.size());
            reps.push_back(columns[i]);
        } else {
            ids[i] = static_cast<int>(it - reps.begin());
        }
    }
    return ids;
}

// Calls visit(perm) once per distinct rearrangement of the columns, where
// perm[i] is the source column placed at position i.
template <class Visit>
void for_each_arrangement(const std::vector<Column>& columns, Visit visit) {
    const std::vector<int> ids = column_classes(columns);
    std::vector<int> arrangement = ids;
    std::sort(arrangement.begin(), arrangement.end());
    do {
        std::vector<int> perm(columns.size());
        std::vector<bool> used(columns.size(), false);
        for (std::size_t i = 0; i < arrangement.size(); ++i) {
            for (std::size_t j = 0; j < ids.size(); ++j) {
                if (!used[j] && ids[j] == arrangement[i]) {
                    used[j] = true;
                    perm[i] = static_cast<int>(j);
                    break;
                }
            }
        }
        visit(perm);
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
}

std::vector<Column> columns_of(const PeriodTwoField& field) {
    std::vector<Column> cols(field.h_even.size());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = {field.h_even[i], field.h_odd[i]};
    return cols;
}

bool fields_equal(const PeriodTwoField& a, const PeriodTwoField& b) {
    for (std::size_t i = 0; i < a.h_even.size(); ++i) {
        if (std::abs(a.h_even[i] - b.h_even[i]) > kOrbitTol) return false;
        if (std::abs(a.h_odd[i] - b.h_odd[i]) > kOrbitTol) return false;
    }
    return true;
}

}  // namespace

MeasureDescriptor classify(const ReducedScalar& sol, const ModelParams& params) {
    ReducedScalar checked = sol;
    PeriodTwoField field = embed_full(checked, params);
    if (!(checked.residual_full <= kResidualBound)) {
        throw ResidualError("solution residual " + std::to_string(checked.residual_full) +
                            " exceeds " + std::to_string(kResidualBound));
    }
    bool ti;
    if (sol.set.kind == SetKind::IM_PRIME && sol.z && sol.t) {
        ti = close_rel(*sol.z, *sol.t, kClassifyTol);
    } else {
        ti = close_rel(sol.x, sol.y, kClassifyTol);
    }
    MeasureDescriptor desc;
    desc.classification = ti ? Classification::TRANSLATION_INVARIANT : Classification::PERIOD_TWO;
    desc.field = std::move(field);
    desc.origin_set = sol.set;
    desc.origin_permutation = identity_permutation(params.field_dim());
    desc.source_solution = checked;
    return desc;
}

std::vector<MeasureDescriptor> orbit_expand(const MeasureDescriptor& desc, int q) {
    const auto dim = static_cast<std::size_t>(q - 1);
    if (desc.field.h_even.size() != dim) throw ShapeError("descriptor field length does not match q-1");
    const std::vector<Column> cols = columns_of(desc.field);
    const std::vector<int> origin =
        desc.origin_permutation.size() == dim ? desc.origin_permutation : identity_permutation(dim);

    std::vector<MeasureDescriptor> out;
    for_each_arrangement(cols, [&](const std::vector<int>& perm) {
        std::vector<double> h(dim), l(dim);
        std::vector<int> composed(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const auto src = static_cast<std::size_t>(perm[i]);
            h[i] = cols[src].first;
            l[i] = cols[src].second;
            composed[i] = origin[src];
        }
        MeasureDescriptor image = desc;
        image.field = {FieldVector(std::move(h)), FieldVector(std::move(l))};
        image.origin_permutation = std::move(composed);
        out.push_back(std::move(image));
    });
    return out;
}

std::vector<PeriodTwoField> relabel_orbit(const PeriodTwoField& field, int q) {
    const auto dim = static_cast<std::size_t>(q - 1);
    if (field.h_even.size() != dim) throw ShapeError("field length does not match q-1");
    if (q > 10) throw BudgetError("relabel_orbit enumerates S_q; q > 10 is not supported");

    std::vector<Column> full = columns_of(field);
    full.emplace_back(0.0, 0.0);  // pinned q-th component

    std::vector<PeriodTwoField> images;
    auto add = [&](PeriodTwoField f) {
        for (const auto& seen : images) {
            if (fields_equal(seen, f)) return;
        }
        images.push_back(std::move(f));
    };
    for_each_arrangement(full, [&](const std::vector<int>& perm) {
        const Column pinned = full[static_cast<std::size_t>(perm[dim])];
        std::vector<double> h(dim), l(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const Column& c = full[static_cast<std::size_t>(perm[i])];
            h[i] = c.first - pinned.first;
            l[i] = c.second - pinned.second;
        }
        add({FieldVector(h), FieldVector(l)});
        add({FieldVector(std::move(l)), FieldVector(std::move(h))});
    });
    return images;
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in count");
    return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in count");
    return r;
}

}  // namespace

std::uint64_t binomial(int n, int r) {
    if (n < 0 || r < 0 || r > n) throw DomainError("binomial needs 0 <= r <= n");
    r = std::min(r, n - r);
    std::uint64_t result = 1;
    for (int i = 1; i <= r; ++i) {
        // result * (n - r + i) / i, reduced first so the product stays exact.
        auto num = static_cast<std::uint64_t>(n - r + i);
        auto den = static_cast<std::uint64_t>(i);
        const std::uint64_t g = std::gcd(result, den);
        result /= g;
        den /= g;
        num /= den;
        result = checked_mul(result, num);
    }
    return result;
}

std::uint64_t count_im(int q, int m) {
    if (m < 1 || m > q) throw DomainError("count_im needs 1 <= m <= q");
    return checked_mul(2, binomial(q, m));
}

std::uint64_t count_im_prime(int q, int m) {
    if (m < 1 || 2 * m > q) throw DomainError("count_im_prime needs 1 <= m <= q/2");
    return checked_mul(2, checked_mul(binomial(q, m), binomial(q - m, m)));
}

CountReport total_lower_bound(int q) {
    if (q < 3) throw HypothesisError("counting applies to q >= 3");
    CountReport report;
    report.q = q;
    std::uint64_t im_sum = 0;
    for (int m = 1; m <= q; ++m) {
        report.per_im.emplace_back(m, count_im(q, m));
        im_sum = checked_add(im_sum, report.per_im.back().second);
    }
    if (q >= 63) throw OverflowError("2^{q+1} does not fit in 64 bits");
    const std::uint64_t pow_q = std::uint64_t{1} << q;
    if (im_sum != 2 * pow_q - 2) throw Error("binomial identity check failed");

    std::uint64_t prime_sum = 0;
    for (int m = 1; 2 * m <= q; ++m) {
        report.per_im_prime.emplace_back(m, count_im_prime(q, m));
        prime_sum = checked_add(prime_sum, report.per_im_prime.back().second);
    }
    report.total_lower_bound = checked_add(im_sum, prime_sum);
    return report;
}

}  // namespace gibbs_tree
