#include "gibbs_tree/root_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gibbs_tree/errors.hpp"

namespace gibbs_tree {

void SolverConfig::validate() const {
    if (grid_points < 100) throw DomainError("grid_points must be >= 100");
    if (!(refine_tol > 0.0 && refine_tol < 1e-2)) throw DomainError("refine_tol must lie in (0, 1e-2)");
    if (!(dedup_tol > 0.0 && dedup_tol < 1e-2)) throw DomainError("dedup_tol must lie in (0, 1e-2)");
    if (max_refine_iters < 1) throw DomainError("max_refine_iters must be positive");
}

std::vector<Bracket> scan_sign_changes(const ScalarFn& fn, double lo, double hi,
                                       const SolverConfig& config, GridKind grid) {
    config.validate();
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("scan interval must satisfy lo < hi");
    }
    if (grid == GridKind::Geometric && !(lo > 0.0)) {
        throw DomainError("geometric scan needs lo > 0");
    }
    const int n = config.grid_points;
    const double a = grid == GridKind::Geometric ? std::log(lo) : lo;
    const double b = grid == GridKind::Geometric ? std::log(hi) : hi;
    auto node = [&](int i) {
        if (i == n - 1) return hi;
        const double s = a + (b - a) * static_cast<double>(i) / (n - 1);
        return grid == GridKind::Geometric ? std::exp(s) : s;
    };
    auto eval = [&](double x) {
        const double v = fn(x);
        if (!std::isfinite(v)) throw EvaluationError("scanned function is not finite", x);
        return v;
    };

    std::vector<Bracket> out;
    double x_prev = lo;
    double f_prev = eval(lo);
    for (int i = 1; i < n; ++i) {
        const double x = node(i);
        const double fx = eval(x);
        const bool crossing = (f_prev < 0.0 && fx > 0.0) || (f_prev > 0.0 && fx < 0.0);
        if (crossing || fx == 0.0 || (i == 1 && f_prev == 0.0)) {
            out.push_back({x_prev, x, f_prev, fx});
        }
        x_prev = x;
        f_prev = fx;
    }
    return out;
}

double refine(const ScalarFn& fn, const Bracket& bracket, const SolverConfig& config) {
    config.validate();
    if (!(bracket.lo < bracket.hi)) throw DomainError("bracket needs lo < hi");
    if (bracket.f_lo == 0.0) return bracket.lo;
    if (bracket.f_hi == 0.0) return bracket.hi;
    if ((bracket.f_lo > 0.0) == (bracket.f_hi > 0.0)) throw DomainError("bracket has no sign change");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    double a = bracket.lo, b = bracket.hi, c = bracket.hi;
    double fa = bracket.f_lo, fb = bracket.f_hi, fc = fb;
    double d = b - a, e = d;

    for (int iter = 0; iter < config.max_refine_iters; ++iter) {
        if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * config.refine_tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic interpolation, or secant when only two points are distinct.
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
        fb = fn(b);
        if (!std::isfinite(fb)) throw ConvergenceError("function became non-finite during refinement");
    }
    throw ConvergenceError("refinement exceeded " + std::to_string(config.max_refine_iters) + " iterations");
}

std::pair<double, double> scan_interval_for_im(const ModelParams& params, int m) {
    const auto [lo, hi] = f_pow_k_image(params, m);
    return {lo * 0.99, hi * 1.01};
}

namespace {

// Merges roots closer than dedup_tol * max(1, |x|), keeping the smaller score.
template <class Root, class Key, class Score>
std::vector<Root> dedup_sorted(std::vector<Root> roots, double tol, Key key, Score score) {
    std::sort(roots.begin(), roots.end(), [&](const Root& a, const Root& b) { return key(a) < key(b); });
    std::vector<Root> out;
    for (auto& r : roots) {
        if (!out.empty()) {
            const double prev = key(out.back());
            if (std::abs(key(r) - prev) <= tol * std::max(1.0, std::abs(prev))) {
                if (score(r) < score(out.back())) out.back() = r;
                continue;
            }
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace

std::vector<ReducedScalar> solve_im(const ModelParams& params, int m, const SolverConfig& config) {
    require_solver_hypothesis(params);
    const InvariantSetId set{SetKind::IM, m};
    set.validate(params.q);
    config.validate();

    const auto [lo, hi] = scan_interval_for_im(params, m);
    const double slope_gap = g_prime_at_1(params, m) - 1.0;
    const int k = params.k;

    // ln g(e^u) - u vanishes at u = 0 for every theta; dividing by u removes that
    // root so the scan only sees the others. The scan runs in u = ln x.
    auto log_gap = [&](double u) {
        const double x = std::exp(u);
        return k * std::log(f_rational(f_pow_k(x, params, m), params, m)) - u;
    };
    auto deflated = [&](double u) {
        if (std::abs(u) < 1e-7) return slope_gap;
        return log_gap(u) / u;
    };

    std::vector<double> xs{1.0};
    for (const Bracket& br : scan_sign_changes(deflated, std::log(lo), std::log(hi), config)) {
        xs.push_back(std::exp(refine(deflated, br, config)));
    }
    auto gap = [&](double x) { return std::abs(g_map(x, params, m) - x); };
    xs = dedup_sorted(std::move(xs), config.dedup_tol, [](double x) { return x; }, gap);

    std::vector<ReducedScalar> out;
    out.reserve(xs.size());
    for (double x : xs) {
        ReducedScalar sol;
        sol.set = set;
        sol.x = x;
        sol.y = x == 1.0 ? 1.0 : f_pow_k(x, params, m);
        embed_full(sol, params);
        out.push_back(sol);
    }
    return out;
}

double scan_upper_for_im_prime(const ModelParams& params, int m) {
    double z = std::max(2.0, 2.0 * (params.theta + m - 1) / m);
    constexpr int kSamples = 64;
    for (int doubling = 0; doubling < 64; ++doubling) {
        bool negative = true;
        for (int i = 0; i <= kSamples && negative; ++i) {
            const double s = z * (1.0 + static_cast<double>(i) / kSamples);
            negative = poly11_normalized(s, params, m) < 0.0;
        }
        if (negative) return 2.0 * z;
        z *= 2.0;
    }
    throw ConvergenceError("could not find a negative tail of the IM_PRIME polynomial");
}

ImPrimeSolution solve_im_prime(const ModelParams& params, int m, const SolverConfig& config) {
    require_solver_hypothesis(params);
    const InvariantSetId set{SetKind::IM_PRIME, m};
    set.validate(params.q);
    config.validate();

    const double upper = scan_upper_for_im_prime(params, m);
    // Limit of poly11_normalized(z) / (z - 1) at z = 1: the slope over the scale
    // 2 (theta + q - 1)^k (1 - theta) of the two equal products.
    const double at_one =
        poly11_dprime_at_1(params) / (2.0 * (params.theta + params.q - 1) * (1.0 - params.theta));
    auto deflated = [&](double z) {
        if (std::abs(z - 1.0) < 1e-9) return at_one;
        return poly11_normalized(z, params, m) / (z - 1.0);
    };

    std::vector<double> zs{1.0};
    for (const Bracket& br : scan_sign_changes(deflated, 0.0, upper, config)) {
        zs.push_back(refine(deflated, br, config));
    }
    auto score = [&](double z) { return std::abs(poly11_normalized(z, params, m)); };
    zs = dedup_sorted(std::move(zs), config.dedup_tol, [](double z) { return z; }, score);

    ImPrimeSolution result;
    for (double z : zs) {
        const std::optional<double> t = z == 1.0 ? std::optional<double>(1.0) : recover_t_from_z(z, params, m);
        if (!t) {
            result.diagnostics.push_back({z, std::nullopt, 0.0, "no positive t^k for this root"});
            continue;
        }
        const double residual = im_prime_residual(z, *t, params, m);
        if (residual > 1e-9) {
            result.diagnostics.push_back({z, t, residual, "recovered (z, t) does not solve the system"});
            continue;
        }
        ReducedScalar sol;
        sol.set = set;
        sol.z = z;
        sol.t = *t;
        sol.x = std::pow(z, params.k);
        sol.y = std::pow(*t, params.k);
        embed_full(sol, params);
        result.solutions.push_back(sol);
    }
    std::sort(result.solutions.begin(), result.solutions.end(),
              [](const ReducedScalar& a, const ReducedScalar& b) { return a.x < b.x; });
    return result;
}

std::vector<ReducedScalar> solve_set(const ModelParams& params, const InvariantSetId& set,
                                     const SolverConfig& config) {
    if (set.kind == SetKind::IM) return solve_im(params, set.m, config);
    return solve_im_prime(params, set.m, config).solutions;
}

}  // namespace gibbs_tree
