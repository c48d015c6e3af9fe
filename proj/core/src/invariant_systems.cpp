#include "gibbs_tree/invariant_systems.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "gibbs_tree/errors.hpp"

namespace gibbs_tree {

void InvariantSetId::validate(int q) const {
    if (kind == SetKind::IM) {
        if (m < 1 || m > q - 1) {
            throw DomainError("I_m needs 1 <= m <= q-1, got m = " + std::to_string(m));
        }
    } else if (m < 1 || 2 * m > q - 1) {
        throw DomainError("I'_m needs m >= 1 and 2m <= q-1, got m = " + std::to_string(m));
    }
}

std::string InvariantSetId::to_string() const {
    return (kind == SetKind::IM ? "im:" : "imprime:") + std::to_string(m);
}

InvariantSetId InvariantSetId::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainError("set selector must be im:<m> or imprime:<m>");
    const std::string head = text.substr(0, colon);
    const std::string tail = text.substr(colon + 1);
    InvariantSetId id;
    if (head == "im") {
        id.kind = SetKind::IM;
    } else if (head == "imprime") {
        id.kind = SetKind::IM_PRIME;
    } else {
        throw DomainError("unknown set kind '" + head + "'");
    }
    std::size_t used = 0;
    try {
        id.m = std::stoi(tail, &used);
    } catch (const std::exception&) {
        throw DomainError("set index '" + tail + "' is not an integer");
    }
    if (used != tail.size()) throw DomainError("set index '" + tail + "' is not an integer");
    return id;
}

namespace {

void check_im_args(double x, const ModelParams& params, int m) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("f needs finite x >= 0");
    if (m < 1 || m > params.q - 1) throw DomainError("f needs 1 <= m <= q-1");
}

}  // namespace

double f_rational(double x, const ModelParams& params, int m) {
    check_im_args(x, params, m);
    const double theta = params.theta;
    const double denom = m * x + theta + params.q - m - 1;
    assert(denom > 0.0);
    return ((theta + m - 1) * x + params.q - m) / denom;
}

double f_pow_k(double x, const ModelParams& params, int m) {
    return std::exp(params.k * std::log(f_rational(x, params, m)));
}

double g_map(double x, const ModelParams& params, int m) {
    return f_pow_k(f_pow_k(x, params, m), params, m);
}

double f_prime(double x, const ModelParams& params, int m) {
    check_im_args(x, params, m);
    const double theta = params.theta;
    const double denom = m * x + theta + params.q - m - 1;
    return (theta - 1) * (theta + params.q - 1) / (denom * denom);
}

double g_prime_at_1(const ModelParams& params, int m) {
    check_im_args(1.0, params, m);
    const double r = params.k * (params.theta - 1) / (params.theta + params.q - 1);
    return r * r;
}

double theta_critical(int q, int k) {
    if (k < 3) throw HypothesisError("theta_critical needs k >= 3");
    if (q < 3 || q >= k + 1) throw HypothesisError("theta_critical needs 3 <= q < k+1");
    return static_cast<double>(k - q + 1) / static_cast<double>(k + 1);
}

std::pair<double, double> f_pow_k_image(const ModelParams& params, int m) {
    check_im_args(1.0, params, m);
    const double theta = params.theta;
    const double at_inf = (theta + m - 1) / m;
    const double at_zero = static_cast<double>(params.q - m) / (theta + params.q - m - 1);
    const double a = std::pow(at_inf, params.k);
    const double b = std::pow(at_zero, params.k);
    return {std::min(a, b), std::max(a, b)};
}

namespace {

struct Poly11Parts {
    long double a, d, b, n;
};

Poly11Parts poly11_parts(double z_in, const ModelParams& params, int m) {
    const long double z = z_in;
    const long double theta = params.theta;
    const long double q = params.q;
    const long double mm = m;
    const long double zk = std::pow(z, static_cast<long double>(params.k));
    const long double zk1 = zk * z;
    return {
        (theta + 2 * mm - 1) * zk - mm * zk1 + mm * z + q - 2 * mm,
        theta + mm - 1 - mm * z,
        mm * zk + q - mm - 1 + theta,
        mm * zk1 - mm * zk + (theta + q - 2 * mm - 1) * z - q + 2 * mm,
    };
}

void check_prime_args(double z, const ModelParams& params, int m) {
    if (!std::isfinite(z)) throw DomainError("poly11 needs finite z");
    InvariantSetId{SetKind::IM_PRIME, m}.validate(params.q);
}

}  // namespace

Poly11Terms poly11_terms(double z, const ModelParams& params, int m) {
    check_prime_args(z, params, m);
    const auto [a, d, b, n] = poly11_parts(z, params, m);
    const auto kk = static_cast<long double>(params.k);
    const long double left = std::pow(a, kk) * d;
    const long double right = std::pow(b, kk) * n;
    return {left - right, std::abs(left) + std::abs(right)};
}

double poly11_normalized(double z, const ModelParams& params, int m) {
    const Poly11Terms terms = poly11_terms(z, params, m);
    if (std::isfinite(terms.scale) && std::isfinite(terms.value)) {
        return terms.scale == 0.0L ? 0.0 : static_cast<double>(terms.value / terms.scale);
    }
    // Out of long double range: compare the two products through their logs.
    const auto [a, d, b, n] = poly11_parts(z, params, m);
    const auto kk = static_cast<long double>(params.k);
    int s_left = (d < 0 ? -1 : 1);
    int s_right = (n < 0 ? -1 : 1);
    const bool k_odd = params.k % 2 == 1;
    if (k_odd && a < 0) s_left = -s_left;
    if (k_odd && b < 0) s_right = -s_right;
    const long double l_left = kk * std::log(std::abs(a)) + std::log(std::abs(d));
    const long double l_right = kk * std::log(std::abs(b)) + std::log(std::abs(n));
    const long double top = std::max(l_left, l_right);
    const long double e_left = std::exp(l_left - top);
    const long double e_right = std::exp(l_right - top);
    return static_cast<double>((s_left * e_left - s_right * e_right) / (e_left + e_right));
}

double poly11(double z, const ModelParams& params, int m) {
    return static_cast<double>(poly11_terms(z, params, m).value);
}

double poly11_dprime_at_1(const ModelParams& params) {
    params.validate();
    const double s = params.theta - 1;
    const double q = params.q;
    const double k = params.k;
    return (k * k - 1) * s * s - 2 * q * s - q * q;
}

double poly11_slope_normalization(const ModelParams& params) {
    params.validate();
    return std::pow(params.theta + params.q - 1, params.k - 1);
}

std::optional<double> recover_t_from_z(double z, const ModelParams& params, int m) {
    check_prime_args(z, params, m);
    if (!(z > 0.0)) return std::nullopt;
    const auto parts = poly11_parts(z, params, m);
    if (parts.d == 0.0L) return std::nullopt;
    const long double tk = parts.n / parts.d;
    if (!(tk > 0.0L) || !std::isfinite(tk)) return std::nullopt;
    return static_cast<double>(std::pow(tk, 1.0L / params.k));
}

double im_prime_residual(double z, double t, const ModelParams& params, int m) {
    check_prime_args(z, params, m);
    const long double theta = params.theta;
    const long double q = params.q;
    const long double mm = m;
    const auto kk = static_cast<long double>(params.k);
    const long double zk = std::pow(static_cast<long double>(z), kk);
    const long double tk = std::pow(static_cast<long double>(t), kk);
    const long double denom = theta + mm * zk + mm * tk + q - 2 * mm - 1;
    const long double line1 = z - ((theta + mm - 1) * tk + mm * zk + q - 2 * mm) / denom;
    const long double line2 = t - ((theta + mm - 1) * zk + mm * tk + q - 2 * mm) / denom;
    return static_cast<double>(std::max(std::abs(line1), std::abs(line2)));
}

PeriodTwoField embed_pattern(const ReducedScalar& sol, int q) {
    sol.set.validate(q);
    if (!(sol.x > 0.0) || !(sol.y > 0.0)) throw DomainError("embedding needs x, y > 0");
    const auto dim = static_cast<std::size_t>(q - 1);
    const auto m = static_cast<std::size_t>(sol.set.m);
    const double hx = std::log(sol.x);
    const double hy = std::log(sol.y);
    std::vector<double> h(dim, 0.0), l(dim, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        h[i] = hx;
        l[i] = hy;
    }
    if (sol.set.kind == SetKind::IM_PRIME) {
        for (std::size_t i = dim - m; i < dim; ++i) {
            h[i] = hy;
            l[i] = hx;
        }
    }
    return {FieldVector(std::move(h)), FieldVector(std::move(l))};
}

PeriodTwoField embed_full(ReducedScalar& sol, const ModelParams& params) {
    PeriodTwoField field = embed_pattern(sol, params.q);
    sol.residual_full = period2_residual_norm(field, params);
    return field;
}

}  // namespace gibbs_tree
