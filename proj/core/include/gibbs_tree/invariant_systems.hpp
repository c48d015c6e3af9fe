#pragma once

#include <optional>
#include <string>

#include "gibbs_tree/model.hpp"

namespace gibbs_tree {

enum class SetKind { IM, IM_PRIME };

/// Reduction subspace of the period-two system.
///
/// IM, m:       u = (x,..,x, 1,..,1),        v = (y,..,y, 1,..,1)        with m leading x's.
/// IM_PRIME, m: u = (x,..,x, 1,..,1, y,..,y), v = (y,..,y, 1,..,1, x,..,x) with 2m <= q-1.
struct InvariantSetId {
    SetKind kind = SetKind::IM;
    int m = 1;

    /// Throws DomainError when m is out of range for q.
    void validate(int q) const;

    /// "im:<m>" or "imprime:<m>".
    std::string to_string() const;
    static InvariantSetId parse(const std::string& text);

    friend bool operator==(const InvariantSetId&, const InvariantSetId&) = default;
};

/// A root of a reduced scalar system. x = exp(h_i) and y = exp(l_i) on the
/// patterned coordinates; on IM_PRIME also z = x^{1/k}, t = y^{1/k}.
struct ReducedScalar {
    double x = 1.0;
    double y = 1.0;
    InvariantSetId set;
    std::optional<double> z;
    std::optional<double> t;
    double residual_full = 0.0;
};

/// f(x) = ((theta + m - 1) x + q - m) / (m x + theta + q - m - 1).
double f_rational(double x, const ModelParams& params, int m);

/// k-th power (not iterate) of f, as exp(k ln f).
double f_pow_k(double x, const ModelParams& params, int m);

/// g(x) = f^k(f^k(x)); fixed points of g are the IM solutions.
double g_map(double x, const ModelParams& params, int m);

/// f'(x) = (theta - 1)(theta + q - 1) / (m x + theta + q - m - 1)^2.
double f_prime(double x, const ModelParams& params, int m);

/// g'(1) = (k (theta - 1) / (theta + q - 1))^2.
double g_prime_at_1(const ModelParams& params, int m);

/// theta_cr = (k - q + 1) / (k + 1). Requires k >= 3 and 3 <= q < k+1.
double theta_critical(int q, int k);

/// Enclosure [((theta+m-1)/m)^k, ((q-m)/(theta+q-m-1))^k] of the image of
/// f^k on (0, inf); every fixed point of g lies in it.
std::pair<double, double> f_pow_k_image(const ModelParams& params, int m);

/// The two products of the IM_PRIME resultant polynomial, in extended precision:
///   value = A(z)^k D(z) - B(z)^k N(z),  scale = |A^k D| + |B^k N|
/// with A = (theta+2m-1) z^k - m z^{k+1} + m z + q - 2m, D = theta + m - 1 - m z,
///      B = m z^k + q - m - 1 + theta,   N = m z^{k+1} - m z^k + (theta+q-2m-1) z - q + 2m.
struct Poly11Terms {
    long double value = 0.0L;
    long double scale = 0.0L;
};

Poly11Terms poly11_terms(double z, const ModelParams& params, int m);

/// value / scale, computed in log space so it stays finite for any z.
/// Has the sign of poly11 and magnitude at most 1.
double poly11_normalized(double z, const ModelParams& params, int m);

/// The resultant polynomial itself. May overflow to +-inf for large z and k.
double poly11(double z, const ModelParams& params, int m);

/// (k^2 - 1) s^2 - 2 q s - q^2 with s = theta - 1. Positive iff theta < theta_cr.
/// Equals d/dz poly11(1) divided by (theta + q - 1)^{k-1}.
double poly11_dprime_at_1(const ModelParams& params);

/// Positive normalization between poly11_dprime_at_1 and the true slope of
/// poly11 at z = 1: (theta + q - 1)^{k-1}.
double poly11_slope_normalization(const ModelParams& params);

/// t^k = N(z) / D(z), from the first line of the (z, t) system.
/// Returns nullopt when D(z) == 0 or t^k <= 0.
std::optional<double> recover_t_from_z(double z, const ModelParams& params, int m);

/// Max-norm residual of both lines of the (z, t) system on IM_PRIME.
double im_prime_residual(double z, double t, const ModelParams& params, int m);

/// Builds the full log-space field pair from the set pattern and stores the
/// period-two residual in sol.residual_full.
PeriodTwoField embed_full(ReducedScalar& sol, const ModelParams& params);

/// Same, for a const solution (residual not stored).
PeriodTwoField embed_pattern(const ReducedScalar& sol, int q);

}  // namespace gibbs_tree
