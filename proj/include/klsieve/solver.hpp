#pragma once

// Endgame arithmetic: exact continued fractions, the truncated divisor
// function and its product lower bound, and the inequality
// rho * A1(eta) > A2(eta) that yields the almost-prime exponent r.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "klsieve/arith.hpp"
#include "klsieve/parallel.hpp"

namespace klsieve {

struct invalid_params : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct no_positive_lower_bound : std::domain_error {
    explicit no_positive_lower_bound(double eta)
        : std::domain_error("signal lower bound vanishes at eta = " + std::to_string(eta)) {}
};

// exact reduced fraction, word-sized
struct rational {
    i64 num = 0;
    i64 den = 1;

    rational() = default;
    rational(i64 n, i64 d = 1) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        if (den < 0) num = -num, den = -den;
        const i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) num /= g, den /= g;
    }

    double to_double() const { return double(num) / double(den); }
    bool operator==(const rational&) const = default;
    auto operator<=>(const rational& o) const { return num * o.den <=> o.num * den; }
};

inline rational operator+(rational a, rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
inline rational operator*(rational a, rational b) { return {a.num * b.num, a.den * b.den}; }

struct continued_fraction {
    rational t;
    std::vector<i64> quotients;  // [a0; a1, ..., ak]
};

// Euclid's algorithm; canonical (last quotient >= 2 unless the expansion
// has length 1)
inline continued_fraction cf_expand(rational t) {
    if (t.num <= 0) throw std::invalid_argument("cf_expand: t > 0 required");
    continued_fraction cf;
    cf.t = t;
    i64 n = t.num, d = t.den;
    while (d != 0) {
        cf.quotients.push_back(n / d);
        n = std::exchange(d, n % d);
    }
    return cf;
}

// exact factor 1 / (1 + a0 + a1 + ... + ak)
inline rational cf_factor(rational t) {
    const auto cf = cf_expand(t);
    i64 s = 1;
    for (i64 a : cf.quotients) s += a;
    return {1, s};
}

// ---------------------------------------------------------------------------
// truncated divisor function

namespace detail {

using big = boost::multiprecision::cpp_int;

// d <= n^{1/(1+Delta)}  <=>  d^{num+den} <= n^{den} with Delta = num/den, exactly
inline bool below_threshold(u64 d, u64 n, const rational& delta) {
    const unsigned lhs_e = unsigned(delta.num + delta.den);
    const unsigned rhs_e = unsigned(delta.den);
    return boost::multiprecision::pow(big(d), lhs_e) <= boost::multiprecision::pow(big(n), rhs_e);
}

}  // namespace detail

// tau_Delta(n; alpha, beta) = sum_{d | n, d <= n^{1/(1+Delta)}} alpha^{omega(d)} beta^{omega(n/d)}
// for squarefree n
inline double tau_delta(u64 n, const rational& delta, double alpha, double beta) {
    if (delta.num <= delta.den) throw invalid_params("tau_delta: Delta > 1 required");
    const auto fac = factorize(n);
    if (!fac.squarefree()) throw std::invalid_argument("tau_delta: n must be squarefree");
    const int k = fac.omega();
    double total = 0;
    for (u64 mask = 0; mask < (u64(1) << k); ++mask) {
        u64 d = 1;
        int w = 0;
        for (int j = 0; j < k; ++j)
            if (mask >> j & 1) d *= fac.factors[std::size_t(j)].first, ++w;
        if (n == 1 || detail::below_threshold(d, n, delta))
            total += std::pow(alpha, w) * std::pow(beta, k - w);
    }
    return total;
}

// parameter bundle; beta = alpha * Delta is implied and checked
struct pipeline_params {
    double eta = 0;
    double rho = 0;
    rational delta{14, 13};
    double alpha = 0;
    double beta = 0;

    void validate() const {
        if (!(delta.num > delta.den)) throw invalid_params("Delta must be rational > 1");
        if (std::abs(beta - alpha * delta.to_double()) > 1e-12 * std::max(1.0, std::abs(beta)))
            throw invalid_params("beta = alpha * Delta violated");
        if (8 * alpha / (3 * std::numbers::pi) + 2 * beta > 2 + 1e-12)
            throw invalid_params("8 alpha/(3 pi) + 2 beta <= 2 violated");
        if (alpha + beta > 2 + 1e-12) throw invalid_params("alpha + beta <= 2 violated");
        if (alpha <= 0 || beta <= 0) throw invalid_params("alpha, beta > 0 required");
    }
};

// product lower bound A(Delta) (alpha+beta)^{omega(n)}
inline double tau_delta_lower_bound(const pipeline_params& p, unsigned omega_n) {
    p.validate();
    return cf_factor(p.delta).to_double() * std::pow(p.alpha + p.beta, double(omega_n));
}

// ---------------------------------------------------------------------------
// solving for the exponent r

struct solve_result {
    double eta = 0;
    double A1 = 0;
    double A2 = 0;
    double rho = 0;
    int r = 0;
    pipeline_params params;
    bool dead_zone = false;
};

inline constexpr double rho_safety = 1e-4;  // rho = (A2/A1)(1 + safety)
inline constexpr double r_tie_guard = 1e-9;

// largest omega with A(Delta) (alpha+beta)^omega < rho; needs alpha+beta > 1,
// otherwise the product bound never exceeds rho and no finite exponent follows
inline int max_omega_below(double rho, const rational& delta, double alpha, double beta) {
    if (alpha + beta <= 1.0)
        throw invalid_params("max_omega_below: alpha + beta must exceed 1 for a finite exponent");
    const double a_delta = cf_factor(delta).to_double();
    const double threshold = std::log(rho / a_delta) / std::log(alpha + beta);
    return int(std::floor(threshold - r_tie_guard));
}

inline solve_result solve_r(double eta, double A1, double A2, const rational& delta, double alpha,
                            double beta) {
    if (A1 <= 0) throw no_positive_lower_bound(eta);
    solve_result out;
    out.eta = eta;
    out.A1 = A1;
    out.A2 = A2;
    out.rho = A2 / A1 * (1 + rho_safety);
    out.params = {eta, out.rho, delta, alpha, beta};
    out.params.validate();
    out.r = max_omega_below(out.rho, delta, alpha, beta);
    return out;
}

// ---------------------------------------------------------------------------
// grid search over admissible (Delta, alpha, beta)

struct optimize_options {
    i64 max_den = 20;          // Delta = p/q with q <= max_den
    double max_delta = 3.0;
    int alpha_mesh = 1000;
    unsigned workers = 0;
};

// the boundary alpha for fixed Delta: both linear constraints active-or-slack
inline double boundary_alpha(const rational& delta) {
    const double d = delta.to_double();
    return std::min(2.0 / (8.0 / (3 * std::numbers::pi) + 2 * d), 2.0 / (1 + d));
}

// reference parameter choice kept as an explicit grid point
inline pipeline_params reference_choice(double eta = 0) {
    const rational delta{14, 13};
    const double alpha = 39 * std::numbers::pi / (52 + 42 * std::numbers::pi);
    return {eta, 0, delta, alpha, alpha * delta.to_double()};
}

inline solve_result optimize_params(double eta, double A1, double A2,
                                    const optimize_options& opt = {}) {
    if (A1 <= 0) throw no_positive_lower_bound(eta);
    std::vector<rational> deltas;
    for (i64 q = 1; q <= opt.max_den; ++q)
        for (i64 p = q + 1; double(p) / double(q) <= opt.max_delta; ++p) {
            rational d{p, q};
            if (d.den == q) deltas.push_back(d);  // keep only reduced p/q
        }
    std::optional<solve_result> best;
    auto consider = [&](const rational& d, double alpha) {
        const double beta = alpha * d.to_double();
        if (8 * alpha / (3 * std::numbers::pi) + 2 * beta > 2 || alpha + beta > 2) return;
        if (alpha <= 0 || alpha + beta <= 1.0) return;
        auto res = solve_r(eta, A1, A2, d, alpha, beta);
        if (!best || res.r < best->r ||
            (res.r == best->r && (d < best->params.delta ||
                                  (d == best->params.delta && alpha < best->params.alpha))))
            best = res;
    };
    for (const auto& d : deltas) {
        const double hi = boundary_alpha(d);
        for (int j = 1; j <= opt.alpha_mesh; ++j) consider(d, hi * double(j) / opt.alpha_mesh);
    }
    const auto ref = reference_choice(eta);
    consider(ref.delta, ref.alpha);
    if (!best) throw invalid_params("optimize_params: empty admissible grid");
    return *best;
}

}  // namespace klsieve
