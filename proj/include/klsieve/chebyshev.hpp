#pragma once

// Chebyshev polynomials of the second kind, Gauss-Chebyshev expansion
// coefficients beta_k(f) = (2/pi) int_{-1}^1 f(t) U_k(t) sqrt(1-t^2) dt,
// truncation error measurement, and the |cos| averaging identity whose main
// term is (4/3pi) sum y_j.

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "klsieve/numerics.hpp"

namespace klsieve {

inline double chebyshev_u(unsigned k, double x) {
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = 2 * x;
    for (unsigned j = 2; j <= k; ++j) {
        const double nxt = 2 * x * cur - prev;
        prev = cur;
        cur = nxt;
    }
    return cur;
}

struct chebyshev_expansion {
    std::vector<double> beta;  // beta_0 .. beta_K
    unsigned K = 0;
    double smoothing_delta = 0;  // 0 when the target needed none

    // Clenshaw summation over the U_k recurrence
    double evaluate(double x) const {
        double b1 = 0, b2 = 0;
        for (unsigned k = K + 1; k-- > 0;) {
            const double b0 = beta[k] + 2 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        return b1;
    }
};

// Gauss-Chebyshev (second kind) nodes x_j = cos(j pi/(n+1)) absorb the
// weight: beta_k ~ (2/(n+1)) sum_j f(x_j) sin^2(phi_j) U_k(x_j)
inline chebyshev_expansion beta_coefficients(const std::function<double(double)>& f, unsigned K,
                                             unsigned nodes = 0) {
    if (nodes == 0) nodes = 4 * (K + 1);
    chebyshev_expansion e;
    e.K = K;
    e.beta.assign(K + 1, 0.0);
    std::vector<double> fx(nodes), phi(nodes);
    for (unsigned j = 1; j <= nodes; ++j) {
        phi[j - 1] = std::numbers::pi * j / (nodes + 1);
        fx[j - 1] = f(std::cos(phi[j - 1]));
    }
    for (unsigned k = 0; k <= K; ++k) {
        double s = 0;
        for (unsigned j = 0; j < nodes; ++j) {
            const double sn = std::sin(phi[j]);
            s += fx[j] * sn * std::sin((k + 1) * phi[j]);
        }
        e.beta[k] = 2.0 / (nodes + 1) * s;
    }
    return e;
}

// ---------------------------------------------------------------------------
// smoothed |x|: R(x) |x| with an even C^3 cutoff, R = 0 on [-D, D], R = 1
// beyond 2D, 7th-order smoothstep join

namespace detail {

inline double smoothstep7(double t) {
    // s(0)=0, s(1)=1, s', s'', s''' vanish at both ends
    return t * t * t * t * (35 + t * (-84 + t * (70 - 20 * t)));
}

}  // namespace detail

inline double smooth_cutoff(double x, double delta) {
    const double a = std::abs(x);
    if (a <= delta) return 0.0;
    if (a >= 2 * delta) return 1.0;
    return detail::smoothstep7((a - delta) / delta);
}

inline double smoothed_abs(double x, double delta) { return smooth_cutoff(x, delta) * std::abs(x); }

// ---------------------------------------------------------------------------

struct truncation_report {
    unsigned K = 0;
    double sup_error = 0;
};

inline truncation_report truncated_error(const std::function<double(double)>& f, unsigned K,
                                         unsigned C, int grid_points = 10001) {
    if (K <= C) throw std::invalid_argument("truncated_error: K > C required");
    const auto e = beta_coefficients(f, K);
    double worst = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double x = -1.0 + 2.0 * i / (grid_points - 1);
        worst = std::max(worst, std::abs(f(x) - e.evaluate(x)));
    }
    return {K, worst};
}

// least-squares slope of log(error) against log(K); the truncation bound
// predicts slope <= 1 - C
inline double truncation_decay_exponent(const std::function<double(double)>& f, unsigned C,
                                        std::span<const unsigned> Ks) {
    std::vector<double> lx, ly;
    for (unsigned K : Ks) {
        const auto r = truncated_error(f, K, C);
        lx.push_back(std::log(double(K)));
        ly.push_back(std::log(std::max(r.sup_error, 1e-300)));
    }
    const std::size_t n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

// ---------------------------------------------------------------------------

inline constexpr double abs_cos_main_constant = 4.0 / (3.0 * std::numbers::pi);

struct abs_cos_average {
    double direct = 0;     // sum y_j |cos theta_j|
    double main_term = 0;  // (4/3pi) sum y_j
    double difference = 0;
};

inline abs_cos_average average_abs_cos(std::span<const double> thetas, std::span<const double> y) {
    if (thetas.size() != y.size()) throw std::invalid_argument("average_abs_cos: size mismatch");
    abs_cos_average r;
    for (std::size_t j = 0; j < thetas.size(); ++j) {
        if (std::abs(y[j]) > 1 + 1e-12)
            throw std::invalid_argument("average_abs_cos: |y_j| <= 1 required");
        r.direct += y[j] * std::abs(std::cos(thetas[j]));
        r.main_term += y[j];
    }
    r.main_term *= abs_cos_main_constant;
    r.difference = r.direct - r.main_term;
    return r;
}

}  // namespace klsieve
