#pragma once

// Ordered simplex-like regions R_i (i = 2..7) over exponent tuples
// (alpha_2, ..., alpha_i), the integrals
//   I_i = int_{R_i} d alpha / (alpha_2 ... alpha_i (1 - alpha_2 - ... - alpha_i)),
// and the amplitude coefficients feeding the signal lower bound.
//
// Membership constraints (strict; the formal perturbation delta is below
// any floating-point resolution and is treated as 0):
//   box:        1/12 <= alpha_j < 1
//   ordering:   alpha_i < alpha_{i-1} < ... < alpha_2 < 1 - sum
//   i = 2:      (3/4)(1 - alpha_2) < alpha_2 < 1/2
//   i >= 3:     (1/2)(1 - sum) < alpha_2 + ... + alpha_{i-1}
//   i >= 5:     (1/2)(alpha_3 + ... + alpha_i) < alpha_2
//
// Integration: the innermost coordinate integrates in closed form
// (int dt / (t (C - t)) = log(t/(C-t)) / C), outer coordinates by
// deterministic panel quadrature (i <= 4) or scrambled Sobol points with
// sequential conditioning onto the ordered box (i >= 3 QMC path).

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "klsieve/numerics.hpp"
#include "klsieve/parallel.hpp"
#include "klsieve/sobol.hpp"

namespace klsieve {

struct region_spec {
    int i = 2;
    // delta = mantissa * 10^exp10, kept as exact metadata only
    long long delta_mantissa = 1;
    int delta_exp10 = -2018;
};

inline constexpr double region_box_lo = 1.0 / 12.0;

inline constexpr std::array<double, 6> ii_reference_floors = {
    0.28768, 1.04781, 0.85019, 0.14893, 0.00424, 7.25032e-6};  // i = 2..7

inline bool region_contains(const region_spec& spec, std::span<const double> alpha) {
    const int i = spec.i;
    if (i < 2 || i > 7) throw std::invalid_argument("region_contains: i in 2..7");
    if (int(alpha.size()) != i - 1) throw std::invalid_argument("region_contains: need i-1 coordinates");
    double sum = 0;
    for (double a : alpha) {
        if (a < region_box_lo || a >= 1.0) return false;
        sum += a;
    }
    for (std::size_t j = 0; j + 1 < alpha.size(); ++j)
        if (!(alpha[j + 1] < alpha[j])) return false;
    if (!(alpha[0] < 1.0 - sum)) return false;
    if (i == 2) return 0.75 * (1.0 - alpha[0]) < alpha[0] && alpha[0] < 0.5;
    if (!(0.5 * (1.0 - sum) < sum - alpha.back())) return false;
    if (i >= 5 && !(0.5 * (sum - alpha[0]) < alpha[0])) return false;
    return true;
}

namespace detail {

// closed-form innermost integral over alpha_i given the outer coordinates;
// S1 = alpha_2 + ... + alpha_{i-1}
inline double inner_closed_form(int i, double S1, double a2, double a_prev) {
    const double C = 1.0 - S1;
    double lo = std::max(region_box_lo, 1.0 - 3.0 * S1);
    double hi = std::min(a_prev, C - a2);
    if (i >= 5) hi = std::min(hi, 3.0 * a2 - S1);
    if (!(hi > lo) || !(C > hi)) return 0.0;
    return (std::log(hi / (C - hi)) - std::log(lo / (C - lo))) / C;
}

inline std::uint64_t replicate_seed(std::uint64_t seed, std::size_t rep) {
    return qmc::detail::splitmix64(seed ^ (0x5851f42d4c957f2dull + rep));
}

}  // namespace detail

struct integral_result {
    int i = 0;
    double estimate = 0;
    double error = 0;  // replicate-spread standard error (QMC) or panel-refinement gap
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// deterministic path: exact for i=2, nested panel quadrature for i=3,4
inline integral_result integrate_region_quadrature(int i, int panels = 160, int gl_points = 16) {
    if (i < 2 || i > 4)
        throw std::invalid_argument("integrate_region_quadrature: deterministic path covers i in 2..4");
    integral_result r;
    r.i = i;
    auto run = [&](int pan) {
        if (i == 2) {
            // int_{3/7}^{1/2} da/(a(1-a)) = log(a/(1-a)) evaluated at the ends
            return std::log(1.0) - std::log((3.0 / 7.0) / (4.0 / 7.0));
        }
        if (i == 3) {
            return num::integrate_panels(
                [&](double a2) { return detail::inner_closed_form(3, a2, a2, a2) / a2; },
                region_box_lo, 0.5, pan, gl_points);
        }
        return num::integrate_panels(
            [&](double a2) {
                const double hi3 = std::min(a2, 1.0 / 3.0);
                if (hi3 <= region_box_lo) return 0.0;
                const int inner_pan = std::max(4, pan / 2);
                return num::integrate_panels(
                    [&](double a3) {
                        return detail::inner_closed_form(4, a2 + a3, a2, a3) / (a2 * a3);
                    },
                    region_box_lo, hi3, inner_pan, gl_points);
            },
            region_box_lo, 0.5, pan, gl_points);
    };
    const double coarse = run(panels / 2);
    r.estimate = run(panels);
    r.error = std::abs(r.estimate - coarse);
    return r;
}

// QMC path for any i >= 3: scrambled Sobol replicates; coordinates are
// conditioned sequentially into the ordered box (alpha_j < min(alpha_{j-1}, 1/j)),
// innermost coordinate closed-form
inline integral_result integrate_region_qmc(int i, std::uint64_t samples, std::uint64_t seed,
                                            unsigned workers = 0, unsigned replicates = 8) {
    if (i < 3 || i > 7) throw std::invalid_argument("integrate_region_qmc: i in 3..7");
    const int d = i - 2;
    const std::uint64_t per_rep = std::max<std::uint64_t>(1, samples / replicates);
    std::vector<double> rep_means(replicates, 0.0);
    parallel_chunks(0, replicates, [&](unsigned, std::size_t lo_r, std::size_t hi_r) {
        for (std::size_t rep = lo_r; rep < hi_r; ++rep) {
            qmc::sobol_sequence seq(d, detail::replicate_seed(seed, rep));
            std::array<double, 6> u{}, alpha{};
            double acc = 0;
            for (std::uint64_t t = 0; t < per_rep; ++t) {
                seq.next(u.data());
                double prev_cap = 0.5, jac = 1.0, S1 = 0, prod = 1;
                for (int j = 0; j < d; ++j) {
                    const double cap = std::min(prev_cap, 1.0 / double(j + 2));
                    const double width = cap - region_box_lo;
                    if (width <= 0) { jac = 0; break; }
                    alpha[std::size_t(j)] = region_box_lo + u[std::size_t(j)] * width;
                    jac *= width;
                    prev_cap = alpha[std::size_t(j)];
                    S1 += alpha[std::size_t(j)];
                    prod *= alpha[std::size_t(j)];
                }
                if (jac == 0) continue;
                const double inner =
                    detail::inner_closed_form(i, S1, alpha[0], alpha[std::size_t(d) - 1]);
                if (inner != 0) acc += jac * inner / prod;
            }
            rep_means[rep] = acc / double(per_rep);
        }
    }, workers);
    double mean = 0;
    for (double m : rep_means) mean += m;
    mean /= double(replicates);
    double var = 0;
    for (double m : rep_means) var += (m - mean) * (m - mean);
    var /= double(replicates - 1);
    integral_result r;
    r.i = i;
    r.estimate = mean;
    r.error = std::sqrt(var / double(replicates));
    r.samples = per_rep * replicates;
    r.seed = seed;
    return r;
}

enum class region_method { quadrature, qmc };

inline integral_result integrate_region(int i, region_method m, std::uint64_t samples = 1 << 22,
                                        std::uint64_t seed = 42, unsigned workers = 0) {
    if (m == region_method::quadrature) {
        if (i > 4) throw std::invalid_argument("quadrature cross-check offered for i <= 4 only");
        return integrate_region_quadrature(i);
    }
    if (i == 2) return integrate_region_quadrature(2);
    return integrate_region_qmc(i, samples, seed, workers);
}

// ---------------------------------------------------------------------------
// amplitude coefficients
//   l_i = max(0, 1 - 4|eta| (8/3pi)^{i-1} (11/12)^i + B_i eta^2)
//   u_i = 16^i |eta|^4 + 4 (22/3)^i |eta|^3 + 6 4^i eta^2 + 4 (2 sqrt 5)^i |eta| + 2^i

struct amplitude_coeffs {
    int i = 0;
    double l = 0;
    double u = 0;
    double eta = 0;
};

inline amplitude_coeffs amplitude_for(int i, double eta, double b_i) {
    if (i < 2 || i > 7) throw std::invalid_argument("amplitude_for: i in 2..7");
    const double e = std::abs(eta);
    const double g = std::pow(8.0 / (3.0 * std::numbers::pi), i - 1) * std::pow(11.0 / 12.0, i);
    const double l = 1.0 - 4.0 * e * g + b_i * eta * eta;
    const double u = std::pow(16.0, i) * std::pow(e, 4) + 4 * std::pow(22.0 / 3.0, i) * std::pow(e, 3) +
                     6 * std::pow(4.0, i) * e * e + 4 * std::pow(2 * std::sqrt(5.0), i) * e +
                     std::pow(2.0, i);
    return {i, std::max(0.0, l), u, eta};
}

// signal lower bound: sum_{i=2..7} I_i sqrt(l_i^3 / u_i); arrays indexed i-2
inline double signal_lower_bound(double eta, std::span<const double> I_vals,
                                 std::span<const double> B_vals) {
    if (I_vals.size() != 6 || B_vals.size() != 6)
        throw std::invalid_argument("signal_lower_bound: six i-values (i = 2..7) required");
    double s = 0;
    for (int i = 2; i <= 7; ++i) {
        const auto ac = amplitude_for(i, eta, B_vals[std::size_t(i) - 2]);
        if (ac.l > 0) s += I_vals[std::size_t(i) - 2] * std::sqrt(ac.l * ac.l * ac.l / ac.u);
    }
    return s;
}

}  // namespace klsieve
