#pragma once

// Selberg sieve weights rho_d = mu(d) (log(sqrt(D)/d) / log sqrt(D))^2 on
// squarefree z-smooth d <= sqrt(D), their lcm convolution xi, and the
// desk-scale evaluation of
//   S(X, z; h, rho) = sum_n Psi(n/X) mu^2(n) h(n) (sum_{d | (n, P(z))} rho_d)^2
// against the two-dimensional main term.

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "klsieve/arith.hpp"
#include "klsieve/hecke.hpp"
#include "klsieve/numerics.hpp"
#include "klsieve/parallel.hpp"
#include "klsieve/sieve_fn.hpp"

namespace klsieve {

// ---------------------------------------------------------------------------
// smooth bump on [1,2]: c * exp(-1/((x-1)(2-x))), unit integral

namespace detail {

inline double bump_raw(double x) {
    if (x <= 1.0 || x >= 2.0) return 0.0;
    return std::exp(-1.0 / ((x - 1.0) * (2.0 - x)));
}

inline double bump_norm() {
    static const double norm = num::integrate_panels([](double t) { return bump_raw(t); },
                                                     1.0, 2.0, 16, 48);
    return norm;
}

}  // namespace detail

inline double bump_psi(double x) { return detail::bump_raw(x) / detail::bump_norm(); }

// ---------------------------------------------------------------------------

struct sieve_weights {
    double sqrt_d = 0;
    double z = 0;
    std::vector<u64> small_primes;              // primes < z
    std::vector<std::pair<u64, double>> rho;    // (d, rho_d), d sorted increasing

    double rho_of(u64 d) const {
        auto it = std::lower_bound(rho.begin(), rho.end(), d,
                                   [](const auto& e, u64 v) { return e.first < v; });
        return (it != rho.end() && it->first == d) ? it->second : 0.0;
    }
};

inline sieve_weights build_weights(double D, double z) {
    if (D < 4 || z < 2) throw std::invalid_argument("build_weights: D >= 4 and z >= 2 required");
    sieve_weights w;
    w.sqrt_d = std::sqrt(D);
    w.z = z;
    for (u64 p : sieve_primes(u64(z)))
        if (double(p) < z) w.small_primes.push_back(p);
    const double logsd = std::log(w.sqrt_d);
    // DFS over squarefree z-smooth d <= sqrt(D)
    std::vector<std::tuple<u64, std::size_t, int>> stack{{1, 0, 0}};
    while (!stack.empty()) {
        auto [d, next, nf] = stack.back();
        stack.pop_back();
        const double r = (nf % 2 ? -1.0 : 1.0) * std::pow(std::log(w.sqrt_d / double(d)) / logsd, 2);
        w.rho.emplace_back(d, r);
        if (w.rho.size() > (std::size_t(1) << 26))
            throw std::length_error("build_weights: weight table exceeds memory budget (2^26 entries)");
        for (std::size_t j = next; j < w.small_primes.size(); ++j) {
            const u64 p = w.small_primes[j];
            if (double(d) * double(p) > w.sqrt_d) break;
            stack.emplace_back(d * p, j + 1, nf + 1);
        }
    }
    std::sort(w.rho.begin(), w.rho.end());
    return w;
}

// sum_{d | (n, P(z))} rho_d for squarefree n; only the z-smooth part of n matters
inline double weight_sum(u64 n, const sieve_weights& w) {
    std::vector<u64> ps;  // z-smooth prime divisors of n
    u64 m = n;
    for (u64 p : w.small_primes) {
        if (m == 1) break;
        if (m % p == 0) {
            ps.push_back(p);
            m /= p;
            if (m % p == 0) throw std::invalid_argument("weight_sum: n must be squarefree");
        }
    }
    double s = 0;
    for (u64 mask = 0; mask < (u64(1) << ps.size()); ++mask) {
        u64 d = 1;
        for (std::size_t j = 0; j < ps.size(); ++j)
            if (mask >> j & 1) d *= ps[j];
        if (double(d) <= w.sqrt_d) s += w.rho_of(d);
    }
    return s;
}

// xi(n) = sum_{[d1,d2] = n} rho_{d1} rho_{d2}; |xi(d)| <= 3^{omega(d)} asserted
struct xi_convolution {
    std::map<u64, double> xi;
};

inline xi_convolution xi_convolve(const sieve_weights& w) {
    xi_convolution out;
    for (const auto& [d1, r1] : w.rho)
        for (const auto& [d2, r2] : w.rho) {
            const u64 g = std::gcd(d1, d2);
            out.xi[d1 / g * d2] += r1 * r2;
        }
    for (const auto& [d, v] : out.xi) {
        const double cap = std::pow(3.0, omega(d));
        if (std::abs(v) > cap * (1 + 1e-9))
            throw std::runtime_error("xi_convolve: |xi(d)| <= 3^omega(d) violated at d = " +
                                     std::to_string(d));
    }
    return out;
}

// ---------------------------------------------------------------------------
// empirical sieve sum

enum class sieve_weight_fn { two_omega, lambda_sq_two_omega };

struct sieve_sum_report {
    double X = 0, z = 0, D = 0;
    double theta = 0, tau = 0;
    double S = 0;
    double main_term = 0;          // SieveMainTerm(theta, tau) * X / log X
    double ratio = 0;              // S / main_term
};

// window factorization sieve over [X, 2X]: mu^2(n), omega(n)
namespace detail {

struct window_factors {
    std::vector<std::uint8_t> omega;
    std::vector<bool> squarefree;
    u64 lo;
};

inline window_factors factor_window(u64 lo, u64 hi) {
    window_factors wf;
    wf.lo = lo;
    const std::size_t size = hi - lo + 1;
    wf.omega.assign(size, 0);
    wf.squarefree.assign(size, true);
    std::vector<u64> rem(size);
    for (std::size_t i = 0; i < size; ++i) rem[i] = lo + i;
    for (u64 p : sieve_primes(u64(std::sqrt(double(hi))) + 1)) {
        for (u64 m = (lo + p - 1) / p * p; m <= hi; m += p) {
            const std::size_t i = m - lo;
            ++wf.omega[i];
            rem[i] /= p;
            int extra = 0;
            while (rem[i] % p == 0) rem[i] /= p, ++extra;
            if (extra) wf.squarefree[i] = false;
        }
    }
    for (std::size_t i = 0; i < size; ++i)
        if (rem[i] > 1) ++wf.omega[i];
    return wf;
}

}  // namespace detail

// Direct evaluation of S(X, z; h, rho). The sqrt(D) = X^theta convention is
// the desk-scale one; the asymptotic damping exp(-sqrt(log X)) empties the
// weight table at these X and is available behind `damping`.
inline sieve_sum_report empirical_sieve_sum(double X, double theta, double z_value,
                                            sieve_weight_fn h = sieve_weight_fn::two_omega,
                                            const hecke_source* src = nullptr,
                                            bool damping = false) {
    if (X > 1e8) throw std::invalid_argument("empirical_sieve_sum: desk scale X <= 1e8");
    if (h == sieve_weight_fn::lambda_sq_two_omega && !src)
        throw std::invalid_argument("empirical_sieve_sum: eigenvalue source required for |lambda|^2 weight");
    sieve_sum_report rep;
    rep.X = X;
    rep.theta = theta;
    double sqrt_d = std::pow(X, theta);
    if (damping) sqrt_d *= std::exp(-std::sqrt(std::log(X)));
    rep.D = sqrt_d * sqrt_d;
    rep.z = z_value;
    rep.tau = std::log(rep.D) / std::log(rep.z);
    if (sqrt_d < 1.0) throw std::invalid_argument("empirical_sieve_sum: sqrt(D) < 1, empty weights");
    const auto w = build_weights(rep.D, rep.z);

    const u64 lo = u64(X), hi = u64(2 * X);
    const auto wf = detail::factor_window(lo, hi);
    // weight_sum depends only on divisibility by the z-smooth d's; accumulate
    // (sum rho_d [d | n])^2 incrementally over the window
    std::vector<double> wsum(hi - lo + 1, 0.0);
    for (const auto& [d, r] : w.rho) {
        if (d == 1) {
            for (auto& v : wsum) v += r;
        } else {
            for (u64 m = (lo + d - 1) / d * d; m <= hi; m += d) wsum[m - lo] += r;
        }
    }
    double S = 0;
    for (u64 n = lo; n <= hi; ++n) {
        const std::size_t i = n - lo;
        if (!wf.squarefree[i]) continue;
        const double psi = bump_psi(double(n) / X);
        if (psi == 0) continue;
        double hn = std::pow(2.0, wf.omega[i]);
        if (h == sieve_weight_fn::lambda_sq_two_omega) {
            const double lam = src->lambda(n);
            hn *= lam * lam;
        }
        S += psi * hn * wsum[i] * wsum[i];
    }
    rep.S = S;
    rep.main_term = sieve_main_term(theta, rep.tau) * X / std::log(X);
    rep.ratio = rep.S / rep.main_term;
    return rep;
}

// convenience: the canonical z = sqrt(D) instantiation (tau = 2)
inline sieve_sum_report empirical_sieve_sum_tau2(double X, double theta = 0.25,
                                                 sieve_weight_fn h = sieve_weight_fn::two_omega,
                                                 const hecke_source* src = nullptr) {
    return empirical_sieve_sum(X, theta, std::pow(X, theta), h, src);
}

}  // namespace klsieve
