#pragma once

// Desk-scale empirical studies: products of primes from prescribed windows,
// correlation averages |lambda(n)| |Omega(p_1, n/p_1)| against their envelope,
// sign censuses of lambda(n) - eta Kl(1,n), and vertical angle histograms.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "klsieve/arith.hpp"
#include "klsieve/hecke.hpp"
#include "klsieve/kloosterman.hpp"
#include "klsieve/parallel.hpp"

namespace klsieve {

struct experiment_config {
    double X = 1e6;
    std::vector<double> alpha;  // (alpha_2, ..., alpha_i); i = alpha.size() + 1
    u64 seed = 1;
    std::size_t max_products = 200000;  // sampling cap for i >= 4
};

struct prime_window {
    double P = 0;  // window is ]P, P + P/log X]
    std::vector<u64> primes;
};

struct product_set {
    int i = 2;
    std::vector<prime_window> windows;
    std::vector<std::vector<u64>> tuples;  // factor tuples (p_1, ..., p_i)
    bool sampled = false;
};

namespace detail {

inline std::vector<u64> primes_in(double lo, double hi) {
    std::vector<u64> out;
    if (hi < 2) return out;
    for (u64 p : sieve_primes(u64(hi)))
        if (double(p) > lo && double(p) <= hi) out.push_back(p);
    return out;
}

}  // namespace detail

// windows I(P_j) with P_1 = X^{1 - sum alpha}, P_j = X^{alpha_j}; the window
// ordering must match the exponent ordering, descending
inline product_set enumerate_products(const experiment_config& cfg) {
    const int i = int(cfg.alpha.size()) + 1;
    if (i < 2) throw std::invalid_argument("enumerate_products: need at least alpha_2");
    const double L = std::log(cfg.X);
    double sum = 0;
    for (double a : cfg.alpha) sum += a;
    std::vector<double> exps{1.0 - sum};
    exps.insert(exps.end(), cfg.alpha.begin(), cfg.alpha.end());
    for (std::size_t j = 0; j + 1 < exps.size(); ++j)
        if (!(exps[j] > exps[j + 1]))
            throw std::invalid_argument("enumerate_products: window exponents must decrease");
    product_set ps;
    ps.i = i;
    for (double e : exps) {
        prime_window w;
        w.P = std::pow(cfg.X, e);
        w.primes = detail::primes_in(w.P, w.P * (1 + 1.0 / L));
        ps.windows.push_back(std::move(w));
    }
    for (std::size_t j = 0; j + 1 < ps.windows.size(); ++j)
        if (ps.windows[j + 1].P * (1 + 1.0 / L) >= ps.windows[j].P)
            throw std::invalid_argument("enumerate_products: windows overlap");
    // exhaustive tuple enumeration with a declared sampling cap
    std::vector<u64> cur(static_cast<std::size_t>(i), 0);
    std::mt19937_64 rng(cfg.seed);
    std::uint64_t total = 1;
    for (const auto& w : ps.windows) {
        if (w.primes.empty()) return ps;  // empty window: reported by caller via count 0
        total *= w.primes.size();
    }
    const bool sample = total > cfg.max_products;
    ps.sampled = sample;
    if (sample) {
        for (std::size_t t = 0; t < cfg.max_products; ++t) {
            for (int j = 0; j < i; ++j) {
                const auto& pr = ps.windows[std::size_t(j)].primes;
                cur[std::size_t(j)] = pr[rng() % pr.size()];
            }
            ps.tuples.push_back(cur);
        }
    } else {
        std::vector<std::size_t> idx(std::size_t(i), 0);
        while (true) {
            for (int j = 0; j < i; ++j) cur[std::size_t(j)] = ps.windows[std::size_t(j)].primes[idx[std::size_t(j)]];
            ps.tuples.push_back(cur);
            int j = i - 1;
            while (j >= 0 && ++idx[std::size_t(j)] == ps.windows[std::size_t(j)].primes.size()) {
                idx[std::size_t(j)] = 0;
                --j;
            }
            if (j < 0) break;
        }
    }
    return ps;
}

struct correlation_report {
    int i = 0;
    std::uint64_t count = 0;
    double c_star = 0;    // mean of |lambda(n)| |Omega(p_1, n/p_1)|
    double envelope = 0;  // (8/3pi)^{i-1} (11/12)^i
    double std_error = 0;
    bool sampled = false;
};

// src == nullptr degenerates lambda to 1, isolating the Kloosterman factor
inline correlation_report correlation_cstar(const product_set& ps, const hecke_source* src) {
    if (ps.i < 2 || ps.i > 3)
        throw std::invalid_argument("correlation_cstar: exhaustive case i in {2,3}");
    correlation_report rep;
    rep.i = ps.i;
    rep.sampled = ps.sampled;
    rep.envelope = std::pow(8.0 / (3 * std::numbers::pi), ps.i - 1) * std::pow(11.0 / 12.0, ps.i);
    if (ps.tuples.empty()) return rep;
    std::vector<double> vals(ps.tuples.size());
    parallel_chunks(0, ps.tuples.size(), [&](unsigned, std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            const auto& tu = ps.tuples[t];
            const u64 p1 = tu[0];
            u64 rest = 1;
            for (std::size_t j = 1; j < tu.size(); ++j) rest *= tu[j];
            double lam = 1.0;
            if (src) {
                for (u64 p : tu) lam *= src->lambda_p(p);
            }
            vals[t] = std::abs(lam) * std::abs(omega_sum(i64(p1 % rest), rest));
        }
    });
    double s = 0, s2 = 0;
    for (double v : vals) s += v, s2 += v * v;
    const double n = double(vals.size());
    rep.count = vals.size();
    rep.c_star = s / n;
    rep.std_error = std::sqrt(std::max(0.0, s2 / n - rep.c_star * rep.c_star) / n);
    return rep;
}

// ---------------------------------------------------------------------------

struct census_report {
    std::uint64_t above = 0;  // lambda(n) > eta Kl(1,n)
    std::uint64_t below = 0;
    std::uint64_t total_squarefree = 0;
    bool sampled = false;
};

// squarefree n in [X, 2X] with omega(n) <= r_limit; exhaustive when the
// window is small, otherwise seeded uniform sampling (the Kl(1,n) factor
// costs O(largest prime factor) per n, so large X must sample)
inline census_report sign_census(u64 X, int r_limit, const hecke_source& src, double eta = 1.0,
                                 u64 seed = 1, u64 max_visits = 20000) {
    if (X > 10000000) throw std::invalid_argument("sign_census: X <= 1e7");
    census_report rep;
    const u64 lo = X, hi = 2 * X;
    std::mt19937_64 rng(seed);
    rep.sampled = (hi - lo + 1) > max_visits;
    auto visit = [&](u64 n) {
        const auto fac = factorize(n);
        if (!fac.squarefree()) return;
        ++rep.total_squarefree;
        if (fac.omega() > r_limit) return;
        // Kl(1, n) via the factor product; each factor is a prime-modulus sum
        double klv = 1.0;
        for (auto [p, e] : fac.factors) {
            const u64 q = n / p;
            const u64 abar = mod_inverse(q % p, p);
            klv *= kl(i64(mul_mod(abar, abar, p)), p);
        }
        const double lam = src.lambda(n);
        if (lam > eta * klv) ++rep.above;
        if (lam < eta * klv) ++rep.below;
    };
    if (rep.sampled) {
        for (u64 t = 0; t < max_visits; ++t) visit(lo + rng() % (hi - lo + 1));
    } else {
        for (u64 n = lo; n <= hi; ++n) visit(n);
    }
    return rep;
}

// ---------------------------------------------------------------------------

struct angle_histogram {
    std::vector<double> bin_lo, bin_hi;
    std::vector<std::uint64_t> count;
    std::vector<double> st_density;  // (2/pi) sin^2 at bin midpoint
    double ks_statistic = 0;
    u64 p = 0;

    void write_csv(std::ostream& os) const {
        os << "bin_lo,bin_hi,count,st_density\n";
        char buf[128];
        for (std::size_t b = 0; b < count.size(); ++b) {
            std::snprintf(buf, sizeof buf, "%.15g,%.15g,%llu,%.15g\n", bin_lo[b], bin_hi[b],
                          (unsigned long long)count[b], st_density[b]);
            os << buf;
        }
    }
};

// histogram of {theta_p(a) : a in F_p^*} against the semicircle-type density,
// with the Kolmogorov-Smirnov distance to its CDF
inline angle_histogram vertical_angle_histogram(u64 p, int bins = 64) {
    const auto table = kl_vertical_table(p);
    angle_histogram h;
    h.p = p;
    h.bin_lo.resize(std::size_t(bins));
    h.bin_hi.resize(std::size_t(bins));
    h.count.assign(std::size_t(bins), 0);
    h.st_density.resize(std::size_t(bins));
    std::vector<double> angles;
    angles.reserve(p - 1);
    for (u64 a = 1; a < p; ++a) angles.push_back(kl_angle_of(table[a], p));
    for (int b = 0; b < bins; ++b) {
        h.bin_lo[std::size_t(b)] = std::numbers::pi * b / bins;
        h.bin_hi[std::size_t(b)] = std::numbers::pi * (b + 1) / bins;
        const double mid = 0.5 * (h.bin_lo[std::size_t(b)] + h.bin_hi[std::size_t(b)]);
        h.st_density[std::size_t(b)] = 2.0 / std::numbers::pi * std::sin(mid) * std::sin(mid);
    }
    for (double t : angles) {
        int b = std::min(bins - 1, int(t / std::numbers::pi * bins));
        ++h.count[std::size_t(b)];
    }
    std::sort(angles.begin(), angles.end());
    const double n = double(angles.size());
    auto st_cdf = [](double t) {
        return (t - std::sin(t) * std::cos(t)) / std::numbers::pi;
    };
    double ks = 0;
    for (std::size_t j = 0; j < angles.size(); ++j) {
        const double F = st_cdf(angles[j]);
        ks = std::max(ks, std::max(std::abs(F - double(j) / n), std::abs(F - double(j + 1) / n)));
    }
    h.ks_statistic = ks;
    return h;
}

}  // namespace klsieve
