#pragma once

// Normalized Kloosterman sums Kl(a,c) = c^{-1/2} sum_{u mod c, (u,c)=1} e((au+u^{-1})/c),
// their angles, symmetric-power averages, and character Mellin transforms.
//
// Kl(a,c) is real: u <-> u^{-1} pairs conjugate terms. At prime modulus the
// Weil bound |Kl(a,p)| <= 2 defines the angle theta_p(a) via Kl = 2 cos theta.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "klsieve/arith.hpp"
#include "klsieve/fft.hpp"
#include "klsieve/parallel.hpp"

namespace klsieve {

inline constexpr double kl_imag_tolerance = 1e-9;   // on the raw sum, per sqrt(c)
inline constexpr double weil_slack = 1e-9;

struct kloosterman_value {
    double value = 0;
    u64 modulus = 1;
    i64 a = 0;
};

namespace detail {

// e(j/c) table; direct table lookups instead of angle accumulation.
// Only the lower half is evaluated, the rest is mirrored.
struct unit_circle_table {
    std::vector<double> c, s;
    explicit unit_circle_table(u64 n) : c(n), s(n) {
        for (u64 j = 0; j <= n / 2; ++j) {
            const double ang = 2 * std::numbers::pi * double(j) / double(n);
            c[j] = std::cos(ang);
            s[j] = std::sin(ang);
        }
        for (u64 j = n / 2 + 1; j < n; ++j) {
            c[j] = c[n - j];
            s[j] = -s[n - j];
        }
    }
};

}  // namespace detail

// direct O(c) summation; a may share factors with c (sum over units regardless)
inline double kl(i64 a, u64 c) {
    if (c == 0) throw std::invalid_argument("kl: modulus must be positive");
    if (c == 1) return 1.0;
    const u64 am = u64(((a % i64(c)) + i64(c)) % i64(c));
    detail::unit_circle_table tab(c);
    std::vector<u64> units;
    units.reserve(c);
    for (u64 u = 1; u < c; ++u)
        if (std::gcd(u, c) == 1) units.push_back(u);
    const auto inv = batch_inverse(units, c);
    double re = 0, im = 0;
    for (std::size_t i = 0; i < units.size(); ++i) {
        const u64 idx = (mul_mod(am, units[i], c) + inv[i]) % c;
        re += tab.c[idx];
        im += tab.s[idx];
    }
    const double root = std::sqrt(double(c));
    if (std::abs(im) > kl_imag_tolerance * root)
        throw std::runtime_error("kl: raw sum has non-negligible imaginary part");
    return re / root;
}

inline kloosterman_value kl_value(i64 a, u64 c) { return {kl(a, c), c, a}; }

// all Kl(a,p) for a = 0..p-1 at prime p, one length-p DFT of u -> e(u^{-1}/p)
inline std::vector<double> kl_vertical_table(u64 p) {
    if (p < 2) throw std::invalid_argument("kl_vertical_table: prime modulus required");
    const auto inv = prime_inverse_table(p);
    std::vector<fft::cd> x(p, fft::cd(0));
    for (u64 u = 1; u < p; ++u) {
        const double ang = 2 * std::numbers::pi * double(inv[u]) / double(p);
        x[u] = fft::cd(std::cos(ang), std::sin(ang));
    }
    auto X = fft::dft(x);  // X_k = sum_u x_u e(-ku/p), so Kl(a,p) ~ X_{-a}
    const double root = std::sqrt(double(p));
    std::vector<double> out(p);
    for (u64 a = 0; a < p; ++a) {
        const fft::cd v = X[a == 0 ? 0 : p - a];
        if (std::abs(v.imag()) > kl_imag_tolerance * root)
            throw std::runtime_error("kl_vertical_table: DFT output not real");
        out[a] = v.real() / root;
    }
    return out;
}

// angle in [0, pi] with Kl(a,p) = 2 cos theta; |Kl| beyond 2+eps signals a bug
inline double kl_angle_of(double kl_val, u64 p) {
    const double half = kl_val / 2;
    if (std::abs(half) > 1 + weil_slack)
        throw std::runtime_error("theta: |Kl(a," + std::to_string(p) + ")| exceeds Weil bound");
    return std::acos(std::clamp(half, -1.0, 1.0));
}

inline double theta(i64 a, u64 p) { return kl_angle_of(kl(a, p), p); }

// Omega(a,c) = Kl(abar^2, c); twisted-multiplicative in c
inline double omega_sum(i64 a, u64 c) {
    const u64 am = u64(((a % i64(c)) + i64(c)) % i64(c));
    if (c > 1 && std::gcd(am, c) != 1) throw not_invertible(am, c);
    const u64 abar = mod_inverse(am, c);
    return kl(i64(mul_mod(abar, abar, c)), c);
}

// sym_k(theta) = sin((k+1)theta)/sin(theta) = U_k(cos theta); the recurrence
// handles the theta -> 0, pi limits without a separate branch
inline double sym_k(double th, unsigned k) {
    const double x = std::cos(th);
    double prev = 1.0;            // U_0
    if (k == 0) return prev;
    double cur = 2 * x;           // U_1
    for (unsigned j = 2; j <= k; ++j) {
        const double nxt = 2 * x * cur - prev;
        prev = cur;
        cur = nxt;
    }
    return cur;
}

// sum_{a=1}^{p-1} sym_k(theta_p(a)); caller checks |result| <= (k+1) sqrt(p)/2
inline double katz_vertical_sum(const std::vector<double>& table, unsigned k) {
    const u64 p = table.size();
    double s = 0;
    for (u64 a = 1; a < p; ++a) s += sym_k(kl_angle_of(table[a], p), k);
    return s;
}

inline double katz_vertical_sum(u64 p, unsigned k) {
    return katz_vertical_sum(kl_vertical_table(p), k);
}

inline double katz_bound(u64 p, unsigned k) { return 0.5 * (k + 1) * std::sqrt(double(p)); }

struct kl_row {
    u64 p;
    double kl;
    double theta;
};

struct kloosterman_table {
    i64 a = 1;
    std::vector<kl_row> rows;

    // header `p,a,kl,theta`, 15 significant digits
    void write_csv(std::ostream& os) const {
        os << "p,a,kl,theta\n";
        char buf[128];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%llu,%lld,%.15g,%.15g\n",
                          (unsigned long long)r.p, (long long)a, r.kl, r.theta);
            os << buf;
        }
    }
};

// per-modulus values share no state; assembled in modulus order
inline kloosterman_table kl_batch(const std::vector<u64>& primes, i64 a, unsigned workers = 0) {
    kloosterman_table t;
    t.a = a;
    t.rows.resize(primes.size());
    parallel_chunks(0, primes.size(), [&](unsigned, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = kl(a, primes[i]);
            t.rows[i] = {primes[i], v, kl_angle_of(v, primes[i])};
        }
    }, workers);
    return t;
}

// ---------------------------------------------------------------------------
// Dirichlet characters mod squarefree q, as products of prime components.
// Each component is indexed against a primitive root: chi(g^j) = e(e j/(p-1)).

inline u64 primitive_root(u64 p) {
    if (p == 2) return 1;
    const u64 phi = p - 1;
    auto fac = factorize(phi);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (auto [q, e] : fac.factors)
            if (pow_mod(g, phi / q, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::runtime_error("primitive_root: none found (modulus not prime?)");
}

class dirichlet_character {
public:
    // index[j] in [0, p_j - 2] selects the character of the j-th prime factor
    dirichlet_character(u64 q, std::vector<u64> index) : q_(factorize(q)), index_(std::move(index)) {
        if (!q_.squarefree()) throw std::invalid_argument("dirichlet_character: modulus must be squarefree");
        if (index_.size() != q_.factors.size())
            throw std::invalid_argument("dirichlet_character: one index per prime factor");
        for (std::size_t j = 0; j < index_.size(); ++j) {
            const u64 p = q_.factors[j].first;
            dlog_.push_back(discrete_log_table(p));
            index_[j] %= (p == 2 ? 1 : p - 1);
        }
    }

    static dirichlet_character trivial(u64 q) {
        return dirichlet_character(q, std::vector<u64>(factorize(q).factors.size(), 0));
    }

    u64 modulus() const { return q_.value; }
    bool is_trivial() const {
        return std::all_of(index_.begin(), index_.end(), [](u64 e) { return e == 0; });
    }

    std::complex<double> operator()(u64 n) const {
        n %= q_.value;
        if (q_.value > 1 && std::gcd(n, q_.value) != 1) return {0, 0};
        double ang = 0;
        for (std::size_t j = 0; j < q_.factors.size(); ++j) {
            const u64 p = q_.factors[j].first;
            if (p == 2) continue;  // only the trivial character mod 2
            const u64 lg = dlog_[j][n % p];
            ang += 2 * std::numbers::pi * double(mul_mod(index_[j], lg, p - 1)) / double(p - 1);
        }
        return {std::cos(ang), std::sin(ang)};
    }

private:
    static std::vector<u64> discrete_log_table(u64 p) {
        std::vector<u64> lg(p, 0);
        const u64 g = primitive_root(p);
        u64 acc = 1;
        for (u64 j = 0; j + 1 < p; ++j) {
            lg[acc] = j;
            acc = mul_mod(acc, g, p);
        }
        return lg;
    }

    struct modulus q_;
    std::vector<u64> index_;
    std::vector<std::vector<u64>> dlog_;
};

// |Omega(r, q)| for all units r mod squarefree q, via twisted multiplicativity
// Omega(a, q) = prod_{p | q} Omega(a q/p, p) and one vertical table per factor.
inline std::vector<double> abs_omega_table(u64 q) {
    const auto fac = factorize(q);
    if (!fac.squarefree()) throw std::invalid_argument("abs_omega_table: modulus must be squarefree");
    std::vector<double> out(q, 0.0);
    if (q == 1) { out[0] = 1.0; return out; }
    std::vector<std::vector<double>> tables;
    std::vector<std::vector<u64>> invs;
    for (auto [p, e] : fac.factors) {
        tables.push_back(kl_vertical_table(p));
        invs.push_back(prime_inverse_table(p));
    }
    for (u64 r = 1; r < q; ++r) {
        if (std::gcd(r, q) != 1) continue;
        double prod = 1;
        for (std::size_t j = 0; j < fac.factors.size(); ++j) {
            const u64 p = fac.factors[j].first;
            const u64 arg = mul_mod(r % p, (q / p) % p, p);
            const u64 abar = invs[j][arg];
            prod *= tables[j][mul_mod(abar, abar, p)];
        }
        out[r] = std::abs(prod);
    }
    return out;
}

// Mellin transform of |Omega|: (1/sqrt q) sum*_r conj(chi(r)) |Omega(r,q)|
inline std::complex<double> mellin_transform(const dirichlet_character& chi) {
    const u64 q = chi.modulus();
    const auto abs_om = abs_omega_table(q);
    std::complex<double> s{0, 0};
    if (q == 1) return {1, 0};
    for (u64 r = 1; r < q; ++r) {
        if (std::gcd(r, q) != 1) continue;
        s += std::conj(chi(r)) * abs_om[r];
    }
    return s / std::sqrt(double(q));
}

inline constexpr double mellin_prime_constant = 8.0 / (3.0 * std::numbers::pi);

}  // namespace klsieve
