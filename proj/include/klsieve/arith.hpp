#pragma once

// Exact integer and modular arithmetic for exponential-sum work.
// Moduli are word-sized (< 2^62); products go through 128-bit intermediates.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace klsieve {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr u64 max_modulus = u64(1) << 62;

struct not_invertible : std::domain_error {
    explicit not_invertible(u64 a, u64 m)
        : std::domain_error("not invertible: " + std::to_string(a) + " mod " + std::to_string(m)) {}
};

inline u64 mul_mod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

inline u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

// primes in [2, limit], plain Eratosthenes
inline std::vector<u64> sieve_primes(u64 limit) {
    if (limit >= (u64(1) << 34))
        throw std::length_error("sieve_primes: limit too large for in-memory sieve");
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (u64 p = 2; p * p <= limit; ++p)
        if (!composite[p])
            for (u64 q = p * p; q <= limit; q += p) composite[q] = true;
    for (u64 p = 2; p <= limit; ++p)
        if (!composite[p]) primes.push_back(p);
    return primes;
}

// canonical factorization, primes strictly increasing
struct modulus {
    u64 value = 1;
    std::vector<std::pair<u64, int>> factors;

    int omega() const { return int(factors.size()); }

    bool squarefree() const {
        return std::all_of(factors.begin(), factors.end(), [](auto f) { return f.second == 1; });
    }

    int mobius() const {
        if (!squarefree()) return 0;
        return (factors.size() % 2 == 0) ? 1 : -1;
    }

    u64 phi() const {
        u64 r = value;
        for (auto [p, e] : factors) r = r / p * (p - 1);
        return r;
    }

    u64 tau() const {
        u64 r = 1;
        for (auto [p, e] : factors) r *= u64(e) + 1;
        return r;
    }
};

inline modulus factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    if (n >= max_modulus) throw std::overflow_error("factorize: n exceeds word-size budget");
    modulus m;
    m.value = n;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) n /= p, ++e;
        m.factors.emplace_back(p, e);
    }
    if (n > 1) m.factors.emplace_back(n, 1);
    return m;
}

// trial division against a precomputed prime list (faster in bulk)
inline modulus factorize(u64 n, const std::vector<u64>& primes) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    modulus m;
    m.value = n;
    for (u64 p : primes) {
        if (p * p > n) break;
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) n /= p, ++e;
        m.factors.emplace_back(p, e);
    }
    if (n > 1) m.factors.emplace_back(n, 1);
    return m;
}

inline int mobius(u64 n) { return factorize(n).mobius(); }
inline int omega(u64 n) { return factorize(n).omega(); }
inline u64 euler_phi(u64 n) { return factorize(n).phi(); }
inline u64 divisor_count(u64 n) { return factorize(n).tau(); }
inline bool is_squarefree(u64 n) { return factorize(n).squarefree(); }

// extended gcd on signed 128-bit to stay exact for 62-bit moduli
inline u64 mod_inverse(u64 a, u64 m) {
    if (m == 1) return 0;
    a %= m;
    i64 t = 0, new_t = 1;
    i64 r = i64(m), new_r = i64(a);
    while (new_r != 0) {
        i64 q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) throw not_invertible(a, m);
    return t < 0 ? u64(t + i64(m)) : u64(t);
}

// unique x mod m1*m2 with x = r1 (m1), x = r2 (m2); gcd(m1,m2) must be 1
inline std::pair<u64, u64> crt_combine(u64 r1, u64 m1, u64 r2, u64 m2) {
    if (std::gcd(m1, m2) != 1) throw std::invalid_argument("crt_combine: moduli not coprime");
    u64 m = m1 * m2;
    u64 inv = mod_inverse(m1 % m2, m2);
    u64 k = mul_mod((r2 + m2 - r1 % m2) % m2, inv, m2);
    return {(r1 + u64(u128(k) * m1 % m)) % m, m};
}

// Montgomery product trick: invert a whole batch with one gcd inversion.
// All entries must be units mod m.
inline std::vector<u64> batch_inverse(const std::vector<u64>& units, u64 m) {
    std::vector<u64> pre(units.size());
    u64 acc = 1;
    for (std::size_t i = 0; i < units.size(); ++i) {
        pre[i] = acc;
        acc = mul_mod(acc, units[i], m);
    }
    u64 inv_acc = mod_inverse(acc, m);
    std::vector<u64> out(units.size());
    for (std::size_t i = units.size(); i-- > 0;) {
        out[i] = mul_mod(inv_acc, pre[i], m);
        inv_acc = mul_mod(inv_acc, units[i], m);
    }
    return out;
}

// inverses of 1..p-1 for prime p, linear recurrence
inline std::vector<u64> prime_inverse_table(u64 p) {
    std::vector<u64> inv(p, 0);
    if (p >= 2) inv[1] = 1;
    for (u64 u = 2; u < p; ++u) inv[u] = mul_mod(p - p / u, inv[p % u], p);
    return inv;
}

}  // namespace klsieve
