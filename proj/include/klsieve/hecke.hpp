#pragma once

// Pluggable sources of normalized Hecke eigenvalues lambda(n), with the
// multiplicative extension lambda(p^{k+1}) = lambda(p) lambda(p^k) - lambda(p^{k-1})
// and lambda(mn) = lambda(m) lambda(n) for coprime m, n.
//
// Built-in stand-ins:
//   * Ramanujan tau normalized by n^{11/2}, tau computed exactly by the
//     eta-product (cube of the sparse Jacobi series, raised to the 8th power)
//   * a seeded sampler drawing lambda(p) = 2 cos(theta) with theta from the
//     semicircle-type measure (2/pi) sin^2(theta) dtheta

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "klsieve/arith.hpp"

namespace klsieve {

struct missing_coefficient : std::runtime_error {
    u64 prime;
    explicit missing_coefficient(u64 p)
        : std::runtime_error("no eigenvalue datum for prime " + std::to_string(p)), prime(p) {}
};

struct parse_error : std::runtime_error {
    std::size_t line;
    parse_error(std::size_t ln, const std::string& what)
        : std::runtime_error("line " + std::to_string(ln) + ": " + what), line(ln) {}
};

namespace detail {

using i128 = __int128;

// tau(n) for n <= limit; exact integer arithmetic (fits i128 for limit <~ 1e6)
inline std::vector<i128> ramanujan_tau_table(u64 limit) {
    const std::size_t n = limit;
    // eta^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}
    std::vector<std::pair<std::size_t, i128>> cube;
    for (u64 k = 0;; ++k) {
        const u64 idx = k * (k + 1) / 2;
        if (idx >= n) break;
        cube.emplace_back(idx, (k % 2 ? -i128(2 * k + 1) : i128(2 * k + 1)));
    }
    std::vector<i128> r(n, 0);
    for (auto [idx, c] : cube) r[idx] = c;
    for (int pass = 1; pass < 8; ++pass) {
        std::vector<i128> nxt(n, 0);
        for (auto [idx, c] : cube)
            for (std::size_t j = idx; j < n; ++j) nxt[j] += c * r[j - idx];
        r.swap(nxt);
    }
    std::vector<i128> tau(limit + 1, 0);
    for (std::size_t j = 0; j + 1 <= limit; ++j) tau[j + 1] = r[j];
    return tau;
}

inline double i128_to_double(i128 v) {
    return double((long double)(v));
}

// inverse CDF of (2/pi) sin^2(theta) dtheta on [0, pi]
inline double semicircle_angle(double u) {
    double lo = 0, hi = std::numbers::pi;
    for (int i = 0; i < 64; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double cdf = (mid - std::sin(mid) * std::cos(mid)) / std::numbers::pi;
        (cdf < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace detail

class hecke_source {
public:
    enum class kind { file_backed, ramanujan_tau, sato_tate };

    static hecke_source ramanujan(u64 limit = 100000) {
        hecke_source s(kind::ramanujan_tau);
        s.limit_ = limit;
        const auto tau = detail::ramanujan_tau_table(limit);
        s.table_.resize(limit + 1, 0.0);
        for (u64 n = 1; n <= limit; ++n)
            s.table_[n] = detail::i128_to_double(tau[n]) / std::pow((long double)n, 5.5L);
        return s;
    }

    static hecke_source sato_tate(u64 seed) {
        hecke_source s(kind::sato_tate);
        s.seed_ = seed;
        return s;
    }

    // rows `n,lambda`, `#` comments, n strictly increasing from 1, lambda(1) = 1
    static hecke_source from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        return from_stream(in);
    }

    static hecke_source from_stream(std::istream& in) {
        hecke_source s(kind::file_backed);
        std::string line;
        std::size_t ln = 0;
        u64 prev_n = 0;
        while (std::getline(in, line)) {
            ++ln;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            std::istringstream row(line);
            u64 n = 0;
            char comma = 0;
            double lam = 0;
            if (!(row >> n >> comma >> lam) || comma != ',')
                throw parse_error(ln, "expected `n,lambda`");
            if (n <= prev_n) throw parse_error(ln, n == prev_n ? "duplicate n" : "n not increasing");
            if (prev_n == 0 && n != 1) throw parse_error(ln, "first row must be n=1");
            if (n == 1 && lam != 1.0) throw parse_error(ln, "lambda(1) must be 1");
            if (n >= s.stored_.size()) s.stored_.resize(std::size_t(n) + 1, std::nullopt);
            s.stored_[std::size_t(n)] = lam;
            prev_n = n;
        }
        if (prev_n == 0) throw parse_error(0, "empty coefficient file");
        s.limit_ = prev_n;
        return s;
    }

    kind source_kind() const { return kind_; }
    u64 limit() const { return limit_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    double lambda_p(u64 p) const {
        switch (kind_) {
            case kind::ramanujan_tau:
                if (p >= table_.size()) throw missing_coefficient(p);
                return table_[p];
            case kind::sato_tate: {
                const double u =
                    (double(detail::mix64(seed_ ^ detail::mix64(p))) + 0.5) * 0x1p-64;
                return 2 * std::cos(detail::semicircle_angle(u));
            }
            case kind::file_backed:
                if (p < stored_.size() && stored_[p]) return *stored_[p];
                throw missing_coefficient(p);
        }
        throw std::logic_error("unreachable");
    }

    // lambda(n) via the Hecke recursion and multiplicativity; file-backed
    // stored values take precedence, a >1e-9 disagreement is recorded
    double lambda(u64 n) const {
        if (n == 0) throw std::invalid_argument("lambda: n must be positive");
        if (n == 1) return 1.0;
        if (kind_ == kind::ramanujan_tau && n < table_.size()) return table_[n];
        if (kind_ == kind::file_backed && n < stored_.size() && stored_[n]) {
            const double stored = *stored_[n];
            if (n > 1) {
                const auto fac = factorize(n);
                if (fac.factors.size() > 1 || fac.factors[0].second > 1) {
                    bool derivable = true;
                    double derived = 1.0;
                    try {
                        derived = lambda_from_factors(fac);
                    } catch (const missing_coefficient&) {
                        derivable = false;
                    }
                    if (derivable && std::abs(derived - stored) > 1e-9)
                        warnings_.push_back("lambda(" + std::to_string(n) +
                                            "): stored value differs from Hecke recursion by " +
                                            std::to_string(std::abs(derived - stored)));
                }
            }
            return stored;
        }
        return lambda_from_factors(factorize(n));
    }

    double operator()(u64 n) const { return lambda(n); }

private:
    explicit hecke_source(kind k) : kind_(k) {}

    double lambda_from_factors(const modulus& fac) const {
        double out = 1.0;
        for (auto [p, e] : fac.factors) {
            const double lp = lambda_p(p);
            double prev = 1.0, cur = lp;  // lambda(p^0), lambda(p^1)
            for (int j = 2; j <= e; ++j) {
                const double nxt = lp * cur - prev;
                prev = cur;
                cur = nxt;
            }
            out *= cur;
        }
        return out;
    }

    kind kind_;
    u64 limit_ = 0;
    u64 seed_ = 0;
    std::vector<double> table_;                       // ramanujan: lambda(n) by index
    std::vector<std::optional<double>> stored_;       // file-backed rows
    mutable std::vector<std::string> warnings_;
};

// kappa-th absolute moment over primes
struct moment_report {
    unsigned kappa = 0;
    double X = 0;
    double value = 0;                   // pi_kappa(X) * log X / X
    double per_prime = 0;               // pi_kappa(X) / pi(X): the Sato-Tate mean at desk scale
    std::optional<double> target;       // reference constant, when known
    bool target_is_upper_bound = false;
};

inline std::optional<double> moment_constant(unsigned kappa) {
    switch (kappa) {
        case 0: return 1.0;
        case 1: return 11.0 / 12.0;
        case 2: return 1.0;
        case 3: return std::sqrt(5.0);
        case 4: return 2.0;
        case 6: return 5.0;
        default: return std::nullopt;  // kappa = 5 has no published constant
    }
}

inline moment_report moments(const hecke_source& src, double X, unsigned kappa,
                             const std::vector<u64>* primes_hint = nullptr) {
    if (X < 100) throw std::invalid_argument("moments: X >= 100 required");
    if (kappa > 6) throw std::invalid_argument("moments: kappa in 0..6");
    std::vector<u64> local;
    const std::vector<u64>* primes = primes_hint;
    if (!primes) {
        local = sieve_primes(u64(X));
        primes = &local;
    }
    double s = 0;
    std::size_t count = 0;
    for (u64 p : *primes) {
        if (double(p) > X) break;
        s += std::pow(std::abs(src.lambda_p(p)), double(kappa));
        ++count;
    }
    moment_report r;
    r.kappa = kappa;
    r.X = X;
    r.value = s * std::log(X) / X;
    r.per_prime = count ? s / double(count) : 0.0;
    r.target = moment_constant(kappa);
    r.target_is_upper_bound = (kappa == 1 || kappa == 3);
    return r;
}

// |y| <= (13 + 29 y^2 - 7 y^4 + y^6)/36 on the Weil range; returns max violation
inline double holowinsky_max_violation(const std::vector<double>& grid) {
    double worst = -1e300;
    for (double y : grid) {
        const double y2 = y * y;
        const double rhs = (13 + y2 * (29 + y2 * (-7 + y2))) / 36.0;
        worst = std::max(worst, std::abs(y) - rhs);
    }
    return worst;
}

inline double holowinsky_max_violation(int n_points = 4001) {
    std::vector<double> g(n_points);
    for (int i = 0; i < n_points; ++i) g[i] = -2.0 + 4.0 * i / (n_points - 1);
    return holowinsky_max_violation(g);
}

}  // namespace klsieve
