#include "klsieve/sieve_fn.hpp"
#include "klsieve/solver.hpp"

#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

using namespace klsieve;

TEST_CASE("continued fraction expansion", "[solver]") {
    CHECK(cf_expand({14, 13}).quotients == std::vector<i64>{1, 13});
    CHECK(cf_expand({2, 1}).quotients == std::vector<i64>{2});
    CHECK(cf_expand({3, 2}).quotients == std::vector<i64>{1, 2});
    CHECK_THROWS(cf_expand({0, 1}));
}

TEST_CASE("continued fraction round trip", "[solver]") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 10000; ++t) {
        const i64 num = 1 + i64(rng() % 1000000);
        const i64 den = 1 + i64(rng() % 1000000);
        const rational r{num, den};
        const auto cf = cf_expand(r);
        // canonical form: inner quotients positive, last >= 2 unless length 1
        for (std::size_t j = 1; j < cf.quotients.size(); ++j) REQUIRE(cf.quotients[j] >= 1);
        if (cf.quotients.size() > 1) REQUIRE(cf.quotients.back() >= 2);
        // rebuild bottom-up in exact arithmetic
        rational acc{cf.quotients.back(), 1};
        for (std::size_t j = cf.quotients.size() - 1; j-- > 0;)
            acc = rational{cf.quotients[j] * acc.num + acc.den, acc.num};
        REQUIRE(acc == r);
    }
}

TEST_CASE("continued fraction factor", "[solver]") {
    CHECK(cf_factor({5, 1}) == rational{1, 6});
    CHECK(cf_factor({14, 13}) == rational{1, 15});
    CHECK(cf_factor({3, 2}) == rational{1, 4});
}

TEST_CASE("truncated divisor sum", "[solver]") {
    CHECK(tau_delta(1, {14, 13}, 0.7, 0.8) == 1.0);
    // 6^{1/(1+8/5)} = 6^{5/13} < 2, so only d = 1 passes
    CHECK(tau_delta(6, {8, 5}, 0.7, 0.8) == Catch::Approx(0.8 * 0.8).margin(1e-15));
    CHECK_THROWS(tau_delta(12, {14, 13}, 0.7, 0.8));  // not squarefree
    CHECK_THROWS_AS(tau_delta(6, {1, 2}, 0.7, 0.8), invalid_params);
}

TEST_CASE("divisor threshold is exact at boundaries", "[solver]") {
    // d <= n^{1/(1+Delta)} with Delta = 1 would mean d^2 <= n; Delta slightly
    // above 1 must exclude d = 4 for n = 16 (4^{p+q} <= 16^q iff 2(p+q) <= 4q
    // iff p <= q). Check with p/q = 21/20: 4^{41} > 16^{20}.
    const rational d{21, 20};
    CHECK(detail::below_threshold(3, 16, d));
    CHECK_FALSE(detail::below_threshold(4, 16, d));
}

TEST_CASE("product lower bound against divisor enumeration", "[solver]") {
    const auto ref = reference_choice();
    for (int j = 1; j <= 8; ++j) {
        u64 n = 1;
        const u64 ps[] = {2, 3, 5, 7, 11, 13, 17, 19};
        for (int t = 0; t < j; ++t) n *= ps[t];
        const double brute = tau_delta(n, ref.delta, ref.alpha, ref.beta);
        pipeline_params p = ref;
        const double bound = tau_delta_lower_bound(p, unsigned(j));
        REQUIRE(brute >= bound - 1e-12 * brute);
    }
}

TEST_CASE("truncated sums dominate the factor bound for all squarefree n <= 1e5",
          "[solver][slow]") {
    // g(d) = (1/t)^{omega(d)}: sum_{d | n, d <= n^{1/(1+t)}} g(d) >= A(t) sum_{d|n} g(d)
    const std::vector<rational> ts{{1, 1}, {2, 1}, {14, 13}, {3, 2}};
    const auto primes = sieve_primes(100000);
    for (u64 n = 2; n <= 100000; n += 1) {
        const auto fac = factorize(n, primes);
        if (!fac.squarefree()) continue;
        const int k = fac.omega();
        for (const auto& t : ts) {
            const double g = t.den / double(t.num);  // g(p) = 1/t
            double truncated = 0, full = 0;
            for (u64 mask = 0; mask < (u64(1) << k); ++mask) {
                u64 d = 1;
                int w = 0;
                for (int b = 0; b < k; ++b)
                    if (mask >> b & 1) d *= fac.factors[std::size_t(b)].first, ++w;
                const double gd = std::pow(g, w);
                full += gd;
                // d <= n^{1/(1+t)} exactly
                const unsigned le = unsigned(t.num + t.den), re = unsigned(t.den);
                if (boost::multiprecision::pow(detail::big(d), le) <=
                    boost::multiprecision::pow(detail::big(n), re))
                    truncated += gd;
            }
            const double factor = cf_factor(t).to_double();
            REQUIRE(truncated >= factor * full - 1e-9);
        }
    }
}

TEST_CASE("solve_r reproduces the reference endgame", "[solver]") {
    const double A1 = 3.687e-11, A2 = 334.59;
    const auto ref = reference_choice(1.0);
    const auto res = solve_r(1.0, A1, A2, ref.delta, ref.alpha, ref.beta);
    CHECK(res.rho == Catch::Approx(9.076e12).epsilon(0.005));
    CHECK(res.r == 100);
    // alpha + beta matches the closed-form 81 pi / (52 + 42 pi)
    CHECK(ref.alpha + ref.beta ==
          Catch::Approx(81 * std::numbers::pi / (52 + 42 * std::numbers::pi)).margin(1e-12));
}

TEST_CASE("lower bound closed forms", "[solver]") {
    pipeline_params ref = reference_choice();
    CHECK(tau_delta_lower_bound(ref, 0) == Catch::Approx(1.0 / 15).margin(1e-15));
    const double ab = 81 * std::numbers::pi / (52 + 42 * std::numbers::pi);
    CHECK(tau_delta_lower_bound(ref, 100) ==
          Catch::Approx(std::pow(ab, 100) / 15).epsilon(1e-10));
}

TEST_CASE("optimizer at eta = 0", "[solver]") {
    // sign-change regime: the signal bound is large, so few factors suffice
    const double A1 = 0.7537, A2 = background_upper_bound(0.0);
    const auto res = optimize_params(0.0, A1, A2);
    CHECK(res.r <= 25);
}

TEST_CASE("solve_r monotone in rho", "[solver]") {
    const auto ref = reference_choice();
    int prev = -1;
    for (double rho = 10; rho < 1e14; rho *= 3) {
        const int r = max_omega_below(rho, ref.delta, ref.alpha, ref.beta);
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("solve_r determinism", "[solver]") {
    const auto ref = reference_choice(1.0);
    const auto a = solve_r(1.0, 3.687e-11, 334.59, ref.delta, ref.alpha, ref.beta);
    const auto b = solve_r(1.0, 3.687e-11, 334.59, ref.delta, ref.alpha, ref.beta);
    CHECK(a.rho == b.rho);
    CHECK(a.r == b.r);
}

TEST_CASE("dead zone raises", "[solver]") {
    CHECK_THROWS_AS(solve_r(5.0, 0.0, 300.0, {14, 13}, 0.5, 0.5 * 14 / 13),
                    no_positive_lower_bound);
    CHECK_THROWS_AS(optimize_params(5.0, 0.0, 300.0), no_positive_lower_bound);
}

TEST_CASE("parameter validation", "[solver]") {
    pipeline_params p{0, 1, {14, 13}, 1.5, 1.5 * 14 / 13};
    CHECK_THROWS_AS(p.validate(), invalid_params);  // violates both caps
    pipeline_params q{0, 1, {1, 1}, 0.1, 0.1};
    CHECK_THROWS_AS(q.validate(), invalid_params);  // Delta must exceed 1
    pipeline_params ok = reference_choice();
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("optimizer includes the reference point and beats nothing worse", "[solver]") {
    // with the reference A-values at eta = 1, the best grid r cannot exceed 100
    const auto res = optimize_params(1.0, 3.687e-11, 334.59);
    CHECK(res.r <= 100);
    res.params.validate();
}
