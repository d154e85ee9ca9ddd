#include "klsieve/fft.hpp"
#include "klsieve/numerics.hpp"
#include "klsieve/sobol.hpp"

#include <catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace klsieve;

TEST_CASE("gauss-legendre integrates polynomials exactly", "[numerics]") {
    // 2n-1 degree exactness
    auto f = [](double x) { return 5 * std::pow(x, 9) - 3 * std::pow(x, 4) + x; };
    const double exact = 0.5 * (1024 - 1) - 3.0 / 5 * (32 - 1) + 0.5 * (4 - 1);
    CHECK(num::integrate_gl(f, 1.0, 2.0, 8) == Catch::Approx(exact).epsilon(1e-13));
    CHECK(num::integrate_panels(f, 1.0, 2.0, 4, 8) == Catch::Approx(exact).epsilon(1e-13));
}

TEST_CASE("adaptive simpson on smooth integrand", "[numerics]") {
    const double v = num::integrate_adaptive([](double x) { return std::exp(-x * x); }, 0.0, 3.0, 1e-12);
    CHECK(v == Catch::Approx(0.8862073482595214).epsilon(1e-10));  // sqrt(pi)/2 * erf(3)
}

TEST_CASE("pchip preserves monotone data and interpolates", "[numerics]") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 50; ++i) {
        const double x = i / 50.0;
        xs.push_back(x);
        ys.push_back(x * x * (3 - 2 * x));
    }
    num::pchip f(xs, ys);
    double prev = -1;
    for (double x = 0; x <= 1.0001; x += 0.001) {
        const double v = f(x);
        CHECK(v >= prev - 1e-12);
        prev = v;
        CHECK(std::abs(v - x * x * (3 - 2 * std::min(x, 1.0))) < 5e-4);
    }
}

TEST_CASE("bisect finds monotone root", "[numerics]") {
    const double r = num::bisect([](double x) { return x * x * x; }, 0.0, 2.0, 5.0);
    CHECK(r == Catch::Approx(std::cbrt(5.0)).epsilon(1e-12));
}

TEST_CASE("bluestein dft matches naive dft", "[numerics]") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u, 97u, 101u, 360u, 1009u}) {
        std::vector<fft::cd> x(n);
        for (auto& v : x)
            v = fft::cd(std::uniform_real_distribution<>(-1, 1)(rng),
                        std::uniform_real_distribution<>(-1, 1)(rng));
        const auto got = fft::dft(x);
        for (std::size_t k = 0; k < n; k += std::max<std::size_t>(1, n / 7)) {
            fft::cd direct(0);
            for (std::size_t j = 0; j < n; ++j) {
                const double ang = -2 * std::numbers::pi * double(j * k % n) / double(n);
                direct += x[j] * fft::cd(std::cos(ang), std::sin(ang));
            }
            CHECK(std::abs(got[k] - direct) < 1e-9 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("sobol dimension-1 is van der corput", "[numerics]") {
    qmc::sobol_sequence s(1);
    double x[1];
    std::vector<double> first;
    for (int i = 0; i < 4; ++i) {
        s.next(x);
        first.push_back(x[0]);
    }
    // Gray-code order of the base-2 radical inverse
    CHECK(first[0] == Catch::Approx(0.5).margin(1e-9));
    CHECK(first[1] == Catch::Approx(0.75).margin(1e-9));
    CHECK(first[2] == Catch::Approx(0.25).margin(1e-9));
}

TEST_CASE("sobol points integrate a product function well", "[numerics]") {
    // int over [0,1]^4 of prod (2 x_j) = 1
    qmc::sobol_sequence s(4, 123);
    double x[4];
    double acc = 0;
    const int n = 1 << 14;
    for (int i = 0; i < n; ++i) {
        s.next(x);
        acc += 16 * x[0] * x[1] * x[2] * x[3];
    }
    CHECK(acc / n == Catch::Approx(1.0).margin(2e-3));
}

TEST_CASE("sobol determinism and scrambling", "[numerics]") {
    qmc::sobol_sequence a(3, 42), b(3, 42), c(3, 43);
    double xa[3], xb[3], xc[3];
    bool differs = false;
    for (int i = 0; i < 16; ++i) {
        a.next(xa);
        b.next(xb);
        c.next(xc);
        for (int d = 0; d < 3; ++d) {
            REQUIRE(xa[d] == xb[d]);
            if (xa[d] != xc[d]) differs = true;
        }
    }
    CHECK(differs);
}
