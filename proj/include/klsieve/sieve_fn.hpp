#pragma once

// Sieve density functions and derived constants.
//
//   m_kappa: m(s) = kappa! on ]0,1],  s m'(s) = kappa m(s-1)  (0 for s <= 0)
//   frak_f:  f(s) = 2      on ]0,2],  s f'(s) = 2 f(s-2)      (= m_2(s/2))
//   sigma:   sigma(s) = s^2/(8 e^{2 gamma}) on ]0,2],  (s^-2 sigma)' = -2 s^-3 sigma(s-2)
//
// Closed forms are used on ]0,6] (]0,3] for m_kappa), grid continuation
// beyond. sigma'(s) = (2/s)(sigma(s) - sigma(s-2)) identically for s > 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "klsieve/numerics.hpp"

namespace klsieve {

inline constexpr double euler_gamma = 0.57721566490153286;
inline const double exp_2gamma = std::exp(2 * euler_gamma);

namespace detail {

inline constexpr double continuation_max = 24.0;
inline constexpr double continuation_step = 1.0 / 512.0;

// int_4^s log(t-2)/t dt, smooth on [4, 6]
inline double log_kernel_f(double s) {
    return num::integrate_gl([](double t) { return std::log(t - 2.0) / t; }, 4.0, s, 48);
}

// int_4^s (t-2)^2 log(t-2)/t^3 dt
inline double log_kernel_sigma(double s) {
    return num::integrate_gl(
        [](double t) {
            const double u = t - 2.0;
            return u * u * std::log(u) / (t * t * t);
        },
        4.0, s, 48);
}

// Lazily grown uniform grid for y' = rhs(u, values-so-far), advanced by
// Simpson steps. `lagged` reads already-computed values, so rhs arguments
// must lag the frontier (they do: the difference terms look back >= 1).
class grid_continuation {
public:
    grid_continuation(double from, double y0, std::function<double(double)> closed,
                      std::function<double(double, const std::function<double(double)>&)> rhs)
        : from_(from), closed_(std::move(closed)), rhs_(std::move(rhs)) {
        grid_.push_back(from);
        vals_.push_back(y0);
    }

    double operator()(double s) {
        std::scoped_lock lk(mu_);
        if (s > continuation_max) throw std::domain_error("continuation range exceeded");
        auto lagged = [this](double u) { return eval_nolock(u); };
        while (grid_.back() < s + 2 * continuation_step || grid_.size() < 4) {
            const double a = grid_.back(), b = a + continuation_step;
            const double inc = (b - a) / 6.0 *
                               (rhs_(a, lagged) + 4.0 * rhs_(0.5 * (a + b), lagged) + rhs_(b, lagged));
            grid_.push_back(b);
            vals_.push_back(vals_.back() + inc);
        }
        return eval_nolock(s);
    }

private:
    // cubic Lagrange on the uniform grid; closed form below `from_`
    double eval_nolock(double u) const {
        if (u <= from_) return closed_(u);
        const std::size_t n = grid_.size();
        if (n < 4) {  // frontier still warming up: linear between neighbors
            const std::size_t i = std::min<std::size_t>(
                n - 2, std::size_t((u - from_) / continuation_step));
            const double t = (u - grid_[i]) / continuation_step;
            return vals_[i] + t * (vals_[i + 1] - vals_[i]);
        }
        std::size_t i = std::min(n - 2, std::size_t((u - from_) / continuation_step));
        std::size_t lo = (i == 0) ? 0 : i - 1;
        if (lo + 4 > n) lo = n - 4;
        double out = 0;
        for (std::size_t j = lo; j < lo + 4; ++j) {
            double l = 1;
            for (std::size_t k = lo; k < lo + 4; ++k)
                if (k != j) l *= (u - grid_[k]) / (grid_[j] - grid_[k]);
            out += l * vals_[j];
        }
        return out;
    }

    double from_;
    std::function<double(double)> closed_;
    std::function<double(double, const std::function<double(double)>&)> rhs_;
    std::vector<double> grid_, vals_;
    std::mutex mu_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// m_kappa

namespace detail {

inline double m_kappa_closed(unsigned kappa, double s) {
    double fact = 1;
    for (unsigned j = 2; j <= kappa; ++j) fact *= j;
    if (s <= 0) return 0.0;
    if (s <= 1) return fact;
    const double k = kappa;
    if (s <= 2) return fact * (1 + k * std::log(s));
    // ]2,3]: m(s) = m(2) + kappa int_2^s m(u-1)/u du with m explicit on ]1,2]
    const double tail =
        num::integrate_gl([&](double u) { return (1 + k * std::log(u - 1.0)) / u; }, 2.0, s, 48);
    return fact * (1 + k * std::log(2.0)) + fact * k * tail;
}

inline detail::grid_continuation& m_kappa_tail(unsigned kappa) {
    static std::map<unsigned, std::unique_ptr<grid_continuation>> tails;
    static std::mutex mu;
    std::scoped_lock lk(mu);
    auto it = tails.find(kappa);
    if (it == tails.end()) {
        auto closed = [kappa](double u) { return m_kappa_closed(kappa, u); };
        auto rhs = [kappa](double u, const std::function<double(double)>& lagged) {
            return double(kappa) * lagged(u - 1.0) / u;
        };
        it = tails.emplace(kappa, std::make_unique<grid_continuation>(3.0, closed(3.0), closed, rhs))
                 .first;
    }
    return *it->second;
}

}  // namespace detail

inline double m_kappa(unsigned kappa, double s) {
    if (kappa == 0) return s > 0 ? 1.0 : 0.0;
    if (s <= 3.0) return detail::m_kappa_closed(kappa, s);
    return detail::m_kappa_tail(kappa)(s);
}

// ---------------------------------------------------------------------------
// frak_f (equals m_2(s/2); closed forms on ]0,6])

inline double frak_f(double s) {
    if (s <= 0) return 0.0;
    if (s <= 2) return 2.0;
    if (s <= 4) return 4 * std::log(s / 2) + 2;
    if (s <= 6) {
        const double l2 = std::log(2.0);
        return 8 * detail::log_kernel_f(s) - (8 * l2 - 4) * std::log(s) + 16 * l2 * l2 - 4 * l2 + 2;
    }
    return m_kappa(2, s / 2);
}

// ---------------------------------------------------------------------------
// sigma. The ]4,6] constants come from integrating the defining equation
// through the ]2,4] piece; note the 48/36 pair (printed tables elsewhere
// carry 49/32, which contradicts the equation away from s = 4).

namespace detail {

inline double sigma_closed(double s) {
    if (s <= 0) return 0.0;
    const double pref = s * s / (8 * exp_2gamma);
    if (s <= 2) return pref;
    const double l4 = 2 * std::log(2.0);
    if (s <= 4) return pref * (4 + l4 - 2 * std::log(s) - (8 * s - 4) / (s * s));
    return pref * (4 * log_kernel_sigma(s) - (8 + 2 * l4) * std::log(s) +
                   (48 + 35 * l4 + 8 * l4 * l4) / 4 - (48 + 8 * l4) / s + (36 + 4 * l4) / (s * s));
}

// continuation carries q(s) = sigma(s)/s^2 with q'(s) = -2 sigma(s-2)/s^3
inline detail::grid_continuation& sigma_tail() {
    static grid_continuation tail(
        6.0, sigma_closed(6.0) / 36.0,
        [](double u) { return u > 0 ? sigma_closed(u) / (u * u) : 0.0; },
        [](double u, const std::function<double(double)>& lagged) {
            const double v = u - 2.0;
            const double sig = (v <= 6.0) ? sigma_closed(v) : lagged(v) * v * v;
            return -2.0 * sig / (u * u * u);
        });
    return tail;
}

}  // namespace detail

inline double sigma_fn(double s) {
    if (s <= 6.0) return detail::sigma_closed(s);
    return detail::sigma_tail()(s) * s * s;
}

inline double sigma_prime(double s) {
    if (s <= 0) return 0.0;
    if (s <= 2) return s / (4 * exp_2gamma);
    return (2.0 / s) * (sigma_fn(s) - sigma_fn(s - 2.0));
}

inline double frak_f_prime(double s) {
    if (s <= 2) return 0.0;
    return (2.0 / s) * frak_f(s - 2.0);
}

// ---------------------------------------------------------------------------
// c_1(tau), c_2(tau) and the main-term constant

struct c_pair {
    double c1 = 0;
    double c2 = 0;
};

namespace detail {

// split [0,1] where a piecewise argument crosses a breakpoint
inline std::vector<double> split_points(std::initializer_list<double> candidates) {
    std::vector<double> pts{0.0, 1.0};
    for (double c : candidates)
        if (c > 0.0 && c < 1.0) pts.push_back(c);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-15; }),
              pts.end());
    return pts;
}

template <typename F>
double integrate_split(F&& f, const std::vector<double>& pts, int gl_points) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        s += num::integrate_gl(f, pts[i], pts[i + 1], gl_points);
    return s;
}

}  // namespace detail

// c1(tau) = int_0^1 sigma'((1-u)tau) f(u tau)^2 du
inline double c1_of(double tau, int gl_points = 40) {
    if (tau <= 0) throw std::domain_error("c1_of: tau > 0");
    const auto pts =
        detail::split_points({2 / tau, 4 / tau, 6 / tau, 1 - 2 / tau, 1 - 4 / tau, 1 - 6 / tau});
    return detail::integrate_split(
        [&](double u) {
            const double f = frak_f(u * tau);
            return sigma_prime((1 - u) * tau) * f * f;
        },
        pts, gl_points);
}

// c2(tau) = int_0^1 int_0^1 sigma'((1-u)tau) f(u tau - 2v) {2 f(u tau) - f(u tau - 2v)} du dv
inline double c2_of(double tau, int gl_points = 40) {
    if (tau <= 0) throw std::domain_error("c2_of: tau > 0");
    const auto upts =
        detail::split_points({2 / tau, 4 / tau, 6 / tau, 1 - 2 / tau, 1 - 4 / tau, 1 - 6 / tau});
    return detail::integrate_split(
        [&](double u) {
            const double sp = sigma_prime((1 - u) * tau);
            if (sp == 0) return 0.0;
            const double fu = frak_f(u * tau);
            const auto vpts =
                detail::split_points({u * tau / 2, (u * tau - 2) / 2, (u * tau - 4) / 2});
            const double inner = detail::integrate_split(
                [&](double v) {
                    const double fv = frak_f(u * tau - 2 * v);
                    return fv * (2 * fu - fv);
                },
                vpts, gl_points);
            return sp * inner;
        },
        upts, gl_points);
}

inline c_pair c1_c2(double tau) { return {c1_of(tau), c2_of(tau)}; }

// finite step-function majorants of c1(6), c2(6) built from integer-argument
// closed-form values (positivity of sigma' + monotonicity of f)
inline c_pair c1_c2_step_bounds() {
    std::array<double, 7> f{}, sg{};
    for (int j = 0; j <= 6; ++j) {
        f[std::size_t(j)] = frak_f(j);
        sg[std::size_t(j)] = detail::sigma_closed(j);
    }
    double c1 = f[1] * f[1] * sg[6];
    for (int j = 3; j <= 6; ++j)
        c1 += (f[std::size_t(j)] * f[std::size_t(j)] -
               f[std::size_t(j) - 1] * f[std::size_t(j) - 1]) *
              sg[std::size_t(7 - j)];
    c1 /= 6.0;
    double c2 = f[1] * f[1] * sg[6];
    for (int j = 2; j <= 6; ++j)
        c2 += (f[std::size_t(j)] * f[std::size_t(j)] * j -
               f[std::size_t(j) - 1] * f[std::size_t(j) - 1] * (j - 1)) *
              sg[std::size_t(7 - j)];
    c2 /= 12.0;
    return {c1, c2};
}

// main-term constant: 16 e^{2 gamma} (c1/(4 tau theta^2) + c2/(tau^2 theta))
inline double sieve_main_term(double theta, double tau, const c_pair& c) {
    return 16 * exp_2gamma * (c.c1 / (4 * tau * theta * theta) + c.c2 / (tau * tau * theta));
}

inline double sieve_main_term(double theta, double tau) {
    return sieve_main_term(theta, tau, c1_c2(tau));
}

// upper envelope (2 + |eta|) * main term at (1/4, 6), step-bound c's
inline double background_upper_bound(double eta) {
    const c_pair b = c1_c2_step_bounds();
    return (2 + std::abs(eta)) * 16 * exp_2gamma * (2 * b.c1 / 3 + b.c2 / 9);
}

}  // namespace klsieve
