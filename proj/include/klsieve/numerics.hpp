#pragma once

// Shared numeric kernels: Gauss-Legendre panels, adaptive quadrature,
// monotone cubic (Fritsch-Carlson) interpolation, bisection.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace klsieve::num {

struct gl_rule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// Newton iteration on P_n; nodes accurate to machine precision
inline const gl_rule& gauss_legendre(int n) {
    static std::map<int, gl_rule> cache;
    static std::mutex mu;
    std::scoped_lock lk(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    gl_rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = 0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1 - x * x) * pp * pp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

template <typename F>
double integrate_gl(F&& f, double a, double b, int points = 32) {
    if (a == b) return 0.0;
    const auto& r = gauss_legendre(points);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < points; ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

template <typename F>
double integrate_panels(F&& f, double a, double b, int panels, int points = 32) {
    double s = 0;
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) s += integrate_gl(f, a + k * h, a + (k + 1) * h, points);
    return s;
}

namespace detail {
template <typename F>
double adaptive_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (b - a) / 12.0 * (fa + 4 * flm + fm);
    const double right = (b - a) / 12.0 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

// adaptive Simpson; fine for the smooth-with-kinks integrands used here
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return detail::adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes).
// Preserves monotone data; evaluation clamps to the grid range.
class pchip {
public:
    pchip() = default;
    pchip(std::vector<double> xs, std::vector<double> ys) : x_(std::move(xs)), y_(std::move(ys)) {
        const std::size_t n = x_.size();
        if (n < 2 || n != y_.size()) throw std::invalid_argument("pchip: need matching grids, n >= 2");
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double h = x_[i + 1] - x_[i];
            if (h <= 0) throw std::invalid_argument("pchip: grid not strictly increasing");
            d[i] = (y_[i + 1] - y_[i]) / h;
        }
        m_.assign(n, 0.0);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0) {
                m_[i] = 0;
            } else {
                const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
                const double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // clip endpoint slopes to keep monotonicity
        auto clip_end = [](double& m, double delta) {
            if (delta == 0)
                m = 0;
            else if (m * delta < 0)
                m = 0;
            else if (std::abs(m) > 3 * std::abs(delta))
                m = 3 * delta;
        };
        clip_end(m_[0], d[0]);
        clip_end(m_[n - 1], d[n - 2]);
    }

    double operator()(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        const double h = x_[lo + 1] - x_[lo];
        const double t = (x - x_[lo]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
        return h00 * y_[lo] + h10 * h * m_[lo] + h01 * y_[lo + 1] + h11 * h * m_[lo + 1];
    }

    const std::vector<double>& grid() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::vector<double> x_, y_, m_;
};

// root of monotone increasing f on [lo, hi]
template <typename F>
double bisect(F&& f, double lo, double hi, double target, int iters = 100) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace klsieve::num
