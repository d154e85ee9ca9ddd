#pragma once

// Recursive product measures mu^(k) on [-1,1]: mu^(1) is the pushforward of
// (2/pi) sin^2(theta) dtheta under cos, and mu^(k) is the law of a product of
// k independent mu^(1) draws. CDFs are built on a grid by iterating
//   mu^(k)([-x,x]) = mu^(1)([-x,x]) + (4/pi) int_x^1 mu^(k-1)([-x/t,x/t]) sqrt(1-t^2) dt,
// then interpolated monotonically. The substitution t = cos(phi) removes the
// sqrt endpoint singularity from the quadrature.

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "klsieve/numerics.hpp"

namespace klsieve {

// mu^(1)([-x,x]) = (2/pi)(x sqrt(1-x^2) + asin x), exact
inline double mu1_cdf(double x) {
    if (x < 0.0 || x > 1.0) throw std::domain_error("mu1_cdf: x in [0,1]");
    return (2.0 / std::numbers::pi) * (x * std::sqrt(1.0 - x * x) + std::asin(x));
}

class measure_cdf {
public:
    int order() const { return k_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return vals_; }

    // mu^(k)([-x,x]), clamped to [0,1]
    double operator()(double x) const {
        if (x <= 0) return 0.0;
        if (x >= 1) return 1.0;
        if (k_ == 1) return mu1_cdf(x);
        return std::clamp(interp_(x), 0.0, 1.0);
    }

    void write_csv(std::ostream& os) const {
        os << "x,cdf\n";
        char buf[80];
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.15g,%.15g\n", grid_[i], vals_[i]);
            os << buf;
        }
    }

private:
    friend class measure_set;
    int k_ = 1;
    std::vector<double> grid_, vals_;
    num::pchip interp_;
};

// builds mu^(1), mu^(2), ... up to a requested order, sequentially in k
class measure_set {
public:
    explicit measure_set(int resolution = 4096) : res_(resolution) {
        if (resolution < 512) throw std::invalid_argument("measure_set: resolution >= 512");
        levels_.push_back(base_level());
    }

    const measure_cdf& up_to(int k) {
        if (k < 1) throw std::invalid_argument("measure_set: order >= 1");
        while (int(levels_.size()) < k) levels_.push_back(next_level(levels_.back()));
        return levels_[std::size_t(k) - 1];
    }

    const measure_cdf& operator[](int k) const { return levels_.at(std::size_t(k) - 1); }
    int max_order() const { return int(levels_.size()); }

private:
    measure_cdf base_level() const {
        measure_cdf m;
        m.k_ = 1;
        m.grid_ = make_grid();
        m.vals_.resize(m.grid_.size());
        for (std::size_t i = 0; i < m.grid_.size(); ++i) m.vals_[i] = mu1_cdf(m.grid_[i]);
        m.interp_ = num::pchip(m.grid_, m.vals_);
        return m;
    }

    measure_cdf next_level(const measure_cdf& prev) const {
        measure_cdf m;
        m.k_ = prev.k_ + 1;
        m.grid_ = make_grid();
        m.vals_.resize(m.grid_.size());
        const auto& rule = num::gauss_legendre(96);
        for (std::size_t i = 0; i < m.grid_.size(); ++i) {
            const double x = m.grid_[i];
            if (x >= 1.0) {
                m.vals_[i] = 1.0;
                continue;
            }
            const double a = std::acos(x);
            double s = 0;
            for (std::size_t j = 0; j < rule.x.size(); ++j) {
                const double phi = 0.5 * a * (rule.x[j] + 1.0);
                const double sn = std::sin(phi);
                s += rule.w[j] * prev(x / std::cos(phi)) * sn * sn;
            }
            m.vals_[i] = mu1_cdf(x) + (4.0 / std::numbers::pi) * (0.5 * a) * s;
        }
        m.vals_.front() = 0.0;
        m.vals_.back() = 1.0;
        m.interp_ = num::pchip(m.grid_, m.vals_);
        return m;
    }

    std::vector<double> make_grid() const {
        std::vector<double> g(std::size_t(res_) + 1);
        for (int i = 0; i <= res_; ++i) g[std::size_t(i)] = double(i) / res_;
        return g;
    }

    int res_;
    std::vector<measure_cdf> levels_;
};

// y_i(x): the unique y with mu^(i-1)([-y,y]) = 1 - mu^(1)([-x,x])
inline double root_y(measure_set& ms, int i, double x) {
    if (i < 2 || i > 7) throw std::invalid_argument("root_y: i in 2..7");
    if (x < 0 || x > 1) throw std::domain_error("root_y: x in [0,1]");
    const double target = 1.0 - mu1_cdf(x);
    const auto& F = ms.up_to(i - 1);
    return num::bisect([&](double y) { return F(y); }, 0.0, 1.0, target);
}

struct bi_constant {
    int i = 0;
    double value = 0;
    double reference_lower_bound = 0;
};

inline constexpr std::array<double, 6> bi_reference_floors = {
    0.233838, 0.099779, 0.047473, 0.023523, 0.011685, 0.005567};  // i = 2..7

// B_i = 4^i int_0^1 x^2 y_i(x)^2 dmu^(1)([-x,x]); x = cos(phi) substitution
inline bi_constant b_constant(measure_set& ms, int i) {
    if (i < 2 || i > 7) throw std::invalid_argument("b_constant: i in 2..7");
    ms.up_to(i - 1);
    const auto& rule = num::gauss_legendre(256);
    double s = 0;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
        const double phi = 0.25 * std::numbers::pi * (rule.x[j] + 1.0);
        const double x = std::cos(phi), sn = std::sin(phi);
        const double y = root_y(ms, i, x);
        s += rule.w[j] * x * x * y * y * sn * sn;
    }
    const double value =
        std::pow(4.0, i) * (4.0 / std::numbers::pi) * (0.25 * std::numbers::pi) * s;
    return {i, value, bi_reference_floors[std::size_t(i) - 2]};
}

}  // namespace klsieve
