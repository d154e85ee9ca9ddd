#pragma once

// Sobol low-discrepancy points up to 8 dimensions (Joe-Kuo direction
// numbers), with per-replicate XOR digit scrambling for error estimation.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace klsieve::qmc {

namespace detail {

struct sobol_dim {
    int s;                       // degree of primitive polynomial
    std::uint32_t a;             // polynomial coefficients (excluding leading/trailing 1)
    std::array<std::uint32_t, 8> m;  // initial direction integers
};

// dimensions 2..8; dimension 1 is the van der Corput sequence
inline constexpr std::array<sobol_dim, 7> joe_kuo = {{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
}};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace detail

inline constexpr int sobol_max_dim = 8;
inline constexpr int sobol_bits = 32;

class sobol_sequence {
public:
    // scramble_seed = 0 gives the plain (unscrambled) sequence
    explicit sobol_sequence(int dim, std::uint64_t scramble_seed = 0) : dim_(dim) {
        if (dim < 1 || dim > sobol_max_dim) throw std::invalid_argument("sobol: 1 <= dim <= 8");
        v_.assign(dim, {});
        for (int b = 0; b < sobol_bits; ++b) v_[0][b] = 1u << (31 - b);
        for (int d = 1; d < dim; ++d) {
            const auto& jk = detail::joe_kuo[std::size_t(d - 1)];
            const int s = jk.s;
            for (int b = 0; b < s; ++b) v_[d][b] = jk.m[std::size_t(b)] << (31 - b);
            for (int b = s; b < sobol_bits; ++b) {
                std::uint32_t x = v_[d][b - s] ^ (v_[d][b - s] >> s);
                for (int k = 1; k < s; ++k)
                    if ((jk.a >> (s - 1 - k)) & 1) x ^= v_[d][b - k];
                v_[d][b] = x;
            }
        }
        mask_.assign(dim, 0);
        if (scramble_seed)
            for (int d = 0; d < dim; ++d)
                mask_[d] = std::uint32_t(detail::splitmix64(scramble_seed * 0x9e37u + std::uint64_t(d)));
        state_.assign(dim, 0);
        index_ = 0;
    }

    // next point, Gray-code update; coordinates in (0, 1)
    void next(double* out) {
        const std::uint64_t i = index_++;
        const int c = lowest_zero_bit(i);
        for (int d = 0; d < dim_; ++d) {
            state_[d] ^= v_[d][c];
            const std::uint32_t bits = state_[d] ^ mask_[d];
            out[d] = (double(bits) + 0.5) * 0x1p-32;
        }
    }

    int dimension() const { return dim_; }

private:
    static int lowest_zero_bit(std::uint64_t i) {
        int c = 0;
        while (i & 1) i >>= 1, ++c;
        return c;
    }

    int dim_;
    std::vector<std::array<std::uint32_t, sobol_bits>> v_;
    std::vector<std::uint32_t> mask_;
    std::vector<std::uint32_t> state_;
    std::uint64_t index_;
};

}  // namespace klsieve::qmc
