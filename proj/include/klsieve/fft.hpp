#pragma once

// Complex DFT of arbitrary length via Bluestein's chirp transform.
// Used to evaluate all Kloosterman sums mod p in one pass.

#include <bit>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace klsieve::fft {

using cd = std::complex<double>;

// in-place iterative radix-2, n a power of two
inline void fft_pow2(std::vector<cd>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2 * std::numbers::pi / double(len) * (inverse ? 1 : -1);
        const cd wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cd u = a[i + j], v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= double(n);
}

// X_k = sum_n x_n e^{-2 pi i n k / N} for arbitrary N.
// Chirp phases use n^2 mod 2N so the angle argument stays small.
inline std::vector<cd> dft(const std::vector<cd>& x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    if (std::has_single_bit(n)) {
        auto a = x;
        fft_pow2(a, false);
        return a;
    }
    const std::size_t m = std::bit_ceil(2 * n - 1);
    std::vector<cd> a(m, cd(0)), b(m, cd(0));
    std::vector<cd> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t q = (std::uint64_t(k) * k) % (2 * n);
        const double ang = std::numbers::pi * double(q) / double(n);
        chirp[k] = cd(std::cos(ang), -std::sin(ang));
    }
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    b[0] = cd(1);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, true);
    std::vector<cd> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
    return out;
}

}  // namespace klsieve::fft
