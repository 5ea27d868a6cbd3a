#pragma once
/*
Log-factorials and binomial coefficients for the integer arguments that show up
in Beta densities with count-valued parameters and in the lower-bound ratios.

ln(k!) is summed exactly (in double) into a table for k < 1024 and taken from
the Stirling series beyond that; the series with five correction terms has
absolute error below 1e-16 for k >= 1024. No libm lgamma is involved, so the
results are reentrant and bit-identical across platforms with IEEE doubles.
*/

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace cowi::special {

inline constexpr double ln2 = 0.693147180559945309417232121458176568;
inline constexpr double half_ln_2pi = 0.918938533204672741780329736405617640;

namespace detail {

inline constexpr std::size_t table_size = 1024;

inline const std::array<double, table_size>& log_factorial_table() {
    static const std::array<double, table_size> table = [] {
        std::array<double, table_size> t{};
        t[0] = 0.0;
        for (std::size_t k = 1; k < table_size; ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
        return t;
    }();
    return table;
}

inline double stirling_log_factorial(double k) {
    // ln k! = ln Γ(k+1) = (k+1/2) ln k − k + ½ ln 2π + Σ B_{2m}/(2m(2m−1) k^{2m−1})
    const double inv = 1.0 / k;
    const double inv2 = inv * inv;
    const double series =
        inv * (1.0 / 12.0 -
               inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
    return (k + 0.5) * std::log(k) - k + half_ln_2pi + series;
}

} // namespace detail

// ln(k!) for k >= 0.
inline double log_factorial(std::uint64_t k) {
    if (k < detail::table_size) return detail::log_factorial_table()[k];
    return detail::stirling_log_factorial(static_cast<double>(k));
}

// ln Γ(a) for positive integer a.
inline double log_gamma_int(std::uint64_t a) {
    if (a == 0) throw std::domain_error("log_gamma_int: argument must be positive");
    return log_factorial(a - 1);
}

// ln C(n, k); −∞ when k > n.
inline double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

__extension__ typedef unsigned __int128 uint128;

// Exact C(n, k) for n <= 64 (the largest value, C(64,32), is below 2^64).
// Returns 0 when k > n.
inline std::uint64_t binomial_exact(unsigned n, unsigned k) {
    if (n > 64) throw std::out_of_range("binomial_exact: n must be <= 64");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    uint128 c = 1;
    for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return static_cast<std::uint64_t>(c);
}

} // namespace cowi::special
