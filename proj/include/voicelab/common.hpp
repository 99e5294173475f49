#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace voicelab {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
    bool valid() const { return lo <= hi; }
};

/// Uniform sampling axis: points x0 + i*dx for i in [0, n).
struct Axis {
    double x0 = 0.0;
    double dx = 1.0;
    std::size_t n = 0;

    double at(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double nyquist() const { return 0.5 / dx; }
    double freq_step() const { return 1.0 / (dx * static_cast<double>(n)); }
    double span() const { return dx * static_cast<double>(n); }

    bool operator==(const Axis& o) const { return x0 == o.x0 && dx == o.dx && n == o.n; }
};

/// Symmetric axis covering [-halfwidth, halfwidth) with n samples.
inline Axis symmetric_axis(double halfwidth, std::size_t n) {
    const double dx = 2.0 * halfwidth / static_cast<double>(n);
    return Axis{-halfwidth, dx, n};
}

inline double sinc(double x) {
    if (std::abs(x) < 1e-8) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

inline double reduce_angle(double phi) {
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;  // fmod can land exactly on 2*pi
    return r;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Fixed-tree pairwise summation; reduction order does not depend on
/// how the caller partitions work, so results are reproducible.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
    const std::size_t n = xs.size();
    if (n <= 32) {
        T acc{};
        for (const T& x : xs) acc += x;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
    return pairwise_sum(std::span<const T>(xs));
}

/// Format with 12 significant digits, locale-independent.
inline std::string format_sig(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
}

/// Seeded RNG wrapper. Normal deviates use an explicit Box-Muller so the
/// stream does not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53-bit mantissa in [0,1)
        return (engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 1e-300);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

    cdouble complex_normal() { return cdouble(normal(), normal()); }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace voicelab
