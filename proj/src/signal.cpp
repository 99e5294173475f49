#include "voicelab/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "voicelab/fft.hpp"

namespace voicelab {

double Signal1D::norm_l2() const { return norm_lp(2.0); }

double Signal1D::norm_lp(double p) const {
    if (!(p >= 1.0)) throw std::domain_error("norm_lp: p must satisfy p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& s : samples) m = std::max(m, std::abs(s));
        return m;
    }
    std::vector<double> terms(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        terms[i] = std::pow(std::abs(samples[i]), p) * axis.dx;
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

Signal1D make_signal(const Axis& axis) {
    Signal1D f;
    f.axis = axis;
    f.samples.assign(axis.n, cdouble{0.0, 0.0});
    return f;
}

double Signal2D::norm_l2() const {
    std::vector<double> terms;
    terms.reserve(modes.size());
    for (const auto& [n, vn] : modes) {
        const double nn = vn.norm_l2();
        terms.push_back(nn * nn);
    }
    return std::sqrt(pairwise_sum(terms));
}

SpectralProfile fourier(const Signal1D& f) {
    const std::size_t n = f.axis.n;
    if (!is_power_of_two(n)) throw std::invalid_argument("fourier: length must be a power of two");
    if (f.samples.size() != n) throw std::invalid_argument("fourier: sample/axis length mismatch");

    std::vector<cdouble> dft = f.samples;
    fft::forward(dft);

    const double dxi = f.axis.freq_step();
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    std::vector<cdouble> values(n);
    Axis freq_axis{-static_cast<double>(half) * dxi, dxi, n};
    for (std::size_t m = 0; m < n; ++m) {
        const std::ptrdiff_t shifted = static_cast<std::ptrdiff_t>(m) - half;
        const std::size_t k = static_cast<std::size_t>((shifted + static_cast<std::ptrdiff_t>(n)) %
                                                       static_cast<std::ptrdiff_t>(n));
        const double xi = freq_axis.at(m);
        const double phase = -two_pi * xi * f.axis.x0;
        values[m] = dft[k] * cdouble{std::cos(phase), std::sin(phase)} * f.axis.dx;
    }
    SpectralProfile p = sampled_profile(freq_axis, std::move(values));
    p.time_origin = f.axis.x0;
    return p;
}

Signal1D inv_fourier(const SpectralProfile& spectrum) {
    if (spectrum.values.empty())
        throw std::invalid_argument("inv_fourier: spectrum has no sampled backing");
    const std::size_t n = spectrum.axis.n;
    if (!is_power_of_two(n))
        throw std::invalid_argument("inv_fourier: length must be a power of two");

    const double dxi = spectrum.axis.dx;
    const double dx = 1.0 / (dxi * static_cast<double>(n));
    Signal1D f;
    f.axis = Axis{spectrum.time_origin, dx, n};

    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    std::vector<cdouble> bins(n);
    for (std::size_t m = 0; m < n; ++m) {
        const std::ptrdiff_t shifted = static_cast<std::ptrdiff_t>(m) - half;
        const std::size_t k = static_cast<std::size_t>((shifted + static_cast<std::ptrdiff_t>(n)) %
                                                       static_cast<std::ptrdiff_t>(n));
        const double xi = spectrum.axis.at(m);
        const double phase = two_pi * xi * f.axis.x0;
        bins[k] = spectrum.values[m] * cdouble{std::cos(phase), std::sin(phase)};
    }
    fft::inverse(bins);
    for (auto& v : bins) v /= dx;
    f.samples = std::move(bins);
    return f;
}

Signal2D theta_modes(const Axis& x_axis, const std::vector<double>& theta_nodes,
                     const std::vector<cdouble>& values) {
    const std::size_t n_theta = theta_nodes.size();
    if (n_theta < 2) throw std::invalid_argument("theta_modes: need at least 2 theta nodes");
    const double step = two_pi / static_cast<double>(n_theta);
    for (std::size_t l = 0; l < n_theta; ++l) {
        if (std::abs(theta_nodes[l] - step * static_cast<double>(l)) > 1e-12)
            throw std::invalid_argument("theta_modes: theta grid must be uniform over [0, 2pi)");
    }
    if (values.size() != x_axis.n * n_theta)
        throw std::invalid_argument("theta_modes: value array size mismatch");

    Signal2D out;
    const int half = static_cast<int>(n_theta) / 2;
    out.truncation_radius = half;
    for (int n = -half; n < half; ++n) {
        Signal1D vn = make_signal(x_axis);
        for (std::size_t j = 0; j < x_axis.n; ++j) {
            cdouble acc{0.0, 0.0};
            for (std::size_t l = 0; l < n_theta; ++l) {
                const double ang = -static_cast<double>(n) * theta_nodes[l];
                acc += values[j * n_theta + l] * cdouble{std::cos(ang), std::sin(ang)};
            }
            vn.samples[j] = acc / static_cast<double>(n_theta);
        }
        out.modes.emplace(n, std::move(vn));
    }
    return out;
}

std::vector<cdouble> resum_modes(const Signal2D& v, std::size_t n_theta) {
    if (v.modes.empty()) return {};
    const Axis x_axis = v.modes.begin()->second.axis;
    std::vector<cdouble> out(x_axis.n * n_theta, cdouble{0.0, 0.0});
    for (const auto& [n, vn] : v.modes) {
        for (std::size_t l = 0; l < n_theta; ++l) {
            const double ang = static_cast<double>(n) * two_pi * static_cast<double>(l) /
                               static_cast<double>(n_theta);
            const cdouble ph{std::cos(ang), std::sin(ang)};
            for (std::size_t j = 0; j < x_axis.n; ++j) out[j * n_theta + l] += vn.samples[j] * ph;
        }
    }
    return out;
}

Signal1D bandlimit_project(const Signal1D& f, const Interval& omega) {
    if (!omega.valid()) throw std::domain_error("bandlimit_project: invalid interval");
    const double nyq = f.axis.nyquist();
    if (omega.hi > nyq * (1.0 + 1e-12) || omega.lo < -nyq * (1.0 + 1e-12))
        throw std::domain_error("bandlimit_project: band exceeds the Nyquist interval");

    SpectralProfile spec = fourier(f);
    for (std::size_t m = 0; m < spec.axis.n; ++m) {
        const double xi = spec.axis.at(m);
        if (xi < omega.lo || xi > omega.hi) spec.values[m] = cdouble{0.0, 0.0};
    }
    Signal1D out = inv_fourier(spec);
    out.band = omega;
    return out;
}

Signal1D sinc_kernel(double omega, const Axis& axis) {
    if (!(omega > 0.0)) throw std::domain_error("sinc_kernel: omega must be positive");
    Signal1D f = make_signal(axis);
    for (std::size_t j = 0; j < axis.n; ++j) {
        const double b = axis.at(j);
        f.samples[j] = cdouble{2.0 * omega * sinc(2.0 * omega * pi * b), 0.0};
    }
    f.band = Interval{-omega, omega};
    return f;
}

Signal1D shannon_wavelet(const Axis& axis) {
    Signal1D f = make_signal(axis);
    for (std::size_t j = 0; j < axis.n; ++j) {
        const double x = axis.at(j);
        f.samples[j] = cdouble{sinc(pi * x) - 0.5 * sinc(0.5 * pi * x), 0.0};
    }
    f.band = Interval{-0.5, 0.5};
    return f;
}

Signal1D random_bandlimited_signal(const Axis& axis, const SpectralProfile& envelope, Rng& rng) {
    const std::size_t n = axis.n;
    const double dxi = axis.freq_step();
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    std::vector<cdouble> values(n, cdouble{0.0, 0.0});
    Axis freq_axis{-static_cast<double>(half) * dxi, dxi, n};
    for (std::size_t m = 0; m < n; ++m) {
        const cdouble env = envelope.value(freq_axis.at(m));
        if (std::abs(env) > 1e-14) values[m] = env * rng.complex_normal();
    }
    SpectralProfile spec = sampled_profile(freq_axis, std::move(values));
    spec.time_origin = axis.x0;
    Signal1D out = inv_fourier(spec);
    const double hi = envelope.support.hi;
    const double lo = envelope.two_sided ? -hi : envelope.support.lo;
    out.band = Interval{lo, hi};
    return out;
}

}  // namespace voicelab
