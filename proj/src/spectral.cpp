#include "voicelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "voicelab/fft.hpp"

namespace voicelab {

namespace {

cdouble interp_sampled(const Axis& axis, const std::vector<cdouble>& values, double xi) {
    const double u = (xi - axis.x0) / axis.dx;
    if (u < 0.0 || u > static_cast<double>(axis.n - 1)) return {0.0, 0.0};
    const auto i = static_cast<std::size_t>(u);
    if (i + 1 >= axis.n) return values[axis.n - 1];
    const double frac = u - static_cast<double>(i);
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

}  // namespace

/// Cumulative integral of |value(e^t)|^2 over the positive-side support.
struct LogCdf {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double dt = 0.0;
    std::vector<double> cum;  // cum[i] = integral over [t_lo, t_lo + i*dt]

    double eval(double t) const {
        if (cum.empty() || t <= t_lo) return 0.0;
        if (t >= t_hi) return cum.back();
        const double u = (t - t_lo) / dt;
        const auto i = static_cast<std::size_t>(u);
        if (i + 1 >= cum.size()) return cum.back();
        const double frac = u - static_cast<double>(i);
        return cum[i] * (1.0 - frac) + cum[i + 1] * frac;
    }
};

cdouble SpectralProfile::value(double xi) const {
    const double arg = two_sided ? std::abs(xi) : xi;
    if (arg < support.lo || arg > support.hi) return {0.0, 0.0};
    return eval ? eval(arg) : cdouble{0.0, 0.0};
}

SpectralProfile indicator_band(double lo, double hi, bool two_sided, cdouble amplitude) {
    if (!(lo <= hi)) throw std::invalid_argument("indicator_band: need lo <= hi");
    SpectralProfile p;
    p.two_sided = two_sided;
    p.support = {lo, hi};
    p.piecewise_constant = true;
    p.amplitude = amplitude;
    p.eval = [amplitude](double) { return amplitude; };
    return p;
}

SpectralProfile lognormal_band(double xi0, double s, bool two_sided) {
    if (!(xi0 > 0.0 && s > 0.0)) throw std::invalid_argument("lognormal_band: need xi0, s > 0");
    SpectralProfile p;
    p.two_sided = two_sided;
    // exp(-50) ~ 2e-22 at the support edges
    p.support = {xi0 * std::exp(-10.0 * s), xi0 * std::exp(10.0 * s)};
    p.eval = [xi0, s](double xi) {
        const double t = std::log(xi / xi0) / s;
        return cdouble{std::exp(-0.5 * t * t), 0.0};
    };
    return p;
}

SpectralProfile gaussian_band(double center, double sigma) {
    if (!(center > 0.0 && sigma > 0.0))
        throw std::invalid_argument("gaussian_band: need center, sigma > 0");
    SpectralProfile p;
    p.two_sided = false;
    p.support = {std::max(center - 9.0 * sigma, 1e-12), center + 9.0 * sigma};
    p.eval = [center, sigma](double xi) {
        const double t = (xi - center) / sigma;
        return cdouble{std::exp(-0.5 * t * t), 0.0};
    };
    return p;
}

SpectralProfile sampled_profile(Axis axis, std::vector<cdouble> values) {
    if (values.size() != axis.n) throw std::invalid_argument("sampled_profile: size mismatch");
    SpectralProfile p;
    p.two_sided = false;
    p.axis = axis;
    p.values = std::move(values);
    // support from nonzero entries
    std::size_t first = p.values.size(), last = 0;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        if (std::abs(p.values[i]) > 0.0) {
            first = std::min(first, i);
            last = std::max(last, i);
        }
    }
    if (first < p.values.size()) {
        p.support = {axis.at(first), axis.at(last)};
    } else {
        p.support = {0.0, 0.0};
    }
    const Axis ax = p.axis;
    const auto* vals = &p.values;
    p.eval = [ax, vals](double xi) { return interp_sampled(ax, *vals, xi); };
    return p;
}

SpectralProfile dilated(const SpectralProfile& p, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("dilated: scale must be positive");
    SpectralProfile out;
    out.two_sided = p.two_sided;
    out.support = {p.support.lo * s, p.support.hi * s};
    out.piecewise_constant = p.piecewise_constant;
    out.amplitude = p.amplitude;
    SpectralProfile base = p;
    base.abs2_cdf.reset();
    out.eval = [base, s](double xi) { return base.eval(xi / s); };
    return out;
}

SpectralProfile abs_squared(const SpectralProfile& p) {
    SpectralProfile out;
    out.two_sided = p.two_sided;
    out.support = p.support;
    out.piecewise_constant = p.piecewise_constant;
    const double a2 = std::norm(p.amplitude);
    out.amplitude = cdouble{a2, 0.0};
    SpectralProfile base = p;
    base.abs2_cdf.reset();
    out.eval = [base](double xi) { return cdouble{std::norm(base.eval(xi)), 0.0}; };
    return out;
}

namespace {

std::shared_ptr<const LogCdf> build_log_cdf(const SpectralProfile& p) {
    auto cdf = std::make_shared<LogCdf>();
    const double lo = std::max(p.support.lo, 1e-300);
    const double hi = p.support.hi;
    if (!(hi > lo)) return cdf;
    cdf->t_lo = std::log(lo);
    cdf->t_hi = std::log(hi);
    const std::size_t m = 1 << 16;
    cdf->dt = (cdf->t_hi - cdf->t_lo) / static_cast<double>(m);
    cdf->cum.resize(m + 1);
    cdf->cum[0] = 0.0;
    double prev = std::norm(p.eval(lo));
    for (std::size_t i = 1; i <= m; ++i) {
        const double t = cdf->t_lo + cdf->dt * static_cast<double>(i);
        const double cur = std::norm(p.eval(std::exp(t)));
        cdf->cum[i] = cdf->cum[i - 1] + 0.5 * (prev + cur) * cdf->dt;
        prev = cur;
    }
    return cdf;
}

}  // namespace

double abs2_log_integral(const SpectralProfile& p, double t0, double t1) {
    if (p.empty() || !(t1 > t0)) return 0.0;
    if (!(p.support.hi > 0.0)) return 0.0;
    if (p.piecewise_constant) {
        const double lo = std::max(p.support.lo, 1e-300);
        const double a = std::max(t0, std::log(lo));
        const double b = std::min(t1, std::log(p.support.hi));
        return b > a ? std::norm(p.amplitude) * (b - a) : 0.0;
    }
    if (!p.abs2_cdf) p.abs2_cdf = build_log_cdf(p);
    return p.abs2_cdf->eval(t1) - p.abs2_cdf->eval(t0);
}

double calderon_constant(const SpectralProfile& p, bool* diverged) {
    if (diverged) *diverged = false;
    if (p.empty()) return 0.0;
    bool touches_zero = p.support.lo <= 1e-300;
    if (touches_zero && std::abs(p.value(std::max(p.support.hi, 1.0) * 1e-12)) > 0.0 && diverged)
        *diverged = true;
    const double inf = std::numeric_limits<double>::infinity();
    return abs2_log_integral(p, -inf, inf);
}

std::vector<cdouble> inverse_fourier_samples(const SpectralProfile& p, const Axis& axis,
                                             std::size_t oversample) {
    std::vector<cdouble> out(axis.n, cdouble{0.0, 0.0});
    if (p.empty()) return out;

    if (p.piecewise_constant) {
        const double lo = p.support.lo;
        const double hi = p.support.hi;
        if (!(hi > lo)) return out;
        const cdouble amp = p.amplitude;
        for (std::size_t j = 0; j < axis.n; ++j) {
            const double x = axis.at(j);
            if (p.two_sided) {
                // integral over lo <= |xi| <= hi of e^{2 pi i x xi}
                out[j] = amp * (2.0 * hi * sinc(two_pi * hi * x) - 2.0 * lo * sinc(two_pi * lo * x));
            } else {
                const double w = hi - lo;
                const double c = 0.5 * (hi + lo);
                const cdouble phase{std::cos(two_pi * x * c), std::sin(two_pi * x * c)};
                out[j] = amp * phase * (w * sinc(pi * x * w));
            }
        }
        return out;
    }

    // Zero-padded fine-grid FFT. The aliasing period is oversample * span.
    const double max_freq = p.two_sided ? p.support.hi : std::max(std::abs(p.support.lo), std::abs(p.support.hi));
    if (max_freq > axis.nyquist() * (1.0 + 1e-12))
        throw std::domain_error("inverse_fourier_samples: profile exceeds axis Nyquist band");

    std::size_t m = 1;
    while (m < axis.n * oversample) m <<= 1;
    const double dxi = 1.0 / (static_cast<double>(m) * axis.dx);
    std::vector<cdouble> spec(m, cdouble{0.0, 0.0});
    // bin k holds frequency k*dxi for k < m/2, (k - m)*dxi otherwise
    for (std::size_t k = 0; k < m; ++k) {
        const double xi =
            (k < m / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(m)) * dxi;
        spec[k] = p.value(xi);
    }
    fft::inverse(spec);  // includes 1/m
    const double scale = static_cast<double>(m) * dxi;  // sum * dxi = m * dxi * ifft
    // time sample t corresponds to x = t * axis.dx (t modular)
    const auto m_d = static_cast<double>(m);
    for (std::size_t j = 0; j < axis.n; ++j) {
        const double x = axis.at(j);
        double t = std::round(x / axis.dx);
        double tm = std::fmod(t, m_d);
        if (tm < 0.0) tm += m_d;
        out[j] = spec[static_cast<std::size_t>(tm)] * scale;
    }
    return out;
}

// --- mollifier family ---

namespace {

double raw_bump(double xi) {
    const double d = 1.0 - xi * xi;
    if (d <= 0.0) return 0.0;
    return std::exp(-1.0 / d);
}

struct BumpTable {
    double norm = 1.0;        // normalizes integral to 1
    double deriv_sup = 0.0;   // sup |d/dxi of normalized bump|
    std::vector<double> cdf;  // cumulative over [-1, 1], m+1 entries
    double dt = 0.0;

    BumpTable() {
        const std::size_t m = 1 << 15;
        dt = 2.0 / static_cast<double>(m);
        cdf.assign(m + 1, 0.0);
        double prev = raw_bump(-1.0);
        for (std::size_t i = 1; i <= m; ++i) {
            const double x = -1.0 + dt * static_cast<double>(i);
            const double cur = raw_bump(x);
            cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * dt;
            prev = cur;
        }
        norm = 1.0 / cdf.back();
        for (auto& c : cdf) c *= norm;
        // derivative of normalized bump: norm * exp(-1/(1-x^2)) * (-2x/(1-x^2)^2)
        double sup = 0.0;
        for (std::size_t i = 0; i <= m; ++i) {
            const double x = -1.0 + dt * static_cast<double>(i);
            const double d = 1.0 - x * x;
            if (d <= 1e-12) continue;
            sup = std::max(sup, std::abs(norm * raw_bump(x) * (-2.0 * x / (d * d))));
        }
        deriv_sup = sup;
    }

    double cdf_at(double t) const {
        if (t <= -1.0) return 0.0;
        if (t >= 1.0) return 1.0;
        const double u = (t + 1.0) / dt;
        const auto i = static_cast<std::size_t>(u);
        if (i + 1 >= cdf.size()) return 1.0;
        const double frac = u - static_cast<double>(i);
        return cdf[i] * (1.0 - frac) + cdf[i + 1] * frac;
    }
};

const BumpTable& bump_table() {
    static BumpTable t;
    return t;
}

}  // namespace

double bump_value(double xi) { return bump_table().norm * raw_bump(xi); }
double bump_cdf(double t) { return bump_table().cdf_at(t); }
double bump_derivative_sup() { return bump_table().deriv_sup; }

SpectralProfile mollifier(double eps, double omega) {
    if (!(eps > 0.0 && eps < omega)) throw std::domain_error("mollifier: need 0 < eps < omega");
    SpectralProfile p;
    p.two_sided = true;
    p.support = {0.0, omega + eps};
    p.eval = [eps, omega](double xi) {
        // (h_eps conv chi_[-w,w])(xi) = H((xi+w)/eps) - H((xi-w)/eps)
        const double v = bump_cdf((xi + omega) / eps) - bump_cdf((xi - omega) / eps);
        return cdouble{v, 0.0};
    };
    return p;
}

}  // namespace voicelab
