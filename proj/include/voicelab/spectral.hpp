#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "voicelab/common.hpp"

namespace voicelab {

struct LogCdf;

/// A function on the frequency axis. Atoms are analytic evaluators with
/// support metadata; spectra of sampled signals use the sampled backing.
///
/// two_sided == true means the profile is even in xi: `eval` receives |xi|
/// and `support` describes the positive side. two_sided == false means
/// `eval` receives xi as-is and `support` is literal (it may include
/// negative frequencies, e.g. for sampled signal spectra).
struct SpectralProfile {
    bool two_sided = false;
    Interval support{0.0, 0.0};
    std::function<cdouble(double)> eval;

    // Set when the profile is a constant `amplitude` on a single interval;
    // enables closed-form inverse transforms and exact log-integrals.
    bool piecewise_constant = false;
    cdouble amplitude{1.0, 0.0};

    // Sampled backing (eval wraps the interpolator when set).
    Axis axis{};
    std::vector<cdouble> values;
    double time_origin = 0.0;  // x0 of the signal a sampled spectrum came from

    mutable std::shared_ptr<const LogCdf> abs2_cdf;  // lazy cache

    cdouble value(double xi) const;
    bool empty() const { return !(support.hi > support.lo) && !piecewise_constant; }
};

/// chi on [lo, hi] (positive side when two_sided).
SpectralProfile indicator_band(double lo, double hi, bool two_sided, cdouble amplitude = 1.0);

/// exp(-log^2(xi/xi0) / (2 s^2)); even in xi when two_sided.
SpectralProfile lognormal_band(double xi0, double s, bool two_sided);

/// One-sided Gaussian bump exp(-(xi-center)^2/(2 sigma^2)) restricted to xi > 0.
SpectralProfile gaussian_band(double center, double sigma);

/// Sampled profile on a uniform frequency axis (support from nonzero entries).
SpectralProfile sampled_profile(Axis axis, std::vector<cdouble> values);

/// u_hat(xi / s): support scales by s, Calderon constant is unchanged.
SpectralProfile dilated(const SpectralProfile& p, double s);

/// |u_hat|^2 as a profile.
SpectralProfile abs_squared(const SpectralProfile& p);

/// integral of |value(e^t)|^2 dt over [t0, t1] intersected with the support,
/// positive side. Exact for piecewise-constant profiles, near machine
/// precision for smooth ones (dense tabulated cumulative).
double abs2_log_integral(const SpectralProfile& p, double t0, double t1);

/// Calderon constant: integral over xi > 0 of |u_hat(xi)|^2 dxi/xi.
/// Sets *diverged when the support touches xi = 0 with nonzero mass.
double calderon_constant(const SpectralProfile& p, bool* diverged = nullptr);

/// Samples of the inverse Fourier transform (e^{+2 pi i x xi} convention) on
/// the given time axis. Closed form for piecewise-constant profiles, finely
/// zero-padded FFT otherwise. `oversample` controls the aliasing period.
std::vector<cdouble> inverse_fourier_samples(const SpectralProfile& p, const Axis& axis,
                                             std::size_t oversample = 16);

// --- mollifier family (band-limiting of indicators by a C^inf bump) ---

/// Pinned bump h_hat(xi) = c exp(-1/(1-xi^2)) on (-1,1), unit integral.
double bump_value(double xi);
double bump_cdf(double t);
double bump_derivative_sup();

/// g_eps_hat = h_eps_hat conv chi_[-omega, omega]; requires 0 < eps < omega.
/// Satisfies chi_[-w+e, w-e] <= g_eps_hat <= chi_[-w-e, w+e].
SpectralProfile mollifier(double eps, double omega);

}  // namespace voicelab
