#pragma once

#include <map>
#include <optional>
#include <vector>

#include "voicelab/common.hpp"
#include "voicelab/spectral.hpp"

namespace voicelab {

/// Complex samples on a uniform axis, with optional band metadata
/// (spectral support interval established by a band-limiting step).
struct Signal1D {
    Axis axis;
    std::vector<cdouble> samples;
    std::optional<Interval> band;

    double norm_l2() const;
    double norm_lp(double p) const;
};

Signal1D make_signal(const Axis& axis);

/// Signals on R x S^1 stored as theta-Fourier modes v_n; the 2-D norm is
/// defined through the mode Parseval identity ||v||^2 = sum_n ||v_n||^2.
struct Signal2D {
    std::map<int, Signal1D> modes;
    int truncation_radius = 0;
    double truncation_error_sq = 0.0;  // mass dropped beyond the radius, when known

    double norm_l2() const;
};

/// Unitary Fourier transform with the e^{-2 pi i x xi} convention,
/// returning samples on the centered frequency axis. N must be a power of two.
SpectralProfile fourier(const Signal1D& f);

/// Inverse of `fourier`; recovers the signal on its original time axis.
Signal1D inv_fourier(const SpectralProfile& spectrum);

/// Raw samples v(x_j, theta_l) on a uniform theta grid -> theta-Fourier modes
/// n in [-n_theta/2, n_theta/2). Throws if the theta grid is not uniform.
Signal2D theta_modes(const Axis& x_axis, const std::vector<double>& theta_nodes,
                     const std::vector<cdouble>& values);

/// Mode resummation back onto a uniform theta grid (exact inverse of
/// theta_modes on the same grid).
std::vector<cdouble> resum_modes(const Signal2D& v, std::size_t n_theta);

/// Spectrum multiplied by the (closed) indicator of Omega; sets band
/// metadata; idempotent. Throws std::domain_error if Omega exceeds Nyquist.
Signal1D bandlimit_project(const Signal1D& f, const Interval& omega);

/// Samples of K(b) = 2 omega sinc(2 omega pi b); band [-omega, omega].
Signal1D sinc_kernel(double omega, const Axis& axis);

/// Real Shannon wavelet u(x) = sinc(pi x) - 1/2 sinc(pi x / 2);
/// u_hat = chi_{[1/4,1/2]}(|xi|).
Signal1D shannon_wavelet(const Axis& axis);

/// Random signal with spectrum envelope(xi) * complex Gaussian per bin.
Signal1D random_bandlimited_signal(const Axis& axis, const SpectralProfile& envelope, Rng& rng);

}  // namespace voicelab
