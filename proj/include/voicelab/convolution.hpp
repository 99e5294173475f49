#pragma once

#include <map>
#include <string>

#include "voicelab/grid.hpp"
#include "voicelab/signal.hpp"

namespace voicelab {

/// theta-mode decomposition of a field on (R x| R_+) x S^1: mode index -> 2-D
/// field on the shared affine grid. Circle convolution is diagonal in modes.
using ModeField = std::map<int, VoiceField>;

/// Measurements attached to a convolution bound or identity check.
/// slack = bound - achieved and must stay >= -1e-9 for certified inequalities.
struct ConvReport {
    std::string name;
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    double norm_f = 0.0;
    double norm_g = 0.0;
    double norm_g_check = 0.0;
    double norm_result = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    bool convolvable = true;
    std::map<std::string, double> residuals;
};

// --- group translation / involution operators ---

/// lambda(x) f (y) = f(x^{-1} y). Exact index shift for grid-aligned x,
/// band-limited resampling otherwise.
Signal1D translate_left(const Signal1D& f, double shift);
Signal1D check_inverse(const Signal1D& f);  // f(-x), exact reflection

VoiceField translate_left(const VoiceField& f, const GroupElement& x);
VoiceField translate_right(const VoiceField& f, const GroupElement& x);  // rho(x) f (y) = f(yx)
VoiceField check_inverse(const VoiceField& f);                           // f(y^{-1})

// --- convolutions ---

/// Linear (zero-padded) convolution on R via spectral multiplication;
/// the result covers the full support (length 2N-1).
Signal1D convolve_line(const Signal1D& f, const Signal1D& g);

/// Group convolution on the affine group:
/// (F conv G)(b,a) = integral F(beta,alpha) G((b-beta)/alpha, a/alpha)
///                   dbeta dalpha / alpha^2,
/// realized as per-target-scale FFT convolutions over the b-axis and exact
/// cell-mass quadrature over alpha, with G slices rescaled by band-limited
/// interpolation and scale-snapped log-linearly between grid slices.
VoiceField convolve_affine(const VoiceField& F, const VoiceField& G);

/// Per-mode affine convolution: (F conv G)_n = F_n conv G_n over the shared
/// mode set. All mode fields must share one grid.
ModeField convolve_affine_circle(const ModeField& F, const ModeField& G);

// --- property suites ---

/// Residuals of the translation/involution/associativity identities on R.
/// `shift` should be grid-aligned for roundoff-level residuals.
ConvReport algebra_check(const Signal1D& f, const Signal1D& g, const Signal1D& h, double shift);

/// Same identities on the affine group at the group element x.
ConvReport algebra_check(const VoiceField& f, const VoiceField& g, const VoiceField& h,
                         const GroupElement& x);

/// Young inequality report for exponents (p, q): 1/r = 1/p + 1/q - 1.
/// Throws std::domain_error when 1/p + 1/q < 1.
ConvReport young_suite(const Signal1D& f, const Signal1D& g, double p, double q);
ConvReport young_suite(const VoiceField& f, const VoiceField& g, double p, double q);

}  // namespace voicelab
