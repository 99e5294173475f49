#pragma once

#include <map>
#include <string>

#include "voicelab/convolution.hpp"
#include "voicelab/grid.hpp"
#include "voicelab/signal.hpp"
#include "voicelab/spectral.hpp"

namespace voicelab {

enum class RepKind { Translation, Wavelet, Schrodingerlet };

std::string to_string(RepKind kind);

/// A reproducing representation together with its analyzing vector, kept as
/// spectral profiles. Translation acts on band-limited functions by shifts,
/// Wavelet is the affine-group representation on L^2(R), Schrodingerlet is
/// the (R x| R_+) x S^1 representation on positive-frequency signals split
/// into theta-modes u_n with u_n_hat(xi) = u0_hat(xi / a_n).
struct Representation {
    RepKind kind = RepKind::Translation;
    SpectralProfile atom;                       // translation / wavelet atom
    Interval omega{-0.5, 0.5};                  // translation band
    std::map<int, SpectralProfile> mode_atoms;  // schrodingerlet modes
    std::map<int, double> mode_scale;           // decay a_n
    bool normalized = false;
};

Representation translation_rep(double omega);                     // u = sinc kernel
Representation translation_rep(double omega, SpectralProfile u);  // custom unimodular atom
Representation wavelet_rep(SpectralProfile atom);                 // atom must be even (two_sided)

/// Dilated mode family u_n from a one-sided mode-0 profile; a_n = decay(|n|).
Representation schrodingerlet_rep(SpectralProfile u0, double decay_ratio, int n_max);

/// Default smooth atom exp(-log^2(xi/xi0)/(2 s^2)) with xi0 = 2^{-3/2}, s = 0.15.
SpectralProfile default_wavelet_atom(bool two_sided = true);
/// chi_{[1/4,1/2]}(|xi|), the (real) Shannon wavelet spectrum.
SpectralProfile shannon_atom(bool two_sided = true);

struct AdmissibilityReport {
    std::map<int, double> calderon_constants;   // post-normalization, keyed by mode
    std::map<int, double> normalization;        // factor each mode was divided by
    double band_residual = 0.0;                 // translation: max | |u_hat| - 1 | on Omega
    bool admissible = false;
};

/// Wavelet/Schrodingerlet: divides each mode by sqrt(Calderon constant);
/// Translation: verifies | |u_hat| - 1 | < 1e-9 on Omega (throws
/// std::domain_error when the atom cannot be admissible).
std::pair<Representation, AdmissibilityReport> normalize_admissible(const Representation& rep);

/// Sampled mode family u_n(x) = a_n u0(a_n x) with a_n = decay[|n|].
/// Requires a strictly decreasing positive decay tail. The norm estimate is
/// sum_n a_n ||u0||^2 (each dilated mode scales the squared norm by a_n).
struct SchrodingerletAtom {
    Signal2D atom;
    double norm_sq_estimate = 0.0;
};
SchrodingerletAtom build_schrodingerlet_atom(const Signal1D& u0, const std::vector<double>& decay);

/// Calderon integral over xi > 0 of |profile|^2 dxi/xi.
double calderon(const SpectralProfile& profile, bool* diverged = nullptr);

/// Structure attached to kernel fields so that convolutions against the
/// kernel can evaluate its slices at exact (continuous) scales.
struct KernelInfo {
    Representation rep;
};

// --- voice transforms ---

/// Translation / Wavelet voice transform of a 1-D signal.
VoiceField voice(const Signal1D& v, const Representation& rep, GridPtr grid);

/// Schrodingerlet voice: per-mode wavelet voices assembled over phi.
VoiceField voice(const Signal2D& v, const Representation& rep, GridPtr grid);
ModeField voice_modes(const Signal2D& v, const Representation& rep, GridPtr grid);

/// Reproducing kernel K = V u as a field (kernel_info attached).
VoiceField kernel(const Representation& rep, GridPtr grid);
ModeField kernel_modes(const Representation& rep, GridPtr grid);

/// phi-assembly of a mode field onto a 3-D grid, and the mode projection of
/// a 3-D field (exact on the uniform phi grid).
VoiceField assemble_modes(const ModeField& modes, GridPtr grid3d);
ModeField project_modes(const VoiceField& field3d);

/// 2-D affine view of a 3-D grid (shared b and a axes).
GridPtr affine_subgrid(GridPtr grid3d);

// --- synthesis and the change-of-vector formula ---

/// pi(f) u: group-quadrature synthesis of a field against the representation.
Signal1D synthesize(const VoiceField& f, const Representation& rep);
Signal2D synthesize2d(const VoiceField& f, const Representation& rep);

/// pi(x) v, sampled on v's axis via band-limited interpolation.
Signal1D group_action(const Representation& rep, const GroupElement& x, const Signal1D& v);

/// Relative residual of V_w v = V_u v conv (V_u w)-check-bar for two
/// admissible vectors of the same representation kind.
double vector_change(const Signal1D& v, const Representation& rep_u,
                     const Representation& rep_w, GridPtr grid);

// --- section 4.4 structural maps ---

struct CartesianField2D {
    Axis axis;                    // same axis both dimensions
    std::vector<cdouble> values;  // [i0 * n + i1] at (axis.at(i0), axis.at(i1))
    double norm_l2() const;
};

struct PolarField {
    Axis xi_axis;  // radial-energy coordinate xi >= 0
    std::size_t n_theta = 0;
    std::vector<cdouble> values;  // [i_xi * n_theta + l]
    double norm_l2() const;       // d(xi) x d(theta)/(2 pi)
};

/// Psi v(xi, theta) = sqrt(pi) v(sqrt(xi) cos(theta), sqrt(xi) sin(theta)).
PolarField polar_unitary(const CartesianField2D& v, std::size_t n_xi, std::size_t n_theta,
                         double xi_max);
CartesianField2D polar_unitary_inverse(const PolarField& p, const Axis& target_axis);

/// Free Schrodinger evolution F^{-1}(e^{-2 pi i b |xi|^2} f_hat).
CartesianField2D schrodinger_flow(const CartesianField2D& f, double b);

/// || (2 pi i d/db + Laplacian) flow_b f || / ||f||, with d/db by centered
/// finite difference of step h and the Laplacian applied spectrally.
double schrodinger_flow_residual(const CartesianField2D& f, double b, double h);

}  // namespace voicelab
