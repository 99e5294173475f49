#pragma once

#include <string>
#include <vector>

#include "voicelab/voice.hpp"

namespace voicelab {

/// Coorbit measurement of one signal at one exponent: the L^p_w norm of its
/// voice transform plus the reproducing-membership residual ||Vf conv K - Vf|| / ||Vf||.
struct CoorbitReport {
    double p = 0.0;
    std::string weight_id = "one";
    double coorbit_norm = 0.0;
    double membership_residual = 0.0;
    double comparison_norm = 0.0;  // signal-side L^p norm when meaningful, else 0
};

/// Right convolution with the reproducing kernel. When K carries kernel
/// structure the slices are evaluated from the analyzing atom's spectral
/// profile at exact scale ratios; otherwise the generic interpolating engine
/// runs. Returns the projected field and the relative residual.
std::pair<VoiceField, double> reproduce(const VoiceField& F, const VoiceField& K);

CoorbitReport coorbit_norm_report(const Signal1D& v, const Representation& rep, GridPtr grid,
                                  double p, const Weight& w);
CoorbitReport coorbit_norm_report(const Signal2D& v, const Representation& rep, GridPtr grid,
                                  double p, const Weight& w);

/// Window-profile convergence verdicts for a kernel field.
struct IntegrabilityRow {
    double p = 0.0;
    std::string verdict;       // "convergent", "divergent" or "indeterminate"
    double last_increment = 0.0;
    double final_norm = 0.0;
};

struct IntegrabilityThresholds {
    double divergent_above = 1e-2;
    double convergent_below = 1e-3;
};

std::vector<IntegrabilityRow> integrability_profile(const VoiceField& K,
                                                    const std::vector<double>& ps, const Weight& w,
                                                    const std::vector<double>& windows,
                                                    const IntegrabilityThresholds& thresholds = {});

/// Verdict from a finished window profile (shared Cauchy-test definition).
IntegrabilityRow profile_verdict(double p, const std::vector<WindowPoint>& profile,
                                 const IntegrabilityThresholds& thresholds = {});

}  // namespace voicelab
