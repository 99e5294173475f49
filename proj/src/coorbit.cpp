#include "voicelab/coorbit.hpp"

#include <cmath>
#include <stdexcept>

#include "voicelab/fft.hpp"

namespace voicelab {

namespace {

Signal1D signal_from_line_field(const VoiceField& f) {
    Signal1D s = make_signal(f.grid->b_axis);
    s.samples = f.values;
    return s;
}

double weighted_rel_residual(const VoiceField& result, const VoiceField& reference) {
    const GroupGrid& g = *reference.grid;
    std::vector<double> dd(reference.values.size()), rr(reference.values.size());
    std::size_t idx = 0;
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia)
            for (std::size_t il = 0; il < g.n_phi; ++il, ++idx) {
                const double w = g.quad_weight(ib, ia, il);
                const std::size_t j = g.index(ib, ia, il);
                dd[idx] = std::norm(result.values[j] - reference.values[j]) * w;
                rr[idx] = std::norm(reference.values[j]) * w;
            }
    const double d = std::sqrt(pairwise_sum(dd));
    const double r = std::sqrt(pairwise_sum(rr));
    return r > 0.0 ? d / r : d;
}

/// (F conv K)^(omega, a) = sqrt(a) conj(u_hat(a omega)) *
///     sum_l w_l sqrt(alpha_l) u_hat(alpha_l omega) F_hat(omega, alpha_l)
VoiceField wavelet_kernel_convolve(const VoiceField& F, const SpectralProfile& atom) {
    const GroupGrid& g = *F.grid;
    const Axis freq{-static_cast<double>(g.n_b() / 2) * g.b_axis.freq_step(),
                    g.b_axis.freq_step(), g.n_b()};

    Signal1D carrier = make_signal(g.b_axis);
    std::vector<cdouble> acc(g.n_b(), cdouble{0.0, 0.0});
    SpectralProfile slice_spec;
    for (std::size_t l = 0; l < g.n_a(); ++l) {
        for (std::size_t ib = 0; ib < g.n_b(); ++ib) carrier.samples[ib] = F.at(ib, l);
        slice_spec = fourier(carrier);
        const double alpha = g.a_nodes[l];
        const double w = g.a_weights[l] * std::sqrt(alpha);
        for (std::size_t m = 0; m < freq.n; ++m)
            acc[m] += w * atom.value(alpha * freq.at(m)) * slice_spec.values[m];
    }

    VoiceField out = make_field(F.grid);
    for (std::size_t k = 0; k < g.n_a(); ++k) {
        const double a = g.a_nodes[k];
        const double ra = std::sqrt(a);
        SpectralProfile ghat = slice_spec;  // reuse axis metadata
        for (std::size_t m = 0; m < freq.n; ++m)
            ghat.values[m] = ra * std::conj(atom.value(a * freq.at(m))) * acc[m];
        const Signal1D s = inv_fourier(ghat);
        for (std::size_t ib = 0; ib < g.n_b(); ++ib) out.at(ib, k) = s.samples[ib];
    }
    return out;
}

VoiceField translation_kernel_convolve(const VoiceField& F, const SpectralProfile& atom) {
    Signal1D carrier = signal_from_line_field(F);
    SpectralProfile spec = fourier(carrier);
    for (std::size_t m = 0; m < spec.axis.n; ++m)
        spec.values[m] *= std::norm(atom.value(spec.axis.at(m)));
    const Signal1D s = inv_fourier(spec);
    VoiceField out = make_field(F.grid);
    out.values = s.samples;
    return out;
}

VoiceField convolve_with_kernel(const VoiceField& F, const VoiceField& K) {
    if (K.kernel_info) {
        const Representation& rep = K.kernel_info->rep;
        switch (rep.kind) {
            case RepKind::Translation: return translation_kernel_convolve(F, rep.atom);
            case RepKind::Wavelet: return wavelet_kernel_convolve(F, rep.atom);
            case RepKind::Schrodingerlet: {
                const ModeField fm = project_modes(F);
                ModeField result;
                for (const auto& [n, fn] : fm) {
                    auto it = rep.mode_atoms.find(n);
                    if (it == rep.mode_atoms.end()) continue;
                    result.emplace(n, wavelet_kernel_convolve(fn, it->second));
                }
                return assemble_modes(result, F.grid);
            }
        }
    }
    // generic interpolating engine
    switch (F.grid->spec.kind) {
        case GroupKind::Line: {
            const Signal1D full = convolve_line(signal_from_line_field(F), signal_from_line_field(K));
            VoiceField out = make_field(F.grid);
            const std::size_t offset = F.grid->n_b() / 2;
            for (std::size_t ib = 0; ib < F.grid->n_b(); ++ib)
                out.values[ib] = full.samples[ib + offset];
            return out;
        }
        case GroupKind::Affine: return convolve_affine(F, K);
        case GroupKind::AffineCircle: {
            const ModeField fm = project_modes(F);
            const ModeField km = project_modes(K);
            return assemble_modes(convolve_affine_circle(fm, km), F.grid);
        }
    }
    throw std::logic_error("convolve_with_kernel: unreachable");
}

}  // namespace

std::pair<VoiceField, double> reproduce(const VoiceField& F, const VoiceField& K) {
    if (F.grid->spec.kind != K.grid->spec.kind)
        throw std::invalid_argument("reproduce: fields on different groups");
    VoiceField projected = convolve_with_kernel(F, K);
    const double residual = weighted_rel_residual(projected, F);
    return {std::move(projected), residual};
}

namespace {

template <typename SignalT>
CoorbitReport coorbit_impl(const SignalT& v, const Representation& rep, GridPtr grid, double p,
                           const Weight& w, double comparison) {
    if (!(p >= 1.0)) throw std::domain_error("coorbit_norm: p must satisfy p >= 1");
    const VoiceField vf = voice(v, rep, grid);
    const VoiceField K = kernel(rep, grid);
    CoorbitReport rep_out;
    rep_out.p = p;
    rep_out.coorbit_norm = lp_norm(vf, p, w);
    rep_out.membership_residual = reproduce(vf, K).second;
    rep_out.comparison_norm = comparison;
    return rep_out;
}

}  // namespace

CoorbitReport coorbit_norm_report(const Signal1D& v, const Representation& rep, GridPtr grid,
                                  double p, const Weight& w) {
    const double cmp = std::isinf(p) ? v.norm_lp(p) : v.norm_lp(p);
    return coorbit_impl(v, rep, std::move(grid), p, w, cmp);
}

CoorbitReport coorbit_norm_report(const Signal2D& v, const Representation& rep, GridPtr grid,
                                  double p, const Weight& w) {
    return coorbit_impl(v, rep, std::move(grid), p, w, 0.0);
}

IntegrabilityRow profile_verdict(double p, const std::vector<WindowPoint>& profile,
                                 const IntegrabilityThresholds& thresholds) {
    if (profile.size() < 2) throw std::invalid_argument("profile_verdict: need >= 2 windows");
    IntegrabilityRow row;
    row.p = p;
    const double last = profile.back().partial_norm;
    const double prev = profile[profile.size() - 2].partial_norm;
    row.final_norm = last;
    row.last_increment = last > 0.0 ? (last - prev) / last : 0.0;
    if (row.last_increment > thresholds.divergent_above)
        row.verdict = "divergent";
    else if (row.last_increment < thresholds.convergent_below)
        row.verdict = "convergent";
    else
        row.verdict = "indeterminate";
    return row;
}

std::vector<IntegrabilityRow> integrability_profile(const VoiceField& K,
                                                    const std::vector<double>& ps, const Weight& w,
                                                    const std::vector<double>& windows,
                                                    const IntegrabilityThresholds& thresholds) {
    std::vector<IntegrabilityRow> rows;
    rows.reserve(ps.size());
    for (double p : ps) {
        if (!(p >= 1.0)) throw std::domain_error("integrability_profile: p must satisfy p >= 1");
        rows.push_back(profile_verdict(p, window_profile(K, p, windows, w), thresholds));
    }
    return rows;
}

}  // namespace voicelab
