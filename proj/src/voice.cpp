#include "voicelab/voice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "voicelab/fft.hpp"

namespace voicelab {

std::string to_string(RepKind kind) {
    switch (kind) {
        case RepKind::Translation: return "translation";
        case RepKind::Wavelet: return "wavelet";
        case RepKind::Schrodingerlet: return "schrodingerlet";
    }
    return "unknown";
}

namespace {

SpectralProfile scaled_profile(const SpectralProfile& p, double factor) {
    SpectralProfile out = p;
    out.abs2_cdf.reset();
    out.amplitude = p.amplitude * factor;
    SpectralProfile base = p;
    base.abs2_cdf.reset();
    out.eval = [base, factor](double xi) { return base.eval(xi) * factor; };
    if (!out.values.empty())
        for (auto& v : out.values) v *= factor;
    return out;
}

/// Spectrum of the kernel slice K(., a): xi -> sqrt(a) u_hat(xi) conj(u_hat(a xi)).
SpectralProfile kernel_slice_profile(const SpectralProfile& atom, double a) {
    SpectralProfile out;
    out.two_sided = atom.two_sided;
    out.support = {std::max(atom.support.lo, atom.support.lo / a),
                   std::min(atom.support.hi, atom.support.hi / a)};
    const double ra = std::sqrt(a);
    if (atom.piecewise_constant) {
        out.piecewise_constant = true;
        out.amplitude = ra * std::norm(atom.amplitude);
        out.eval = [amp = out.amplitude](double) { return amp; };
        if (!(out.support.hi > out.support.lo)) out.support = {0.0, 0.0};
        return out;
    }
    SpectralProfile base = atom;
    base.abs2_cdf.reset();
    out.eval = [base, a, ra](double xi) { return ra * base.eval(xi) * std::conj(base.eval(a * xi)); };
    if (!(out.support.hi > out.support.lo)) out.support = {0.0, 0.0};
    return out;
}

void require_kind(const GroupGrid& g, GroupKind kind, const char* what) {
    if (g.spec.kind != kind) throw std::domain_error(std::string(what) + ": wrong grid kind");
}

Axis centered_freq_axis(const Axis& time_axis) {
    const double dxi = time_axis.freq_step();
    return Axis{-static_cast<double>(time_axis.n / 2) * dxi, dxi, time_axis.n};
}

}  // namespace

Representation translation_rep(double omega) {
    if (!(omega > 0.0)) throw std::domain_error("translation_rep: omega must be positive");
    Representation rep;
    rep.kind = RepKind::Translation;
    rep.omega = Interval{-omega, omega};
    rep.atom = indicator_band(0.0, omega, /*two_sided=*/true);
    rep.normalized = true;
    return rep;
}

Representation translation_rep(double omega, SpectralProfile u) {
    if (!(omega > 0.0)) throw std::domain_error("translation_rep: omega must be positive");
    Representation rep;
    rep.kind = RepKind::Translation;
    rep.omega = Interval{-omega, omega};
    rep.atom = std::move(u);
    return rep;
}

Representation wavelet_rep(SpectralProfile atom) {
    if (!atom.two_sided)
        throw std::invalid_argument("wavelet_rep: atom spectrum must be even (two_sided)");
    Representation rep;
    rep.kind = RepKind::Wavelet;
    rep.atom = std::move(atom);
    return rep;
}

Representation schrodingerlet_rep(SpectralProfile u0, double decay_ratio, int n_max) {
    if (u0.two_sided)
        throw std::invalid_argument("schrodingerlet_rep: mode profiles must be one-sided (xi > 0)");
    if (u0.support.lo <= 0.0)
        throw std::invalid_argument("schrodingerlet_rep: mode-0 support must avoid xi = 0");
    if (!(decay_ratio > 0.0 && decay_ratio < 1.0))
        throw std::invalid_argument("schrodingerlet_rep: decay ratio must lie in (0,1)");
    if (n_max < 0) throw std::invalid_argument("schrodingerlet_rep: n_max must be >= 0");
    Representation rep;
    rep.kind = RepKind::Schrodingerlet;
    rep.atom = u0;
    for (int n = -n_max; n <= n_max; ++n) {
        const double a_n = std::pow(decay_ratio, std::abs(n));
        rep.mode_scale[n] = a_n;
        rep.mode_atoms[n] = dilated(u0, a_n);
    }
    return rep;
}

SpectralProfile default_wavelet_atom(bool two_sided) {
    return lognormal_band(std::pow(2.0, -1.5), 0.15, two_sided);
}

SpectralProfile shannon_atom(bool two_sided) { return indicator_band(0.25, 0.5, two_sided); }

double calderon(const SpectralProfile& profile, bool* diverged) {
    return calderon_constant(profile, diverged);
}

std::pair<Representation, AdmissibilityReport> normalize_admissible(const Representation& rep) {
    Representation out = rep;
    AdmissibilityReport report;
    if (rep.kind == RepKind::Translation) {
        // no rescaling can fix a non-unimodular spectrum on Omega
        double worst = 0.0;
        const std::size_t m = 4096;
        const double hi = std::max(std::abs(rep.omega.lo), rep.omega.hi);
        for (std::size_t i = 0; i <= m; ++i) {
            const double xi = rep.omega.lo + (rep.omega.hi - rep.omega.lo) *
                                                 static_cast<double>(i) / static_cast<double>(m);
            (void)hi;
            worst = std::max(worst, std::abs(std::abs(rep.atom.value(xi)) - 1.0));
        }
        report.band_residual = worst;
        report.admissible = worst < 1e-9;
        if (!report.admissible)
            throw std::domain_error("normalize_admissible: |u_hat| != 1 on Omega");
        out.normalized = true;
        report.calderon_constants[0] = 1.0;
        report.normalization[0] = 1.0;
        return {out, report};
    }

    auto normalize_one = [&](const SpectralProfile& p, int key) {
        bool diverged = false;
        const double c = calderon_constant(p, &diverged);
        if (!(c > 0.0) || diverged)
            throw std::domain_error("normalize_admissible: zero or divergent Calderon constant");
        SpectralProfile scaled = scaled_profile(p, 1.0 / std::sqrt(c));
        report.normalization[key] = std::sqrt(c);
        report.calderon_constants[key] = calderon_constant(scaled);
        return scaled;
    };

    if (rep.kind == RepKind::Wavelet) {
        out.atom = normalize_one(rep.atom, 0);
    } else {
        out.atom = normalize_one(rep.atom, 0);
        for (auto& [n, p] : out.mode_atoms) p = normalize_one(rep.mode_atoms.at(n), n);
    }
    out.normalized = true;
    report.admissible = true;
    for (const auto& [n, c] : report.calderon_constants)
        if (std::abs(c - 1.0) > 1e-6) report.admissible = false;
    return {out, report};
}

SchrodingerletAtom build_schrodingerlet_atom(const Signal1D& u0, const std::vector<double>& decay) {
    if (decay.empty()) throw std::invalid_argument("build_schrodingerlet_atom: empty decay");
    for (std::size_t k = 0; k < decay.size(); ++k) {
        if (!(decay[k] > 0.0))
            throw std::invalid_argument("build_schrodingerlet_atom: decay must be positive");
        if (k > 0 && !(decay[k] < decay[k - 1]))
            throw std::invalid_argument(
                "build_schrodingerlet_atom: decay must be strictly decreasing (summable tail)");
    }

    auto grid = std::make_shared<GroupGrid>();
    grid->spec.kind = GroupKind::Line;
    grid->b_axis = u0.axis;
    grid->a_nodes = {1.0};
    grid->a_weights = {1.0};
    grid->n_phi = 1;
    VoiceField wrap = make_field(grid);
    wrap.values = u0.samples;
    OversampledField res(wrap);

    SchrodingerletAtom out;
    const int n_max = static_cast<int>(decay.size()) - 1;
    out.atom.truncation_radius = n_max;
    const double u0_sq = u0.norm_l2() * u0.norm_l2();
    std::vector<double> masses;
    for (int n = -n_max; n <= n_max; ++n) {
        const double a_n = decay[static_cast<std::size_t>(std::abs(n))];
        Signal1D un = make_signal(u0.axis);
        for (std::size_t j = 0; j < u0.axis.n; ++j)
            un.samples[j] = a_n * res.sample_b(0, 0, a_n * u0.axis.at(j));
        out.atom.modes.emplace(n, std::move(un));
        masses.push_back(a_n * u0_sq);
    }
    out.norm_sq_estimate = pairwise_sum(masses);
    return out;
}

// --- voice transforms ---

namespace {

void require_signal_on_grid(const Signal1D& v, const GroupGrid& g) {
    if (v.axis.n != g.b_axis.n || std::abs(v.axis.x0 - g.b_axis.x0) > 1e-9 ||
        std::abs(v.axis.dx - g.b_axis.dx) > 1e-12)
        throw std::domain_error("signal axis does not match the grid b-axis");
}

VoiceField voice_translation(const Signal1D& v, const Representation& rep, GridPtr grid) {
    require_kind(*grid, GroupKind::Line, "voice(translation)");
    require_signal_on_grid(v, *grid);
    SpectralProfile spec = fourier(v);
    for (std::size_t m = 0; m < spec.axis.n; ++m)
        spec.values[m] *= std::conj(rep.atom.value(spec.axis.at(m)));
    const Signal1D w = inv_fourier(spec);
    VoiceField out = make_field(std::move(grid));
    out.values = w.samples;
    return out;
}

VoiceField voice_wavelet(const Signal1D& v, const Representation& rep, GridPtr grid) {
    require_kind(*grid, GroupKind::Affine, "voice(wavelet)");
    require_signal_on_grid(v, *grid);
    const SpectralProfile vhat = fourier(v);
    const GroupGrid& g = *grid;
    VoiceField out = make_field(grid);

    SpectralProfile slice = vhat;  // reuse axis/time_origin
    for (std::size_t k = 0; k < g.n_a(); ++k) {
        const double a = g.a_nodes[k];
        const double ra = std::sqrt(a);
        for (std::size_t m = 0; m < vhat.axis.n; ++m) {
            const double xi = vhat.axis.at(m);
            slice.values[m] = vhat.values[m] * ra * std::conj(rep.atom.value(a * xi));
        }
        const Signal1D w = inv_fourier(slice);
        for (std::size_t ib = 0; ib < g.n_b(); ++ib) out.at(ib, k) = w.samples[ib];
    }
    return out;
}

}  // namespace

GridPtr affine_subgrid(GridPtr grid3d) {
    if (grid3d->spec.kind == GroupKind::Affine) return grid3d;
    require_kind(*grid3d, GroupKind::AffineCircle, "affine_subgrid");
    auto g = std::make_shared<GroupGrid>(*grid3d);
    g->spec.kind = GroupKind::Affine;
    g->n_phi = 1;
    return g;
}

VoiceField voice(const Signal1D& v, const Representation& rep, GridPtr grid) {
    switch (rep.kind) {
        case RepKind::Translation: return voice_translation(v, rep, std::move(grid));
        case RepKind::Wavelet: return voice_wavelet(v, rep, std::move(grid));
        default: throw std::domain_error("voice: schrodingerlet representation needs a Signal2D");
    }
}

ModeField voice_modes(const Signal2D& v, const Representation& rep, GridPtr grid) {
    if (rep.kind != RepKind::Schrodingerlet)
        throw std::domain_error("voice_modes: schrodingerlet representation expected");
    GridPtr sub = affine_subgrid(std::move(grid));
    ModeField out;
    for (const auto& [n, vn] : v.modes) {
        auto it = rep.mode_atoms.find(n);
        if (it == rep.mode_atoms.end()) continue;
        Representation mode_rep;
        mode_rep.kind = RepKind::Wavelet;
        mode_rep.atom = it->second;
        out.emplace(n, voice_wavelet(vn, mode_rep, sub));
    }
    return out;
}

VoiceField assemble_modes(const ModeField& modes, GridPtr grid3d) {
    require_kind(*grid3d, GroupKind::AffineCircle, "assemble_modes");
    const GroupGrid& g = *grid3d;
    VoiceField out = make_field(grid3d);
    for (const auto& [n, fn] : modes) {
        if (fn.grid->n_b() != g.n_b() || fn.grid->n_a() != g.n_a())
            throw std::invalid_argument("assemble_modes: mode grid mismatch");
        for (std::size_t il = 0; il < g.n_phi; ++il) {
            const double ang = static_cast<double>(n) * g.phi_node(il);
            const cdouble ph{std::cos(ang), std::sin(ang)};
            for (std::size_t ib = 0; ib < g.n_b(); ++ib)
                for (std::size_t ia = 0; ia < g.n_a(); ++ia)
                    out.at(ib, ia, il) += fn.at(ib, ia) * ph;
        }
    }
    return out;
}

ModeField project_modes(const VoiceField& field3d) {
    const GroupGrid& g = *field3d.grid;
    require_kind(g, GroupKind::AffineCircle, "project_modes");
    GridPtr sub = affine_subgrid(field3d.grid);
    ModeField out;
    const int half = static_cast<int>(g.n_phi) / 2;
    for (int n = -half; n < half; ++n) {
        VoiceField fn = make_field(sub);
        for (std::size_t ib = 0; ib < g.n_b(); ++ib)
            for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
                cdouble acc{0.0, 0.0};
                for (std::size_t il = 0; il < g.n_phi; ++il) {
                    const double ang = -static_cast<double>(n) * g.phi_node(il);
                    acc += field3d.at(ib, ia, il) * cdouble{std::cos(ang), std::sin(ang)};
                }
                fn.at(ib, ia) = acc * g.phi_weight();
            }
        out.emplace(n, std::move(fn));
    }
    return out;
}

VoiceField voice(const Signal2D& v, const Representation& rep, GridPtr grid) {
    ModeField modes = voice_modes(v, rep, grid);
    return assemble_modes(modes, std::move(grid));
}

// --- kernels ---

ModeField kernel_modes(const Representation& rep, GridPtr grid) {
    if (rep.kind != RepKind::Schrodingerlet)
        throw std::domain_error("kernel_modes: schrodingerlet representation expected");
    GridPtr sub = affine_subgrid(grid);
    const GroupGrid& g = *sub;

    // mode-0 kernel on a 16x fine b-axis; K_n(b,a) = a_n K_0(a_n b, a)
    const std::size_t fine_n = g.n_b() * 16;
    const Axis fine_axis{g.b_axis.x0, g.b_axis.dx / 16.0, fine_n};

    ModeField out;
    for (const auto& [n, an] : rep.mode_scale) out.emplace(n, make_field(sub));

    for (std::size_t k = 0; k < g.n_a(); ++k) {
        const SpectralProfile slice = kernel_slice_profile(rep.atom, g.a_nodes[k]);
        const std::vector<cdouble> fine = inverse_fourier_samples(slice, fine_axis, 4);
        for (auto& [n, field] : out) {
            const double an = rep.mode_scale.at(n);
            for (std::size_t ib = 0; ib < g.n_b(); ++ib) {
                const double t = an * g.b_axis.at(ib);
                const double u = (t - fine_axis.x0) / fine_axis.dx;
                cdouble val{0.0, 0.0};
                if (u >= 0.0 && u < static_cast<double>(fine_n - 1)) {
                    const auto i = static_cast<std::size_t>(u);
                    const double frac = u - static_cast<double>(i);
                    val = fine[i] * (1.0 - frac) + fine[i + 1] * frac;
                }
                field.at(ib, k) = an * val;
            }
        }
    }
    auto info = std::make_shared<KernelInfo>();
    info->rep = rep;
    for (auto& [n, field] : out) field.kernel_info = info;
    return out;
}

VoiceField kernel(const Representation& rep, GridPtr grid) {
    VoiceField out;
    switch (rep.kind) {
        case RepKind::Translation: {
            require_kind(*grid, GroupKind::Line, "kernel(translation)");
            out = make_field(grid);
            out.values = inverse_fourier_samples(abs_squared(rep.atom), grid->b_axis);
            break;
        }
        case RepKind::Wavelet: {
            require_kind(*grid, GroupKind::Affine, "kernel(wavelet)");
            out = make_field(grid);
            const GroupGrid& g = *grid;
            for (std::size_t k = 0; k < g.n_a(); ++k) {
                const SpectralProfile slice = kernel_slice_profile(rep.atom, g.a_nodes[k]);
                const std::vector<cdouble> vals = inverse_fourier_samples(slice, g.b_axis);
                for (std::size_t ib = 0; ib < g.n_b(); ++ib) out.at(ib, k) = vals[ib];
            }
            break;
        }
        case RepKind::Schrodingerlet: {
            require_kind(*grid, GroupKind::AffineCircle, "kernel(schrodingerlet)");
            out = assemble_modes(kernel_modes(rep, grid), grid);
            break;
        }
    }
    auto info = std::make_shared<KernelInfo>();
    info->rep = rep;
    out.kernel_info = info;
    return out;
}

// --- synthesis ---

namespace {

Signal1D synthesize_wavelet(const VoiceField& f, const SpectralProfile& atom) {
    const GroupGrid& g = *f.grid;
    Signal1D carrier = make_signal(g.b_axis);
    const Axis freq = centered_freq_axis(g.b_axis);

    std::vector<cdouble> acc(g.n_b(), cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < g.n_a(); ++k) {
        for (std::size_t ib = 0; ib < g.n_b(); ++ib) carrier.samples[ib] = f.at(ib, k);
        SpectralProfile sl = fourier(carrier);
        const double a = g.a_nodes[k];
        const double w = g.a_weights[k] * std::sqrt(a);
        for (std::size_t m = 0; m < freq.n; ++m)
            acc[m] += w * atom.value(a * freq.at(m)) * sl.values[m];
    }
    SpectralProfile ghat = sampled_profile(freq, std::move(acc));
    ghat.time_origin = g.b_axis.x0;
    return inv_fourier(ghat);
}

}  // namespace

Signal1D synthesize(const VoiceField& f, const Representation& rep) {
    switch (rep.kind) {
        case RepKind::Translation: {
            const GroupGrid& g = *f.grid;
            require_kind(g, GroupKind::Line, "synthesize(translation)");
            Signal1D carrier = make_signal(g.b_axis);
            carrier.samples = f.values;
            SpectralProfile spec = fourier(carrier);
            for (std::size_t m = 0; m < spec.axis.n; ++m)
                spec.values[m] *= rep.atom.value(spec.axis.at(m));
            return inv_fourier(spec);
        }
        case RepKind::Wavelet: {
            require_kind(*f.grid, GroupKind::Affine, "synthesize(wavelet)");
            return synthesize_wavelet(f, rep.atom);
        }
        default:
            throw std::domain_error("synthesize: use synthesize2d for the schrodingerlet kind");
    }
}

Signal2D synthesize2d(const VoiceField& f, const Representation& rep) {
    if (rep.kind != RepKind::Schrodingerlet)
        throw std::domain_error("synthesize2d: schrodingerlet representation expected");
    const ModeField modes = project_modes(f);
    Signal2D out;
    out.truncation_radius = static_cast<int>(f.grid->n_phi) / 2;
    for (const auto& [n, fn] : modes) {
        auto it = rep.mode_atoms.find(n);
        if (it == rep.mode_atoms.end()) continue;
        out.modes.emplace(n, synthesize_wavelet(fn, it->second));
    }
    return out;
}

Signal1D group_action(const Representation& rep, const GroupElement& x, const Signal1D& v) {
    if (rep.kind == RepKind::Translation) return translate_left(v, x.b);

    // affine action a^{-1/2} v((t - b)/a) via band-limited interpolation
    auto grid = std::make_shared<GroupGrid>();
    grid->spec.kind = GroupKind::Line;
    grid->b_axis = v.axis;
    grid->a_nodes = {1.0};
    grid->a_weights = {1.0};
    grid->n_phi = 1;
    VoiceField wrap = make_field(grid);
    wrap.values = v.samples;
    OversampledField res(wrap);
    Signal1D out = make_signal(v.axis);
    const double scale = 1.0 / std::sqrt(x.a);
    for (std::size_t j = 0; j < v.axis.n; ++j)
        out.samples[j] = scale * res.sample_b(0, 0, (v.axis.at(j) - x.b) / x.a);
    return out;
}

// --- change of admissible vector ---

namespace {

double field_rel_residual(const VoiceField& lhs, const VoiceField& rhs) {
    std::vector<double> dd(lhs.values.size()), rr(lhs.values.size());
    const GroupGrid& g = *lhs.grid;
    std::size_t idx = 0;
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia)
            for (std::size_t il = 0; il < g.n_phi; ++il, ++idx) {
                const double w = g.quad_weight(ib, ia, il);
                dd[idx] = std::norm(lhs.values[g.index(ib, ia, il)] - rhs.values[g.index(ib, ia, il)]) * w;
                rr[idx] = std::norm(lhs.values[g.index(ib, ia, il)]) * w;
            }
    const double d = std::sqrt(pairwise_sum(dd));
    const double r = std::sqrt(pairwise_sum(rr));
    return r > 0.0 ? d / r : d;
}

VoiceField wavelet_change_rhs(const Signal1D& v, const SpectralProfile& u,
                              const SpectralProfile& w, GridPtr grid) {
    // (V_u v conv (V_u w)-check-bar)^(omega, a)
    //   = sqrt(a) v_hat(omega) conj(w_hat(a omega)) * int |u_hat(alpha omega)|^2 dalpha/alpha
    const GroupGrid& g = *grid;
    const SpectralProfile vhat = fourier(v);
    const double t_lo = std::log(g.a_nodes.front());
    const double t_hi = std::log(g.a_nodes.back());
    VoiceField out = make_field(grid);
    SpectralProfile slice = vhat;
    for (std::size_t k = 0; k < g.n_a(); ++k) {
        const double a = g.a_nodes[k];
        const double ra = std::sqrt(a);
        for (std::size_t m = 0; m < vhat.axis.n; ++m) {
            const double xi = vhat.axis.at(m);
            double c = 0.0;
            if (xi != 0.0) {
                const double lx = std::log(std::abs(xi));
                c = abs2_log_integral(u, t_lo + lx, t_hi + lx);
            }
            slice.values[m] = vhat.values[m] * ra * std::conj(w.value(a * xi)) * c;
        }
        const Signal1D s = inv_fourier(slice);
        for (std::size_t ib = 0; ib < g.n_b(); ++ib) out.at(ib, k) = s.samples[ib];
    }
    return out;
}

}  // namespace

double vector_change(const Signal1D& v, const Representation& rep_u, const Representation& rep_w,
                     GridPtr grid) {
    if (rep_u.kind != rep_w.kind)
        throw std::invalid_argument("vector_change: representations must share a kind");
    switch (rep_u.kind) {
        case RepKind::Translation: {
            const VoiceField lhs = voice(v, rep_w, grid);
            SpectralProfile spec = fourier(v);
            for (std::size_t m = 0; m < spec.axis.n; ++m) {
                const double xi = spec.axis.at(m);
                spec.values[m] *=
                    std::conj(rep_w.atom.value(xi)) * std::norm(rep_u.atom.value(xi));
            }
            const Signal1D s = inv_fourier(spec);
            VoiceField rhs = make_field(grid);
            rhs.values = s.samples;
            return field_rel_residual(lhs, rhs);
        }
        case RepKind::Wavelet: {
            const VoiceField lhs = voice(v, rep_w, grid);
            const VoiceField rhs = wavelet_change_rhs(v, rep_u.atom, rep_w.atom, grid);
            return field_rel_residual(lhs, rhs);
        }
        default:
            throw std::domain_error("vector_change: schrodingerlet vectors not supported here");
    }
}

// --- section 4.4 structural maps ---

double CartesianField2D::norm_l2() const {
    std::vector<double> terms(values.size());
    const double w = axis.dx * axis.dx;
    for (std::size_t i = 0; i < values.size(); ++i) terms[i] = std::norm(values[i]) * w;
    return std::sqrt(pairwise_sum(terms));
}

double PolarField::norm_l2() const {
    std::vector<double> terms(values.size());
    const double w = xi_axis.dx / static_cast<double>(n_theta);
    for (std::size_t i = 0; i < values.size(); ++i) terms[i] = std::norm(values[i]) * w;
    return std::sqrt(pairwise_sum(terms));
}

namespace {

cdouble bilinear_cartesian(const CartesianField2D& v, double x, double y) {
    const Axis& ax = v.axis;
    const double u0 = (x - ax.x0) / ax.dx;
    const double u1 = (y - ax.x0) / ax.dx;
    if (u0 < 0.0 || u1 < 0.0 || u0 > static_cast<double>(ax.n - 1) ||
        u1 > static_cast<double>(ax.n - 1))
        return {0.0, 0.0};
    const auto i0 = std::min(static_cast<std::size_t>(u0), ax.n - 2);
    const auto i1 = std::min(static_cast<std::size_t>(u1), ax.n - 2);
    const double f0 = u0 - static_cast<double>(i0);
    const double f1 = u1 - static_cast<double>(i1);
    auto at = [&](std::size_t a, std::size_t b) { return v.values[a * ax.n + b]; };
    return at(i0, i1) * ((1 - f0) * (1 - f1)) + at(i0 + 1, i1) * (f0 * (1 - f1)) +
           at(i0, i1 + 1) * ((1 - f0) * f1) + at(i0 + 1, i1 + 1) * (f0 * f1);
}

}  // namespace

PolarField polar_unitary(const CartesianField2D& v, std::size_t n_xi, std::size_t n_theta,
                         double xi_max) {
    if (n_xi == 0 || n_theta == 0 || !(xi_max > 0.0))
        throw std::invalid_argument("polar_unitary: bad output grid");
    PolarField out;
    const double dxi = xi_max / static_cast<double>(n_xi);
    out.xi_axis = Axis{0.5 * dxi, dxi, n_xi};
    out.n_theta = n_theta;
    out.values.assign(n_xi * n_theta, cdouble{0.0, 0.0});
    const double rpi = std::sqrt(pi);
    for (std::size_t i = 0; i < n_xi; ++i) {
        const double r = std::sqrt(out.xi_axis.at(i));
        for (std::size_t l = 0; l < n_theta; ++l) {
            const double th = two_pi * static_cast<double>(l) / static_cast<double>(n_theta);
            out.values[i * n_theta + l] =
                rpi * bilinear_cartesian(v, r * std::cos(th), r * std::sin(th));
        }
    }
    return out;
}

CartesianField2D polar_unitary_inverse(const PolarField& p, const Axis& target_axis) {
    CartesianField2D out;
    out.axis = target_axis;
    out.values.assign(target_axis.n * target_axis.n, cdouble{0.0, 0.0});
    const double inv_rpi = 1.0 / std::sqrt(pi);
    const double dth = two_pi / static_cast<double>(p.n_theta);
    for (std::size_t i0 = 0; i0 < target_axis.n; ++i0) {
        const double x = target_axis.at(i0);
        for (std::size_t i1 = 0; i1 < target_axis.n; ++i1) {
            const double y = target_axis.at(i1);
            const double xi = x * x + y * y;
            double th = std::atan2(y, x);
            if (th < 0.0) th += two_pi;
            // bilinear in (xi, theta), theta periodic, xi clamped at the ends
            double uxi = (xi - p.xi_axis.x0) / p.xi_axis.dx;
            uxi = std::clamp(uxi, 0.0, static_cast<double>(p.xi_axis.n - 1));
            const auto ix = std::min(static_cast<std::size_t>(uxi), p.xi_axis.n - 2);
            const double fx = uxi - static_cast<double>(ix);
            const double uth = th / dth;
            const auto it = static_cast<std::size_t>(uth) % p.n_theta;
            const std::size_t it1 = (it + 1) % p.n_theta;
            const double ft = uth - std::floor(uth);
            auto at = [&](std::size_t a, std::size_t b) { return p.values[a * p.n_theta + b]; };
            const cdouble val = at(ix, it) * ((1 - fx) * (1 - ft)) + at(ix + 1, it) * (fx * (1 - ft)) +
                                at(ix, it1) * ((1 - fx) * ft) + at(ix + 1, it1) * (fx * ft);
            out.values[i0 * target_axis.n + i1] = inv_rpi * val;
        }
    }
    return out;
}

namespace {

void for_each_freq2d(const Axis& axis, const std::function<void(std::size_t, double)>& fn) {
    const std::size_t n = axis.n;
    const double dxi = 1.0 / (axis.dx * static_cast<double>(n));
    for (std::size_t i0 = 0; i0 < n; ++i0) {
        const double k0 = (i0 < n / 2 ? static_cast<double>(i0)
                                      : static_cast<double>(i0) - static_cast<double>(n)) *
                          dxi;
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double k1 = (i1 < n / 2 ? static_cast<double>(i1)
                                          : static_cast<double>(i1) - static_cast<double>(n)) *
                              dxi;
            fn(i0 * n + i1, k0 * k0 + k1 * k1);
        }
    }
}

}  // namespace

CartesianField2D schrodinger_flow(const CartesianField2D& f, double b) {
    CartesianField2D out = f;
    fft::forward2d(out.values, f.axis.n, f.axis.n);
    for_each_freq2d(f.axis, [&](std::size_t idx, double xi2) {
        const double ph = -two_pi * b * xi2;
        out.values[idx] *= cdouble{std::cos(ph), std::sin(ph)};
    });
    fft::inverse2d(out.values, f.axis.n, f.axis.n);
    return out;
}

double schrodinger_flow_residual(const CartesianField2D& f, double b, double h) {
    const CartesianField2D fp = schrodinger_flow(f, b + h);
    const CartesianField2D fm = schrodinger_flow(f, b - h);
    CartesianField2D fb = schrodinger_flow(f, b);

    // Laplacian of fb, applied spectrally
    CartesianField2D lap = fb;
    fft::forward2d(lap.values, f.axis.n, f.axis.n);
    for_each_freq2d(f.axis, [&](std::size_t idx, double xi2) {
        lap.values[idx] *= -4.0 * pi * pi * xi2;
    });
    fft::inverse2d(lap.values, f.axis.n, f.axis.n);

    CartesianField2D resid = fb;
    const cdouble two_pi_i{0.0, two_pi};
    for (std::size_t i = 0; i < resid.values.size(); ++i) {
        const cdouble db = (fp.values[i] - fm.values[i]) / (2.0 * h);
        resid.values[i] = two_pi_i * db + lap.values[i];
    }
    const double denom = f.norm_l2();
    return denom > 0.0 ? resid.norm_l2() / denom : resid.norm_l2();
}

}  // namespace voicelab
