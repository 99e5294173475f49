#include "voicelab/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "voicelab/coorbit.hpp"
#include "voicelab/fft.hpp"
#include "voicelab/io.hpp"

namespace voicelab {

namespace {

// ---------------------------------------------------------------- fixtures

struct Fixtures {
    GridPtr line_grid;
    GridPtr affine_grid;
    GridPtr grid3;
    Representation trans;    // omega = 1/2, u = sinc kernel
    Representation wave;     // smooth log-frequency atom, normalized
    Representation schro2;   // mode radius 2 (grid-resolvable), normalized
    Representation schro16;  // mode radius 16, used by scale-covariant checks
    SpectralProfile trans_env;
    SpectralProfile wave_env;
    std::uint64_t seed = 0;
};

Fixtures make_fixtures(std::uint64_t seed) {
    Fixtures fx;
    fx.seed = seed;
    GridParams params;  // defaults: W=32, n_b=4096, a in [1/8,8], n_a=64, n_phi=32
    fx.line_grid = build_grid(GroupSpec{GroupKind::Line}, params);
    fx.affine_grid = build_grid(GroupSpec{GroupKind::Affine}, params);
    fx.grid3 = build_grid(GroupSpec{GroupKind::AffineCircle}, params);

    fx.trans = translation_rep(0.5);
    fx.wave = normalize_admissible(wavelet_rep(default_wavelet_atom())).first;
    fx.schro2 =
        normalize_admissible(schrodingerlet_rep(default_wavelet_atom(false), 0.5, 2)).first;
    fx.schro16 =
        normalize_admissible(schrodingerlet_rep(default_wavelet_atom(false), 0.5, 16)).first;

    fx.trans_env = mollifier(0.05, 0.4);
    fx.wave_env = lognormal_band(std::pow(2.0, -1.5), 0.12, /*two_sided=*/true);
    return fx;
}

Signal2D random_mode_signal(const Fixtures& fx, Rng& rng, int n_max) {
    Signal2D v;
    v.truncation_radius = n_max;
    for (int n = -n_max; n <= n_max; ++n) {
        const double a_n = fx.schro2.mode_scale.count(n) ? fx.schro2.mode_scale.at(n)
                                                         : std::pow(0.5, std::abs(n));
        const SpectralProfile env =
            dilated(lognormal_band(std::pow(2.0, -1.5), 0.12, /*two_sided=*/false), a_n);
        v.modes.emplace(n, random_bandlimited_signal(fx.line_grid->b_axis, env, rng));
    }
    return v;
}

VoiceField random_smooth_affine_field(GridPtr grid, Rng& rng) {
    const GroupGrid& g = *grid;
    VoiceField f = make_field(std::move(grid));
    const int n_bumps = 6;
    for (int t = 0; t < n_bumps; ++t) {
        const cdouble c = rng.complex_normal();
        const double bc = rng.uniform(-8.0, 8.0);
        const double sb = rng.uniform(1.0, 3.0);
        const double lc = rng.uniform(-0.8, 0.8);
        const double sl = rng.uniform(0.3, 0.7);
        for (std::size_t ib = 0; ib < g.n_b(); ++ib) {
            const double eb = (g.b_axis.at(ib) - bc) / sb;
            if (std::abs(eb) > 8.0) continue;
            const double wb = std::exp(-0.5 * eb * eb);
            for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
                const double el = (std::log(g.a_nodes[ia]) - lc) / sl;
                f.at(ib, ia) += c * (wb * std::exp(-0.5 * el * el));
            }
        }
    }
    return f;
}

Signal1D random_line_field_signal(const Axis& axis, Rng& rng) {
    // smooth random bump combination, compactly concentrated in the window
    Signal1D f = make_signal(axis);
    for (int t = 0; t < 6; ++t) {
        const cdouble c = rng.complex_normal();
        const double bc = rng.uniform(-8.0, 8.0);
        const double sb = rng.uniform(0.8, 2.5);
        for (std::size_t j = 0; j < axis.n; ++j) {
            const double e = (axis.at(j) - bc) / sb;
            if (std::abs(e) > 8.0) continue;
            f.samples[j] += c * std::exp(-0.5 * e * e);
        }
    }
    return f;
}

std::string fmt(double x) { return format_sig(x); }

// ------------------------------------------------------- small oracle tools

/// 64-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> x, w;
    GaussRule() {
        const std::size_t n = 64;
        x.resize(n);
        w.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double t = std::cos(pi * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (std::size_t k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                const double dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double step = p1 / dp;
                t -= step;
                if (std::abs(step) < 1e-15) break;
            }
            double p0 = 1.0, p1 = t;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }

    template <typename F>
    cdouble integrate(F&& f, double a, double b, int pieces = 1) const {
        cdouble acc{0.0, 0.0};
        const double width = (b - a) / pieces;
        for (int p = 0; p < pieces; ++p) {
            const double lo = a + p * width;
            const double mid = lo + 0.5 * width;
            const double half = 0.5 * width;
            for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * half * f(mid + half * x[i]);
        }
        return acc;
    }
};

std::vector<double> dyadic_windows(double first, double last) {
    std::vector<double> out;
    for (double w = first; w <= last * (1.0 + 1e-9); w *= 2.0) out.push_back(w);
    return out;
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double pair_increment(const std::vector<double>& partial, std::size_t hi_index) {
    return (partial[hi_index] - partial[hi_index - 1]) / partial[hi_index];
}

// --------------------------------------------------- streamed wide profiles

/// Window profile masses of an indicator-atom kernel on the (extended) affine
/// or affine-circle group, evaluated pointwise from the closed-form slices
/// K_0(t, a) and the mode scaling K_n(b,a) = a_n K_0(a_n b, a). Avoids
/// materializing the multi-gigabyte wide fields.
struct StreamedProfile {
    std::vector<double> windows;
    std::map<double, std::vector<double>> partial;  // p -> partial norms
};

StreamedProfile stream_indicator_profile(bool two_sided_atom, int n_max,
                                         const std::vector<double>& ps,
                                         const std::vector<double>& windows, double db,
                                         std::size_t n_a, double a_lo, double a_hi,
                                         std::size_t n_phi) {
    const double b_half = windows.back();
    const std::size_t n_b = static_cast<std::size_t>(2.0 * b_half / db);

    std::vector<double> a_nodes(n_a), a_w(n_a);
    const double ratio = std::pow(a_hi / a_lo, 1.0 / static_cast<double>(n_a - 1));
    for (std::size_t k = 0; k < n_a; ++k) a_nodes[k] = a_lo * std::pow(ratio, double(k));
    std::vector<double> cuts(n_a + 1);
    cuts[0] = a_lo;
    cuts[n_a] = a_hi;
    for (std::size_t k = 1; k < n_a; ++k) cuts[k] = std::sqrt(a_nodes[k - 1] * a_nodes[k]);
    for (std::size_t k = 0; k < n_a; ++k) a_w[k] = 1.0 / cuts[k] - 1.0 / cuts[k + 1];

    std::vector<double> a_n(n_max + 1);
    for (int n = 0; n <= n_max; ++n) a_n[n] = std::pow(0.5, n);

    // mode symmetry: u_{-n} = u_n, so K assembles as K_0 + 2 sum K_n cos(n phi)
    std::vector<double> cosn((n_max + 1) * n_phi);
    for (int n = 0; n <= n_max; ++n)
        for (std::size_t l = 0; l < n_phi; ++l)
            cosn[n * n_phi + l] =
                std::cos(n * two_pi * static_cast<double>(l) / static_cast<double>(n_phi));

    std::vector<std::vector<double>> mass(ps.size(), std::vector<double>(windows.size(), 0.0));
    std::vector<cdouble> phi_acc(n_phi);

    // Shannon mode-0 slice in closed form, swept in b by phasor recurrences.
    //   two-sided: K0(t,a) = sqrt(a) [2d sinc(2 pi d t) - 2c sinc(2 pi c t)]
    //   one-sided: K0(t,a) = sqrt(a) (d-c) sinc(pi t (d-c)) e^{i pi t (c+d)}
    for (std::size_t k = 0; k < n_a; ++k) {
        const double a = a_nodes[k];
        const double c = std::max(0.25, 0.25 / a);
        const double d = std::min(0.5, 0.5 / a);
        if (!(d > c)) continue;
        const double ra = std::sqrt(a);
        const double wquad = db * a_w[k] / static_cast<double>(n_phi);

        const double f1 = two_sided_atom ? two_pi * d : pi * (d - c);
        const double f2 = two_sided_atom ? two_pi * c : pi * (c + d);

        std::vector<cdouble> z1(n_max + 1), z2(n_max + 1), r1(n_max + 1), r2(n_max + 1);
        auto reseed = [&](double b) {
            for (int n = 0; n <= n_max; ++n) {
                const double t = a_n[n] * b;
                z1[n] = std::polar(1.0, f1 * t);
                z2[n] = std::polar(1.0, f2 * t);
                r1[n] = std::polar(1.0, f1 * a_n[n] * db);
                r2[n] = std::polar(1.0, f2 * a_n[n] * db);
            }
        };

        std::size_t bucket = 0;
        for (std::size_t ibb = 0; ibb < n_b; ++ibb) {
            const double b = -b_half + (static_cast<double>(ibb) + 0.5) * db;
            if ((ibb & 4095u) == 0u) reseed(b);
            while (bucket + 1 < windows.size() && std::abs(b) > windows[bucket]) ++bucket;
            std::size_t my_bucket = windows.size();
            for (std::size_t wb = 0; wb < windows.size(); ++wb)
                if (std::abs(b) <= windows[wb]) {
                    my_bucket = wb;
                    break;
                }
            if (my_bucket == windows.size()) {
                for (int n = 0; n <= n_max; ++n) {
                    z1[n] *= r1[n];
                    z2[n] *= r2[n];
                }
                continue;
            }

            std::fill(phi_acc.begin(), phi_acc.end(), cdouble{0.0, 0.0});
            for (int n = 0; n <= n_max; ++n) {
                const double t = a_n[n] * b;
                cdouble kn;
                if (two_sided_atom) {
                    const double s1 = std::abs(t) > 1e-9 ? z1[n].imag() / t : f1;
                    const double s2 = std::abs(t) > 1e-9 ? z2[n].imag() / t : f2;
                    kn = cdouble{ra * (s1 - s2) / pi, 0.0};
                } else {
                    const double s1 = std::abs(t) > 1e-9 ? z1[n].imag() / (f1 * t) : 1.0;
                    kn = ra * (d - c) * s1 * z2[n];
                }
                kn *= a_n[n];
                const double scale = n == 0 ? 1.0 : 2.0;
                for (std::size_t l = 0; l < n_phi; ++l)
                    phi_acc[l] += (scale * cosn[n * n_phi + l]) * kn;
                z1[n] *= r1[n];
                z2[n] *= r2[n];
            }
            for (std::size_t l = 0; l < n_phi; ++l) {
                const double n2 = std::norm(phi_acc[l]);
                if (n2 <= 0.0) continue;
                const double s = std::sqrt(n2);
                for (std::size_t ip = 0; ip < ps.size(); ++ip) {
                    double v;
                    if (ps[ip] == 1.0) v = s;
                    else if (ps[ip] == 2.0) v = n2;
                    else if (ps[ip] == 3.0) v = n2 * s;
                    else if (ps[ip] == 1.5) v = std::sqrt(n2 * s);
                    else v = std::pow(s, ps[ip]);
                    mass[ip][my_bucket] += v * wquad;
                }
            }
        }
    }

    StreamedProfile out;
    out.windows = windows;
    for (std::size_t ip = 0; ip < ps.size(); ++ip) {
        std::vector<double> partial(windows.size());
        double acc = 0.0;
        for (std::size_t wb = 0; wb < windows.size(); ++wb) {
            acc += mass[ip][wb];
            partial[wb] = std::pow(acc, 1.0 / ps[ip]);
        }
        out.partial[ps[ip]] = std::move(partial);
    }
    return out;
}

StreamedProfile stream_sinc_profile(const std::vector<double>& ps,
                                    const std::vector<double>& windows, double db) {
    const double b_half = windows.back();
    const std::size_t n_b = static_cast<std::size_t>(2.0 * b_half / db);
    std::vector<std::vector<double>> mass(ps.size(), std::vector<double>(windows.size(), 0.0));
    for (std::size_t j = 0; j < n_b; ++j) {
        const double b = -b_half + (static_cast<double>(j) + 0.5) * db;
        std::size_t bucket = windows.size();
        for (std::size_t wb = 0; wb < windows.size(); ++wb)
            if (std::abs(b) <= windows[wb]) {
                bucket = wb;
                break;
            }
        if (bucket == windows.size()) continue;
        const double mag = std::abs(sinc(pi * b));
        if (mag <= 0.0) continue;
        const double n2 = mag * mag;
        for (std::size_t ip = 0; ip < ps.size(); ++ip) {
            double v;
            if (ps[ip] == 1.0) v = mag;
            else if (ps[ip] == 2.0) v = n2;
            else if (ps[ip] == 3.0) v = n2 * mag;
            else if (ps[ip] == 1.5) v = std::sqrt(n2 * mag);
            else v = std::pow(mag, ps[ip]);
            mass[ip][bucket] += v * db;
        }
    }
    StreamedProfile out;
    out.windows = windows;
    for (std::size_t ip = 0; ip < ps.size(); ++ip) {
        std::vector<double> partial(windows.size());
        double acc = 0.0;
        for (std::size_t wb = 0; wb < windows.size(); ++wb) {
            acc += mass[ip][wb];
            partial[wb] = std::pow(acc, 1.0 / ps[ip]);
        }
        out.partial[ps[ip]] = std::move(partial);
    }
    return out;
}

// ------------------------------------------------------------ the criteria

CriterionResult c01_isometry(const Fixtures& fx) {
    CriterionResult r{1, "isometry", false, ""};
    Rng rng(fx.seed + 101);
    double worst_t = 0.0, worst_w = 0.0, worst_s = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Signal1D v = random_bandlimited_signal(fx.line_grid->b_axis, fx.trans_env, rng);
        worst_t = std::max(worst_t, rel_gap(lp_norm(voice(v, fx.trans, fx.line_grid), 2.0),
                                            v.norm_l2()));
    }
    for (int i = 0; i < 20; ++i) {
        const Signal1D v = random_bandlimited_signal(fx.line_grid->b_axis, fx.wave_env, rng);
        worst_w = std::max(worst_w, rel_gap(lp_norm(voice(v, fx.wave, fx.affine_grid), 2.0),
                                            v.norm_l2()));
    }
    for (int i = 0; i < 20; ++i) {
        const Signal2D v = random_mode_signal(fx, rng, 2);
        worst_s = std::max(worst_s, rel_gap(lp_norm(voice(v, fx.schro2, fx.grid3), 2.0),
                                            v.norm_l2()));
    }
    r.pass = worst_t < 1e-6 && worst_w < 1e-3 && worst_s < 1e-3;
    r.details = "translation " + fmt(worst_t) + ", wavelet " + fmt(worst_w) +
                ", schrodingerlet " + fmt(worst_s);
    return r;
}

CriterionResult c02_reproducing(const Fixtures& fx) {
    CriterionResult r{2, "reproducing-formula", false, ""};
    Rng rng(fx.seed + 202);

    const VoiceField Kt = kernel(fx.trans, fx.line_grid);
    const VoiceField Kw = kernel(fx.wave, fx.affine_grid);
    const VoiceField Ks = kernel(fx.schro2, fx.grid3);

    double worst_voice = 0.0;
    for (int i = 0; i < 5; ++i) {
        const Signal1D vt = random_bandlimited_signal(fx.line_grid->b_axis, fx.trans_env, rng);
        worst_voice = std::max(worst_voice, reproduce(voice(vt, fx.trans, fx.line_grid), Kt).second);
        const Signal1D vw = random_bandlimited_signal(fx.line_grid->b_axis, fx.wave_env, rng);
        worst_voice = std::max(worst_voice, reproduce(voice(vw, fx.wave, fx.affine_grid), Kw).second);
        const Signal2D vs = random_mode_signal(fx, rng, 2);
        worst_voice = std::max(worst_voice, reproduce(voice(vs, fx.schro2, fx.grid3), Ks).second);
    }

    // K conv K = K. The sinc kernel needs a wide window (L^2 tail ~ W^{-1/2});
    // the slow schrodingerlet modes need a window covering their dilated slices.
    GridParams wide;
    wide.b_halfwidth = 262144.0;
    wide.n_b = 1 << 20;
    const GridPtr wide_line = build_grid(GroupSpec{GroupKind::Line}, wide);
    const VoiceField Kt_wide = kernel(fx.trans, wide_line);
    const double kk_t = reproduce(Kt_wide, Kt_wide).second;
    const double kk_w = reproduce(Kw, Kw).second;

    double kk_s = 0.0;
    {
        GridParams wb;
        wb.b_halfwidth = 128.0;
        wb.n_b = 8192;
        const GridPtr wgrid = build_grid(GroupSpec{GroupKind::Affine}, wb);
        const ModeField km = kernel_modes(fx.schro2, wgrid);
        double num = 0.0, den = 0.0;
        for (const auto& [n, Kn] : km) {
            VoiceField tagged = Kn;
            auto info = std::make_shared<KernelInfo>();
            info->rep.kind = RepKind::Wavelet;
            info->rep.atom = fx.schro2.mode_atoms.at(n);
            info->rep.normalized = true;
            tagged.kernel_info = info;
            const double res = reproduce(Kn, tagged).second;
            const double ref = lp_norm(Kn, 2.0);
            num += res * res * ref * ref;
            den += ref * ref;
        }
        kk_s = std::sqrt(num / den);
    }

    r.pass = worst_voice < 1e-3 && kk_t < 1e-3 && kk_w < 1e-3 && kk_s < 1e-3;
    r.details = "Vv*K residual " + fmt(worst_voice) + "; K*K residual translation " + fmt(kk_t) +
                ", wavelet " + fmt(kk_w) + ", schrodingerlet " + fmt(kk_s);
    return r;
}

CriterionResult c03_synthesis(const Fixtures& fx) {
    CriterionResult r{3, "synthesis-inversion", false, ""};
    Rng rng(fx.seed + 303);

    double worst_inv = 0.0;
    for (int i = 0; i < 10; ++i) {
        const Signal1D vt = random_bandlimited_signal(fx.line_grid->b_axis, fx.trans_env, rng);
        Signal1D back = synthesize(voice(vt, fx.trans, fx.line_grid), fx.trans);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < vt.axis.n; ++j) {
            num += std::norm(back.samples[j] - vt.samples[j]);
            den += std::norm(vt.samples[j]);
        }
        worst_inv = std::max(worst_inv, std::sqrt(num / den));

        const Signal1D vw = random_bandlimited_signal(fx.line_grid->b_axis, fx.wave_env, rng);
        Signal1D backw = synthesize(voice(vw, fx.wave, fx.affine_grid), fx.wave);
        num = den = 0.0;
        for (std::size_t j = 0; j < vw.axis.n; ++j) {
            num += std::norm(backw.samples[j] - vw.samples[j]);
            den += std::norm(vw.samples[j]);
        }
        worst_inv = std::max(worst_inv, std::sqrt(num / den));

        const Signal2D vs = random_mode_signal(fx, rng, 2);
        const Signal2D backs = synthesize2d(voice(vs, fx.schro2, fx.grid3), fx.schro2);
        num = den = 0.0;
        for (const auto& [n, vn] : vs.modes) {
            const auto it = backs.modes.find(n);
            for (std::size_t j = 0; j < vn.axis.n; ++j) {
                const cdouble got = it != backs.modes.end() ? it->second.samples[j] : cdouble{};
                num += std::norm(got - vn.samples[j]);
                den += std::norm(vn.samples[j]);
            }
        }
        worst_inv = std::max(worst_inv, std::sqrt(num / den));
    }

    // V pi(f) u = f conv K for seeded fields
    const VoiceField Kt = kernel(fx.trans, fx.line_grid);
    const VoiceField Kw = kernel(fx.wave, fx.affine_grid);
    double worst_field = 0.0;
    for (int i = 0; i < 10; ++i) {
        {
            VoiceField f = make_field(fx.line_grid);
            f.values = random_line_field_signal(fx.line_grid->b_axis, rng).samples;
            const VoiceField lhs = voice(synthesize(f, fx.trans), fx.trans, fx.line_grid);
            const VoiceField rhs = reproduce(f, Kt).first;
            VoiceField diff = lhs;
            for (std::size_t k = 0; k < diff.values.size(); ++k) diff.values[k] -= rhs.values[k];
            worst_field = std::max(worst_field, lp_norm(diff, 2.0) / lp_norm(rhs, 2.0));
        }
        {
            const VoiceField f = random_smooth_affine_field(fx.affine_grid, rng);
            const VoiceField lhs = voice(synthesize(f, fx.wave), fx.wave, fx.affine_grid);
            const VoiceField rhs = reproduce(f, Kw).first;
            VoiceField diff = lhs;
            for (std::size_t k = 0; k < diff.values.size(); ++k) diff.values[k] -= rhs.values[k];
            worst_field = std::max(worst_field, lp_norm(diff, 2.0) / lp_norm(rhs, 2.0));
        }
    }

    r.pass = worst_inv < 1e-3 && worst_field < 1e-3;
    r.details = "pi(Vv)u residual " + fmt(worst_inv) + ", V pi(f)u vs f*K " + fmt(worst_field);
    return r;
}

CriterionResult c04_kernel_identities(const Fixtures& fx) {
    CriterionResult r{4, "kernel-identities", false, ""};

    const VoiceField Kt = kernel(fx.trans, fx.line_grid);
    double worst_sinc = 0.0;
    const Signal1D ref = sinc_kernel(0.5, fx.line_grid->b_axis);
    for (std::size_t j = 0; j < ref.axis.n; ++j)
        worst_sinc = std::max(worst_sinc, std::abs(Kt.values[j] - ref.samples[j]));

    // Shannon per-scale slices against an independent oscillatory quadrature
    const Representation shannon = wavelet_rep(shannon_atom());
    const VoiceField Ks = kernel(shannon, fx.affine_grid);
    const GaussRule gauss;
    double worst_slice = 0.0;
    const GroupGrid& g = *fx.affine_grid;
    for (std::size_t k = 0; k < g.n_a(); ++k) {
        const double a = g.a_nodes[k];
        const double c = std::max(0.25, 0.25 / a);
        const double d = std::min(0.5, 0.5 / a);
        for (std::size_t jj = 0; jj < 64; ++jj) {
            const std::size_t ib = jj * (g.n_b() / 64) + g.n_b() / 128;
            const double b = g.b_axis.at(ib);
            cdouble expected{0.0, 0.0};
            if (d > c) {
                auto f = [&](double xi) {
                    return cdouble{2.0 * std::sqrt(a) * std::cos(two_pi * b * xi), 0.0};
                };
                expected = gauss.integrate(f, c, d, 32);
            }
            worst_slice = std::max(worst_slice, std::abs(Ks.at(ib, k) - expected));
        }
    }

    double worst_support = 0.0;
    for (std::size_t k = 0; k < g.n_a(); ++k) {
        const double a = g.a_nodes[k];
        if (a > 0.5 && a < 2.0) continue;
        for (std::size_t ib = 0; ib < g.n_b(); ++ib)
            worst_support = std::max(worst_support, std::abs(Ks.at(ib, k)));
    }

    r.pass = worst_sinc < 1e-9 && worst_slice < 1e-6 && worst_support < 1e-9;
    r.details = "sinc " + fmt(worst_sinc) + ", shannon slice " + fmt(worst_slice) +
                ", scale support " + fmt(worst_support);
    return r;
}

CriterionResult c05_integrability(const Fixtures&) {
    CriterionResult r{5, "integrability-window-profiles", false, ""};
    const std::vector<double> ps{1.0, 1.5, 2.0, 3.0};

    bool ok = true;
    std::string detail;
    auto check = [&](const char* name, const StreamedProfile& prof) {
        std::size_t i1024 = 0;
        for (std::size_t wb = 0; wb < prof.windows.size(); ++wb)
            if (prof.windows[wb] <= 1024.0 + 1e-9) i1024 = wb;
        for (double p : ps) {
            const auto& partial = prof.partial.at(p);
            const double inc = pair_increment(partial, partial.size() - 1);
            if (p == 1.0) {
                const double inc_short = pair_increment(partial, i1024);
                ok = ok && inc > 1e-2 && inc_short > 1e-2;
                detail += std::string(name) + " p1 " + fmt(inc) + "/" + fmt(inc_short) + "; ";
            } else {
                ok = ok && inc < 1e-3;
                if (p == 1.5) detail += std::string(name) + " p1.5 " + fmt(inc) + "; ";
            }
        }
    };

    check("sinc", stream_sinc_profile(ps, dyadic_windows(16.0, 2097152.0), 0.25));
    check("shannon", stream_indicator_profile(/*two_sided=*/true, 0, ps,
                                              dyadic_windows(16.0, 131072.0), 0.25, 12, 0.45, 2.2,
                                              1));
    check("schrodingerlet",
          stream_indicator_profile(/*two_sided=*/false, 16, ps, dyadic_windows(16.0, 2097152.0),
                                   0.5, 8, 0.45, 2.2, 8));

    r.pass = ok;
    r.details = detail;
    return r;
}

CriterionResult c06_calderon(const Fixtures&) {
    CriterionResult r{6, "calderon-arithmetic", false, ""};
    const double ln2 = std::log(2.0);
    const double gap_const = std::abs(calderon(shannon_atom()) - ln2);
    const double gap_dilate = std::abs(calderon(dilated(shannon_atom(), 2.718281828)) - ln2);
    const double gap_dilate2 = std::abs(calderon(dilated(default_wavelet_atom(), 37.0)) -
                                        calderon(default_wavelet_atom()));

    const auto [rep, report] =
        normalize_admissible(schrodingerlet_rep(default_wavelet_atom(false), 0.5, 16));
    double worst_mode = 0.0;
    for (const auto& [n, c] : report.calderon_constants)
        worst_mode = std::max(worst_mode, std::abs(c - 1.0));

    r.pass = gap_const < 1e-9 && gap_dilate < 1e-9 && gap_dilate2 < 1e-9 && worst_mode < 1e-6 &&
             report.admissible;
    r.details = "shannon |c - ln2| " + fmt(gap_const) + ", dilation " + fmt(gap_dilate) + "/" +
                fmt(gap_dilate2) + ", worst mode gap " + fmt(worst_mode);
    return r;
}

CriterionResult c07_schrodingerlet_structure(const Fixtures& fx) {
    CriterionResult r{7, "schrodingerlet-structure", false, ""};

    // (a) series vs direct inner products on a 64 x 8 x 8 group grid
    double worst_series = 0.0;
    {
        const Axis x_axis{-256.0, 0.25, 2048};
        const double center = 0.35, sigma = 0.035;
        Representation rep;
        rep.kind = RepKind::Schrodingerlet;
        rep.atom = gaussian_band(center, sigma);
        for (int n = -2; n <= 2; ++n) {
            const double an = std::pow(0.5, std::abs(n));
            rep.mode_scale[n] = an;
            rep.mode_atoms[n] = dilated(rep.atom, an);
        }

        Rng rng(fx.seed + 707);
        Signal2D v;
        for (int n = -2; n <= 2; ++n) {
            const SpectralProfile env =
                dilated(gaussian_band(center, 0.8 * sigma), rep.mode_scale[n]);
            v.modes.emplace(n, random_bandlimited_signal(x_axis, env, rng));
        }

        GridParams pe;
        pe.b_halfwidth = 256.0;
        pe.n_b = 2048;
        pe.a_min = 0.5;
        pe.a_max = 2.0;
        pe.n_a = 8;
        pe.n_phi = 8;
        const GridPtr engine_grid = build_grid(GroupSpec{GroupKind::AffineCircle}, pe);
        const ModeField modes = voice_modes(v, rep, engine_grid);

        const std::size_t nb = 64, na = 8, nphi = 8, n_theta = 8;
        // b = -16 + 0.5 k  ->  signal index 960 + 2k
        auto bindex = [&](std::size_t k) { return 960 + 2 * k; };

        const std::vector<cdouble> raw = resum_modes(v, n_theta);
        auto u_mode = [&](int n, double t) -> cdouble {
            const double an = rep.mode_scale.at(n);
            const double cn = center * an, sn = sigma * an;
            const double mag = sn * std::sqrt(two_pi) * std::exp(-2.0 * pi * pi * sn * sn * t * t);
            const double ph = two_pi * cn * t;
            return cdouble{mag * std::cos(ph), mag * std::sin(ph)};
        };

        double max_direct = 0.0;
        std::vector<cdouble> utab(n_theta * x_axis.n);
        for (std::size_t ka = 0; ka < na; ++ka) {
            const double a = engine_grid->a_nodes[ka];
            for (std::size_t kb = 0; kb < nb; ++kb) {
                const double b = -16.0 + 0.5 * static_cast<double>(kb);
                // u((x - b)/a, theta_idx) assembled once per (b, a)
                for (std::size_t l = 0; l < n_theta; ++l)
                    for (std::size_t j = 0; j < x_axis.n; ++j) utab[l * x_axis.n + j] = {0.0, 0.0};
                for (int n = -2; n <= 2; ++n) {
                    for (std::size_t l = 0; l < n_theta; ++l) {
                        const double ang = static_cast<double>(n) * two_pi *
                                           static_cast<double>(l) / static_cast<double>(n_theta);
                        const cdouble ph{std::cos(ang), std::sin(ang)};
                        for (std::size_t j = 0; j < x_axis.n; ++j)
                            utab[l * x_axis.n + j] += u_mode(n, (x_axis.at(j) - b) / a) * ph;
                    }
                }
                for (std::size_t kphi = 0; kphi < nphi; ++kphi) {
                    cdouble direct{0.0, 0.0};
                    for (std::size_t l = 0; l < n_theta; ++l) {
                        const std::size_t lsrc = (l + n_theta - kphi) % n_theta;
                        cdouble col{0.0, 0.0};
                        for (std::size_t j = 0; j < x_axis.n; ++j)
                            col += raw[j * n_theta + l] * std::conj(utab[lsrc * x_axis.n + j]);
                        direct += col;
                    }
                    direct *= x_axis.dx / (std::sqrt(a) * static_cast<double>(n_theta));

                    cdouble series{0.0, 0.0};
                    for (int n = -2; n <= 2; ++n) {
                        const double ang = static_cast<double>(n) * two_pi *
                                           static_cast<double>(kphi) / static_cast<double>(nphi);
                        series += modes.at(n).at(bindex(kb), ka) *
                                  cdouble{std::cos(ang), std::sin(ang)};
                    }
                    worst_series = std::max(worst_series, std::abs(series - direct));
                    max_direct = std::max(max_direct, std::abs(direct));
                }
            }
        }
        worst_series /= std::max(max_direct, 1e-300);
    }

    // (b) mode scaling K_n(b,a) = a_n K_0(a_n b, a)
    double worst_scaling = 0.0;
    const ModeField km = kernel_modes(fx.schro16, fx.grid3);
    {
        const VoiceField& K0 = km.at(0);
        OversampledField res(K0);
        const GroupGrid& g = *K0.grid;
        for (const auto& [n, Kn] : km) {
            double num = 0.0, den = 0.0;
            for (std::size_t ib = 0; ib < g.n_b(); ++ib)
                for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
                    const double an = fx.schro16.mode_scale.at(n);
                    const cdouble expected = an * res.sample_b(ia, 0, an * g.b_axis.at(ib));
                    num += std::norm(Kn.at(ib, ia) - expected);
                    den += std::norm(Kn.at(ib, ia));
                }
            if (den > 0.0) worst_scaling = std::max(worst_scaling, std::sqrt(num / den));
        }
    }

    // (c) ||K||_p <= ||K_0||_p sum a_n^{1-1/p}
    std::string bound_detail;
    bool bound_ok = true;
    {
        const VoiceField K = assemble_modes(km, fx.grid3);
        for (double p : {1.5, 2.0, 3.0}) {
            double sum = 0.0;
            for (const auto& [n, an] : fx.schro16.mode_scale) sum += std::pow(an, 1.0 - 1.0 / p);
            const double lhs = lp_norm(K, p);
            const double rhs = lp_norm(km.at(0), p) * sum;
            bound_ok = bound_ok && (rhs - lhs >= 0.0);
            bound_detail += " p" + fmt(p) + " slack " + fmt(rhs - lhs);
        }
    }

    r.pass = worst_series < 1e-6 && worst_scaling < 1e-3 && bound_ok;
    r.details = "series-vs-direct " + fmt(worst_series) + ", mode scaling " + fmt(worst_scaling) +
                "," + bound_detail;
    return r;
}

CriterionResult c08_paley_wiener(const Fixtures& fx) {
    CriterionResult r{8, "paley-wiener-coorbit", false, ""};
    Rng rng(fx.seed + 808);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const Signal1D v = random_bandlimited_signal(fx.line_grid->b_axis, fx.trans_env, rng);
        for (double p : {1.5, 2.0, 4.0}) {
            const CoorbitReport rep = coorbit_norm_report(v, fx.trans, fx.line_grid, p, weight_one());
            worst = std::max(worst, rel_gap(rep.coorbit_norm, v.norm_lp(p)));
        }
    }
    r.pass = worst < 1e-3;
    r.details = "worst |coorbit - Lp|/Lp " + fmt(worst);
    return r;
}

CriterionResult c09_appendix_suite(const Fixtures& fx) {
    CriterionResult r{9, "appendix-convolution-suite", false, ""};
    Rng rng(fx.seed + 909);

    const Axis small_axis{-16.0, 1.0 / 32.0, 1024};
    auto random_positive = [&](Rng& rr) {
        Signal1D f = make_signal(small_axis);
        for (int t = 0; t < 4; ++t) {
            const double amp = 0.2 + rr.uniform();
            const double c = rr.uniform(-6.0, 6.0);
            const double s = rr.uniform(0.4, 1.5);
            for (std::size_t j = 0; j < small_axis.n; ++j) {
                const double e = (small_axis.at(j) - c) / s;
                if (std::abs(e) > 8.0) continue;
                f.samples[j] += amp * std::exp(-0.5 * e * e);
            }
        }
        return f;
    };

    double min_slack_line = std::numeric_limits<double>::infinity();
    const std::vector<std::pair<double, double>> line_sets{
        {1.0, 2.0},
        {4.0 / 3.0, 4.0 / 3.0},
        {2.0, 2.0},
        {1.0, std::numeric_limits<double>::infinity()},
        {std::numeric_limits<double>::infinity(), 1.0}};
    for (const auto& [p, q] : line_sets)
        for (int i = 0; i < 100; ++i) {
            const Signal1D f = random_positive(rng);
            const Signal1D g = random_positive(rng);
            min_slack_line = std::min(min_slack_line, young_suite(f, g, p, q).slack);
        }

    GridParams small;
    small.b_halfwidth = 16.0;
    small.n_b = 256;
    small.a_min = 0.25;
    small.a_max = 4.0;
    small.n_a = 16;
    const GridPtr agrid = build_grid(GroupSpec{GroupKind::Affine}, small);
    double min_slack_affine = std::numeric_limits<double>::infinity();
    {
        const VoiceField KS = kernel(wavelet_rep(shannon_atom()), agrid);
        VoiceField absK = KS;
        absK.kernel_info.reset();
        for (auto& v : absK.values) v = cdouble{std::abs(v), 0.0};
        min_slack_affine =
            std::min(min_slack_affine, young_suite(absK, absK, 4.0 / 3.0, 4.0 / 3.0).slack);
        for (int i = 0; i < 100; ++i) {
            const VoiceField f = random_smooth_affine_field(agrid, rng);
            const VoiceField g = random_smooth_affine_field(agrid, rng);
            min_slack_affine =
                std::min(min_slack_affine, young_suite(f, g, 4.0 / 3.0, 4.0 / 3.0).slack);
        }
    }

    // identities: roundoff-level on the line, interpolation-limited on the
    // affine grid (operands concentrated so that every side stays in the box)
    double worst_line = 0.0, worst_affine = 0.0;
    {
        const Signal1D f = random_positive(rng);
        const Signal1D g = random_positive(rng);
        const Signal1D h = random_positive(rng);
        const ConvReport rep = algebra_check(f, g, h, 2.0);
        for (const auto& [k, v] : rep.residuals) worst_line = std::max(worst_line, v);
    }
    {
        GridParams mid;
        mid.b_halfwidth = 64.0;
        mid.n_b = 2048;
        mid.a_min = 0.125;
        mid.a_max = 8.0;
        mid.n_a = 49;  // ratio-closed: a_k / a_l stays on the node set
        const GridPtr mgrid = build_grid(GroupSpec{GroupKind::Affine}, mid);
        Rng rng2(fx.seed + 919);
        auto bump_field = [&](Rng& rr) {
            const GroupGrid& gg = *mgrid;
            VoiceField f = make_field(mgrid);
            for (int t = 0; t < 4; ++t) {
                const cdouble c = rr.complex_normal();
                const double bc = rr.uniform(-0.75, 0.75);
                const double sb = rr.uniform(0.5, 0.7);
                const double lc = rr.uniform(-0.1, 0.1);
                const double sl = rr.uniform(0.1, 0.14);
                for (std::size_t ib = 0; ib < gg.n_b(); ++ib) {
                    const double eb = (gg.b_axis.at(ib) - bc) / sb;
                    if (std::abs(eb) > 9.0) continue;
                    for (std::size_t ia = 0; ia < gg.n_a(); ++ia) {
                        const double el = (std::log(gg.a_nodes[ia]) - lc) / sl;
                        f.at(ib, ia) += c * std::exp(-0.5 * (eb * eb + el * el));
                    }
                }
            }
            return f;
        };
        const VoiceField f = bump_field(rng2);
        const VoiceField g = bump_field(rng2);
        const VoiceField h = bump_field(rng2);
        const double rstep = std::log(mgrid->a_nodes[1] / mgrid->a_nodes[0]);
        const GroupElement shift{16.0 * mgrid->b_axis.dx, 1.0, 0.0};
        const GroupElement scale{0.0, std::exp(2.0 * rstep), 0.0};
        for (const auto& x : {shift, scale}) {
            const ConvReport rep = algebra_check(f, g, h, x);
            for (const auto& [k, v] : rep.residuals) worst_affine = std::max(worst_affine, v);
        }
    }

    // engine vs brute force on grids of <= 2048 nodes
    double worst_brute = 0.0;
    {
        const Signal1D f = random_positive(rng);
        const Signal1D g = random_positive(rng);
        const Signal1D conv = convolve_line(f, g);
        double max_gap = 0.0, max_val = 0.0;
        for (std::size_t j = 0; j < conv.axis.n; j += 7) {
            cdouble direct{0.0, 0.0};
            for (std::size_t i = 0; i < f.axis.n; ++i) {
                const std::ptrdiff_t kk =
                    static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
                if (kk < 0 || kk >= static_cast<std::ptrdiff_t>(g.axis.n)) continue;
                direct += f.samples[i] * g.samples[static_cast<std::size_t>(kk)];
            }
            direct *= f.axis.dx;
            max_gap = std::max(max_gap, std::abs(conv.samples[j] - direct));
            max_val = std::max(max_val, std::abs(direct));
        }
        worst_brute = std::max(worst_brute, max_gap / std::max(max_val, 1e-300));
    }
    {
        GridParams tiny;
        tiny.b_halfwidth = 8.0;
        tiny.n_b = 64;
        tiny.a_min = 0.5;
        tiny.a_max = 2.0;
        tiny.n_a = 16;
        const GridPtr tgrid = build_grid(GroupSpec{GroupKind::Affine}, tiny);
        Rng rng3(fx.seed + 929);
        VoiceField F = make_field(tgrid);
        VoiceField G = make_field(tgrid);
        const GroupGrid& gg = *tgrid;
        for (std::size_t ib = 0; ib < gg.n_b(); ++ib)
            for (std::size_t ia = 0; ia < gg.n_a(); ++ia) {
                const double eb = gg.b_axis.at(ib) / 2.0;
                const double el = std::log(gg.a_nodes[ia]) / 0.4;
                F.at(ib, ia) = rng3.complex_normal() * 0.05 +
                               cdouble{std::exp(-0.5 * (eb * eb + el * el)), 0.0};
                G.at(ib, ia) =
                    cdouble{std::exp(-0.6 * (eb * eb + el * el)), 0.1 * std::exp(-eb * eb)};
            }
        const VoiceField conv = convolve_affine(F, G);
        OversampledField res(G);
        double max_gap = 0.0, max_val = 0.0;
        for (std::size_t jb = 0; jb < gg.n_b(); jb += 3)
            for (std::size_t ka = 0; ka < gg.n_a(); ++ka) {
                cdouble direct{0.0, 0.0};
                for (std::size_t ib = 0; ib < gg.n_b(); ++ib)
                    for (std::size_t la = 0; la < gg.n_a(); ++la) {
                        const double alpha = gg.a_nodes[la];
                        direct += F.at(ib, la) *
                                  res.sample((gg.b_axis.at(jb) - gg.b_axis.at(ib)) / alpha,
                                             gg.a_nodes[ka] / alpha) *
                                  gg.b_axis.dx * gg.a_weights[la];
                    }
                max_gap = std::max(max_gap, std::abs(conv.at(jb, ka) - direct));
                max_val = std::max(max_val, std::abs(direct));
            }
        worst_brute = std::max(worst_brute, max_gap / std::max(max_val, 1e-300));
    }
    {
        GridParams tiny;
        tiny.b_halfwidth = 4.0;
        tiny.n_b = 16;
        tiny.a_min = 0.5;
        tiny.a_max = 2.0;
        tiny.n_a = 8;
        tiny.n_phi = 8;
        const GridPtr tgrid = build_grid(GroupSpec{GroupKind::AffineCircle}, tiny);
        const GridPtr sub = affine_subgrid(tgrid);
        Rng rng4(fx.seed + 939);
        auto tiny_field = [&](Rng& rr) {
            VoiceField f = make_field(sub);
            const GroupGrid& gg = *sub;
            for (std::size_t ib = 0; ib < gg.n_b(); ++ib)
                for (std::size_t ia = 0; ia < gg.n_a(); ++ia) {
                    const double eb = gg.b_axis.at(ib);
                    const double el = std::log(gg.a_nodes[ia]) / 0.4;
                    f.at(ib, ia) = rr.complex_normal() * 0.05 +
                                   cdouble{std::exp(-0.5 * (eb * eb + el * el)), 0.0};
                }
            return f;
        };
        ModeField F, G;
        for (int n : {0, 1}) {
            F.emplace(n, tiny_field(rng4));
            G.emplace(n, tiny_field(rng4));
        }
        const VoiceField engine = assemble_modes(convolve_affine_circle(F, G), tgrid);
        const VoiceField F3 = assemble_modes(F, tgrid);
        const VoiceField G3 = assemble_modes(G, tgrid);

        OversampledField res(G3);
        const GroupGrid& gg = *tgrid;
        double max_gap = 0.0, max_val = 0.0;
        for (std::size_t jb = 0; jb < gg.n_b(); ++jb)
            for (std::size_t ka = 0; ka < gg.n_a(); ++ka)
                for (std::size_t kl = 0; kl < gg.n_phi; ++kl) {
                    cdouble direct{0.0, 0.0};
                    for (std::size_t ib = 0; ib < gg.n_b(); ++ib)
                        for (std::size_t la = 0; la < gg.n_a(); ++la) {
                            const double alpha = gg.a_nodes[la];
                            const double tb = (gg.b_axis.at(jb) - gg.b_axis.at(ib)) / alpha;
                            const double ta = gg.a_nodes[ka] / alpha;
                            for (std::size_t ll = 0; ll < gg.n_phi; ++ll) {
                                const std::size_t lphi = (kl + gg.n_phi - ll) % gg.n_phi;
                                direct += F3.at(ib, la, ll) * res.sample(tb, ta, lphi) *
                                          gg.quad_weight(ib, la, ll);
                            }
                        }
                    max_gap = std::max(max_gap, std::abs(engine.at(jb, ka, kl) - direct));
                    max_val = std::max(max_val, std::abs(direct));
                }
        worst_brute = std::max(worst_brute, max_gap / std::max(max_val, 1e-300));
    }

    const double floor_slack = -1e-9;
    r.pass = min_slack_line >= floor_slack && min_slack_affine >= floor_slack &&
             worst_line < 1e-6 && worst_affine < 1e-3 && worst_brute < 1e-8;
    r.details = "min slack line " + fmt(min_slack_line) + ", affine " + fmt(min_slack_affine) +
                "; identities line " + fmt(worst_line) + ", affine " + fmt(worst_affine) +
                "; engine-vs-brute " + fmt(worst_brute);
    return r;
}

CriterionResult c10_vector_change(const Fixtures& fx) {
    CriterionResult r{10, "change-of-admissible-vector", false, ""};
    Rng rng(fx.seed + 1010);

    SpectralProfile phase_atom;
    phase_atom.two_sided = true;
    phase_atom.support = {0.0, 0.5};
    phase_atom.eval = [](double xi) {
        const double ph = std::sin(5.0 * xi) * 2.0;
        return cdouble{std::cos(ph), std::sin(ph)};
    };
    const Representation tu = fx.trans;
    const Representation tw = translation_rep(0.5, phase_atom);
    const Signal1D vt = random_bandlimited_signal(fx.line_grid->b_axis, fx.trans_env, rng);
    const double res_t = vector_change(vt, tu, tw, fx.line_grid);

    const Representation wu = fx.wave;
    const Representation ww = normalize_admissible(
                                  wavelet_rep(lognormal_band(1.15 * std::pow(2.0, -1.5), 0.18,
                                                             /*two_sided=*/true)))
                                  .first;
    const Signal1D vw = random_bandlimited_signal(fx.line_grid->b_axis, fx.wave_env, rng);
    const double res_w = vector_change(vw, wu, ww, fx.affine_grid);

    r.pass = res_t < 1e-2 && res_w < 1e-2;
    r.details = "translation " + fmt(res_t) + ", wavelet " + fmt(res_w);
    return r;
}

CriterionResult c11_mollifier(const Fixtures&) {
    CriterionResult r{11, "mollifier-family", false, ""};
    const double omega = 0.4;
    bool sandwich_ok = true;
    std::vector<double> errors;
    double worst_deriv_margin = -std::numeric_limits<double>::infinity();

    const double dsup = bump_derivative_sup();
    for (double eps : {0.1, 0.05, 0.025}) {
        const SpectralProfile g = mollifier(eps, omega);
        const std::size_t m = 200000;
        const double hi = omega + 2.0 * eps;
        const double step = 2.0 * hi / static_cast<double>(m);
        double l1 = 0.0, max_deriv = 0.0;
        double prev = g.value(-hi).real();
        for (std::size_t i = 1; i <= m; ++i) {
            const double xi = -hi + step * static_cast<double>(i);
            const double val = g.value(xi).real();
            const double chi = (std::abs(xi) <= omega) ? 1.0 : 0.0;
            const double inner = (std::abs(xi) <= omega - eps) ? 1.0 : 0.0;
            const double outer = (std::abs(xi) <= omega + eps) ? 1.0 : 0.0;
            if (val < inner - 1e-12 || val > outer + 1e-12) sandwich_ok = false;
            l1 += std::abs(val - chi) * step;
            max_deriv = std::max(max_deriv, std::abs(val - prev) / step);
            prev = val;
        }
        errors.push_back(l1);
        worst_deriv_margin = std::max(worst_deriv_margin, max_deriv - 2.0 * dsup / eps);
    }
    const double ratio1 = errors[0] / errors[1];
    const double ratio2 = errors[1] / errors[2];
    const bool halving_ok = errors[1] <= 2.0 * errors[0] && errors[2] <= 2.0 * errors[1] &&
                            ratio1 > 1.0 && ratio1 < 8.0 && ratio2 > 1.0 && ratio2 < 8.0;

    r.pass = sandwich_ok && halving_ok && worst_deriv_margin <= 0.0;
    r.details = "L1 ratios " + fmt(ratio1) + ", " + fmt(ratio2) + "; deriv margin " +
                fmt(worst_deriv_margin) + "; sandwich " + (sandwich_ok ? "ok" : "violated");
    return r;
}

CriterionResult c12_schrodinger_flow(const Fixtures&) {
    CriterionResult r{12, "schrodinger-flow", false, ""};
    const std::size_t n = 128;
    const Axis axis = symmetric_axis(4.0, n);
    CartesianField2D f;
    f.axis = axis;
    f.values.resize(n * n);
    for (std::size_t i0 = 0; i0 < n; ++i0)
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double x = axis.at(i0), y = axis.at(i1);
            f.values[i0 * n + i1] = cdouble{std::exp(-pi * (x * x + y * y)), 0.0};
        }
    const double resid = schrodinger_flow_residual(f, 0.1, 1e-3);

    CartesianField2D m = f;
    const double xi0 = 0.5, xi1 = 0.25;
    for (std::size_t i0 = 0; i0 < n; ++i0)
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double x = axis.at(i0), y = axis.at(i1);
            const double ph = two_pi * (xi0 * x + xi1 * y);
            const double env = std::exp(-pi * (x * x + y * y) / 8.0);
            m.values[i0 * n + i1] = env * cdouble{std::cos(ph), std::sin(ph)};
        }
    const double b = 0.1;
    CartesianField2D evolved = schrodinger_flow(m, b);
    std::vector<cdouble> f0 = m.values, fb = evolved.values;
    fft::forward2d(f0, n, n);
    fft::forward2d(fb, n, n);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < f0.size(); ++i)
        if (std::abs(f0[i]) > std::abs(f0[peak])) peak = i;
    const std::size_t p0 = peak / n, p1 = peak % n;
    const double dxi = 1.0 / (axis.dx * static_cast<double>(n));
    auto bin_freq = [&](std::size_t i) {
        return (i < n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n)) *
               dxi;
    };
    const double xi_sq = bin_freq(p0) * bin_freq(p0) + bin_freq(p1) * bin_freq(p1);
    const cdouble measured = fb[peak] / f0[peak];
    const cdouble expected = std::polar(1.0, -two_pi * b * xi_sq);
    const double phase_gap = std::abs(measured - expected);

    r.pass = resid < 1e-4 && phase_gap < 1e-6;
    r.details = "pde residual " + fmt(resid) + ", peak phase gap " + fmt(phase_gap);
    return r;
}

CriterionResult c13_determinism(const Fixtures& fx, const std::filesystem::path& out_dir) {
    CriterionResult r{13, "determinism", false, ""};
    const auto dir_a = out_dir / "artifacts_a";
    const auto dir_b = out_dir / "artifacts_b";
    emit_artifacts(dir_a, fx.seed);
    emit_artifacts(dir_b, fx.seed);

    bool identical = true;
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir_a)) {
        if (!entry.is_regular_file()) continue;
        ++count;
        const auto rel = std::filesystem::relative(entry.path(), dir_a);
        std::ifstream a(entry.path(), std::ios::binary);
        std::ifstream b(dir_b / rel, std::ios::binary);
        if (!a || !b) {
            identical = false;
            break;
        }
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        if (sa.str() != sb.str()) identical = false;
    }
    r.pass = identical && count > 0;
    r.details = std::to_string(count) + " artifacts compared byte-for-byte";
    return r;
}

}  // namespace

void emit_artifacts(const std::filesystem::path& dir, std::uint64_t seed) {
    std::filesystem::create_directories(dir);

    GridParams small;
    small.b_halfwidth = 16.0;
    small.n_b = 256;
    small.a_min = 0.25;
    small.a_max = 4.0;
    small.n_a = 16;
    const GridPtr agrid = build_grid(GroupSpec{GroupKind::Affine}, small);
    const Representation shannon = wavelet_rep(shannon_atom());
    io::write_field_csv(kernel(shannon, agrid), dir / "shannon_kernel.csv");

    const auto [rep, admiss] = normalize_admissible(shannon);
    io::write_json(io::to_json(admiss), dir / "admissibility.json");

    GridParams lparams;
    lparams.b_halfwidth = 1024.0;
    lparams.n_b = 1 << 15;
    const GridPtr lgrid = build_grid(GroupSpec{GroupKind::Line}, lparams);
    const VoiceField K = kernel(translation_rep(0.5), lgrid);
    std::string profile_csv = "halfwidth,p,partial_norm\n";
    for (double p : {1.0, 2.0})
        io::append_profile_csv(window_profile(K, p, dyadic_windows(16.0, 1024.0)), p, profile_csv);
    {
        std::ofstream out(dir / "sinc_profiles.csv", std::ios::trunc);
        out << profile_csv;
    }

    Rng rng(seed + 4242);
    GridParams params;
    const GridPtr line_grid = build_grid(GroupSpec{GroupKind::Line}, params);
    const Representation trans = translation_rep(0.5);
    const SpectralProfile env = mollifier(0.05, 0.4);
    std::string batch = "signal_id,p,coorbit_norm,residual,verdict\n";
    for (int i = 0; i < 3; ++i) {
        const Signal1D v = random_bandlimited_signal(line_grid->b_axis, env, rng);
        for (double p : {1.5, 2.0}) {
            const CoorbitReport rep2 = coorbit_norm_report(v, trans, line_grid, p, weight_one());
            const char* verdict = rep2.membership_residual < 1e-2 ? "member" : "outside";
            batch += std::to_string(i) + "," + format_sig(p) + "," +
                     format_sig(rep2.coorbit_norm) + "," + format_sig(rep2.membership_residual) +
                     "," + verdict + "\n";
        }
    }
    std::ofstream out(dir / "coorbit_batch.csv", std::ios::trunc);
    out << batch;
}

SelftestReport run_selftest(const SelftestConfig& config) {
    const Fixtures fx = make_fixtures(config.seed);
    SelftestReport report;

    auto run = [&](CriterionResult (*fn)(const Fixtures&)) { report.criteria.push_back(fn(fx)); };
    run(&c01_isometry);
    run(&c02_reproducing);
    run(&c03_synthesis);
    run(&c04_kernel_identities);
    run(&c05_integrability);
    run(&c06_calderon);
    run(&c07_schrodingerlet_structure);
    run(&c08_paley_wiener);
    run(&c09_appendix_suite);
    run(&c10_vector_change);
    run(&c11_mollifier);
    run(&c12_schrodinger_flow);
    report.criteria.push_back(c13_determinism(fx, config.out_dir));

    io::ordered_json summary = io::ordered_json::array();
    for (const auto& c : report.criteria) {
        report.all_pass = report.all_pass && c.pass;
        std::printf("criterion %02d %-32s %s  (%s)\n", c.id, c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.details.c_str());
        io::ordered_json entry;
        entry["id"] = c.id;
        entry["name"] = c.name;
        entry["pass"] = c.pass;
        entry["details"] = c.details;
        summary.push_back(entry);
    }
    if (config.write_artifacts) {
        io::ordered_json doc;
        doc["seed"] = config.seed;
        doc["all_pass"] = report.all_pass;
        doc["criteria"] = summary;
        io::write_json(doc, config.out_dir / "selftest_summary.json");
    }
    return report;
}

}  // namespace voicelab
