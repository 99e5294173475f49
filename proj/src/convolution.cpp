#include "voicelab/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "voicelab/fft.hpp"

namespace voicelab {

namespace {

bool same_axis(const Axis& a, const Axis& b, double tol = 1e-9) {
    return a.n == b.n && std::abs(a.x0 - b.x0) <= tol * (1.0 + std::abs(a.x0)) &&
           std::abs(a.dx - b.dx) <= tol * a.dx;
}

void require_same_grid(const VoiceField& f, const VoiceField& g) {
    const GroupGrid& a = *f.grid;
    const GroupGrid& b = *g.grid;
    if (a.spec.kind != b.spec.kind || !same_axis(a.b_axis, b.b_axis) || a.n_a() != b.n_a() ||
        a.n_phi != b.n_phi)
        throw std::invalid_argument("fields must share one grid");
    for (std::size_t k = 0; k < a.n_a(); ++k)
        if (std::abs(a.a_nodes[k] - b.a_nodes[k]) > 1e-12 * a.a_nodes[k])
            throw std::invalid_argument("fields must share one grid (scale nodes differ)");
}

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

}  // namespace

Signal1D translate_left(const Signal1D& f, double shift) {
    const double units = shift / f.axis.dx;
    const double snapped = std::round(units);
    Signal1D out = f;
    if (std::abs(units - snapped) < 1e-9) {
        const auto m = static_cast<std::ptrdiff_t>(snapped);
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(f.axis.n); ++j) {
            const std::ptrdiff_t src = j - m;
            out.samples[static_cast<std::size_t>(j)] =
                (src >= 0 && src < static_cast<std::ptrdiff_t>(f.axis.n))
                    ? f.samples[static_cast<std::size_t>(src)]
                    : cdouble{0.0, 0.0};
        }
        return out;
    }
    // off-grid shift: spectral phase ramp (band-limited translation)
    SpectralProfile spec = fourier(f);
    for (std::size_t m2 = 0; m2 < spec.axis.n; ++m2) {
        const double ph = -two_pi * spec.axis.at(m2) * shift;
        spec.values[m2] *= cdouble{std::cos(ph), std::sin(ph)};
    }
    out = inv_fourier(spec);
    out.band = f.band;
    return out;
}

Signal1D check_inverse(const Signal1D& f) {
    Signal1D out = f;
    const std::size_t n = f.axis.n;
    out.axis.x0 = -(f.axis.x0 + static_cast<double>(n - 1) * f.axis.dx);
    for (std::size_t j = 0; j < n; ++j) out.samples[j] = f.samples[n - 1 - j];
    return out;
}

namespace {

std::size_t rotate_phi_index(std::size_t l, double phi, const GroupGrid& g, int sign) {
    if (g.n_phi == 1) return 0;
    const double step = two_pi / static_cast<double>(g.n_phi);
    const double units = phi / step;
    const double snapped = std::round(units);
    if (std::abs(units - snapped) > 1e-9)
        throw std::invalid_argument("angle must be phi-grid aligned");
    const auto m = static_cast<std::ptrdiff_t>(snapped) * sign;
    const auto n = static_cast<std::ptrdiff_t>(g.n_phi);
    return static_cast<std::size_t>(((static_cast<std::ptrdiff_t>(l) + m) % n + n) % n);
}

}  // namespace

VoiceField translate_left(const VoiceField& f, const GroupElement& x) {
    const GroupGrid& g = *f.grid;
    const GroupSpec spec = g.spec;
    check_element(spec, x);
    VoiceField out = make_field(f.grid);

    const bool pure_shift = (!spec.has_scale() || x.a == 1.0);
    const double units = x.b / g.b_axis.dx;
    if (pure_shift && std::abs(units - std::round(units)) < 1e-9) {
        const auto m = static_cast<std::ptrdiff_t>(std::round(units));
        for (std::size_t ib = 0; ib < g.n_b(); ++ib) {
            const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(ib) - m;
            if (src < 0 || src >= static_cast<std::ptrdiff_t>(g.n_b())) continue;
            for (std::size_t ia = 0; ia < g.n_a(); ++ia)
                for (std::size_t il = 0; il < g.n_phi; ++il)
                    out.at(ib, ia, il) =
                        f.at(static_cast<std::size_t>(src), ia,
                             rotate_phi_index(il, x.phi, g, -1));
        }
        return out;
    }

    const GroupElement xi = inverse(spec, x);
    OversampledField res(f);
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
            const GroupElement y = compose(spec, xi, g.node(ib, ia, 0));
            for (std::size_t il = 0; il < g.n_phi; ++il)
                out.at(ib, ia, il) = res.sample(y.b, y.a, rotate_phi_index(il, x.phi, g, -1));
        }
    return out;
}

VoiceField translate_right(const VoiceField& f, const GroupElement& x) {
    const GroupGrid& g = *f.grid;
    const GroupSpec spec = g.spec;
    check_element(spec, x);
    VoiceField out = make_field(f.grid);

    // exact path: pure scale step along the geometric grid with b_x == 0
    if (x.b == 0.0 && spec.has_scale() && g.n_a() >= 2) {
        const double step = std::log(x.a) / g.log_a_step();
        if (std::abs(step - std::round(step)) < 1e-9) {
            const auto m = static_cast<std::ptrdiff_t>(std::round(step));
            for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
                const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(ia) + m;
                if (src < 0 || src >= static_cast<std::ptrdiff_t>(g.n_a())) continue;
                for (std::size_t ib = 0; ib < g.n_b(); ++ib)
                    for (std::size_t il = 0; il < g.n_phi; ++il)
                        out.at(ib, ia, il) = f.at(ib, static_cast<std::size_t>(src),
                                                  rotate_phi_index(il, x.phi, g, +1));
            }
            return out;
        }
    }
    if (!spec.has_scale()) {
        // line: f(y + b_x)
        GroupElement shift{-x.b, 1.0, 0.0};
        return translate_left(f, shift);
    }

    OversampledField res(f);
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
            const GroupElement y = compose(spec, g.node(ib, ia, 0), x);
            for (std::size_t il = 0; il < g.n_phi; ++il)
                out.at(ib, ia, il) = res.sample(y.b, y.a, rotate_phi_index(il, x.phi, g, +1));
        }
    return out;
}

VoiceField check_inverse(const VoiceField& f) {
    const GroupGrid& g = *f.grid;
    VoiceField out = make_field(f.grid);
    if (!g.spec.has_scale()) {
        for (std::size_t ib = 0; ib < g.n_b(); ++ib) {
            const double b = -g.b_axis.at(ib);
            const double u = (b - g.b_axis.x0) / g.b_axis.dx;
            const double snapped = std::round(u);
            if (std::abs(u - snapped) < 1e-9 && snapped >= 0.0 &&
                snapped < static_cast<double>(g.n_b()))
                out.at(ib, 0, 0) = f.at(static_cast<std::size_t>(snapped), 0, 0);
        }
        return out;
    }
    OversampledField res(f);
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
            const GroupElement y = inverse(g.spec, g.node(ib, ia, 0));
            for (std::size_t il = 0; il < g.n_phi; ++il) {
                const std::size_t lsrc = g.n_phi == 1 ? 0 : (g.n_phi - il) % g.n_phi;
                out.at(ib, ia, il) = res.sample(y.b, y.a, lsrc);
            }
        }
    return out;
}

Signal1D convolve_line(const Signal1D& f, const Signal1D& g) {
    if (std::abs(f.axis.dx - g.axis.dx) > 1e-12 * f.axis.dx)
        throw std::invalid_argument("convolve_line: sample spacings differ");
    const std::size_t nf = f.axis.n;
    const std::size_t ng = g.axis.n;
    const std::size_t nout = nf + ng - 1;
    const std::size_t m = next_pow2(nout);

    std::vector<cdouble> fa(m, cdouble{0.0, 0.0});
    std::vector<cdouble> ga(m, cdouble{0.0, 0.0});
    std::copy(f.samples.begin(), f.samples.end(), fa.begin());
    std::copy(g.samples.begin(), g.samples.end(), ga.begin());
    fft::forward(fa);
    fft::forward(ga);
    for (std::size_t i = 0; i < m; ++i) fa[i] *= ga[i];
    fft::inverse(fa);

    Signal1D out;
    out.axis = Axis{f.axis.x0 + g.axis.x0, f.axis.dx, nout};
    out.samples.resize(nout);
    for (std::size_t i = 0; i < nout; ++i) out.samples[i] = fa[i] * f.axis.dx;
    if (f.band && g.band) {
        Interval meet{std::max(f.band->lo, g.band->lo), std::min(f.band->hi, g.band->hi)};
        if (meet.valid()) out.band = meet;
    }
    return out;
}

VoiceField convolve_affine(const VoiceField& F, const VoiceField& G) {
    require_same_grid(F, G);
    const GroupGrid& g = *F.grid;
    if (g.spec.kind != GroupKind::Affine)
        throw std::invalid_argument("convolve_affine: affine-grid fields expected");
    if (!F.all_finite() || !G.all_finite())
        throw std::invalid_argument("convolve_affine: non-finite operand");

    const std::size_t n = g.n_b();
    const std::size_t na = g.n_a();
    const std::size_t m = 2 * n;
    const double db = g.b_axis.dx;

    OversampledField res(G);

    // forward FFTs of the F slices, zero-padded to length 2N
    std::vector<std::vector<cdouble>> fhat(na);
    for (std::size_t l = 0; l < na; ++l) {
        std::vector<cdouble> slice(m, cdouble{0.0, 0.0});
        for (std::size_t ib = 0; ib < n; ++ib) slice[ib] = F.at(ib, l);
        fft::forward(slice);
        fhat[l] = std::move(slice);
    }

    VoiceField out = make_field(F.grid);
    std::vector<cdouble> acc(m);
    std::vector<cdouble> lag(m);
    for (std::size_t k = 0; k < na; ++k) {
        std::fill(acc.begin(), acc.end(), cdouble{0.0, 0.0});
        const double a_target = g.a_nodes[k];
        for (std::size_t l = 0; l < na; ++l) {
            const double alpha = g.a_nodes[l];
            const double s = a_target / alpha;
            if (s < g.a_nodes.front() / (1.0 + 1e-12) || s > g.a_nodes.back() * (1.0 + 1e-12))
                continue;  // rescaled slice lies outside G's scale box
            std::fill(lag.begin(), lag.end(), cdouble{0.0, 0.0});
            bool any = false;
            for (std::ptrdiff_t t = -static_cast<std::ptrdiff_t>(n) + 1;
                 t < static_cast<std::ptrdiff_t>(n); ++t) {
                const cdouble v = res.sample(static_cast<double>(t) * db / alpha, s);
                if (v != cdouble{0.0, 0.0}) {
                    lag[static_cast<std::size_t>((t + static_cast<std::ptrdiff_t>(m)) %
                                                 static_cast<std::ptrdiff_t>(m))] = v;
                    any = true;
                }
            }
            if (!any) continue;
            fft::forward(lag);
            const double wl = g.a_weights[l];
            for (std::size_t i = 0; i < m; ++i) acc[i] += wl * fhat[l][i] * lag[i];
        }
        fft::inverse(acc);
        for (std::size_t ib = 0; ib < n; ++ib) out.at(ib, k) = acc[ib] * db;
    }
    if (!out.all_finite()) throw std::runtime_error("convolve_affine: result not finite on grid");
    return out;
}

ModeField convolve_affine_circle(const ModeField& F, const ModeField& G) {
    if (F.empty() || G.empty()) return {};
    const VoiceField* ref = &F.begin()->second;
    for (const auto& [n, f] : F) require_same_grid(*ref, f);
    for (const auto& [n, h] : G) require_same_grid(*ref, h);
    ModeField out;
    for (const auto& [n, f] : F) {
        auto it = G.find(n);
        if (it == G.end()) continue;  // disjoint characters contribute zero
        out.emplace(n, convolve_affine(f, it->second));
    }
    return out;
}

namespace {

double rel_residual_signal(const Signal1D& a, const Signal1D& b) {
    if (a.axis.n != b.axis.n || std::abs(a.axis.x0 - b.axis.x0) > 1e-6 ||
        std::abs(a.axis.dx - b.axis.dx) > 1e-12)
        throw std::invalid_argument("residual: axes differ");
    std::vector<double> diff(a.axis.n), ref(a.axis.n);
    for (std::size_t i = 0; i < a.axis.n; ++i) {
        diff[i] = std::norm(a.samples[i] - b.samples[i]);
        ref[i] = std::norm(a.samples[i]);
    }
    const double dd = std::sqrt(pairwise_sum(diff));
    const double rr = std::sqrt(pairwise_sum(ref));
    return rr > 0.0 ? dd / rr : dd;
}

double rel_residual_field(const VoiceField& a, const VoiceField& b) {
    require_same_grid(a, b);
    std::vector<double> diff(a.values.size()), ref(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        diff[i] = std::norm(a.values[i] - b.values[i]);
        ref[i] = std::norm(a.values[i]);
    }
    const double dd = std::sqrt(pairwise_sum(diff));
    const double rr = std::sqrt(pairwise_sum(ref));
    return rr > 0.0 ? dd / rr : dd;
}

Signal1D abs_signal(const Signal1D& f) {
    Signal1D out = f;
    for (auto& s : out.samples) s = cdouble{std::abs(s), 0.0};
    return out;
}

VoiceField abs_field(const VoiceField& f) {
    VoiceField out = f;
    for (auto& s : out.values) s = cdouble{std::abs(s), 0.0};
    return out;
}

bool finite_signal(const Signal1D& f) {
    for (const auto& s : f.samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) return false;
    return true;
}

}  // namespace

ConvReport algebra_check(const Signal1D& f, const Signal1D& g, const Signal1D& h, double shift) {
    ConvReport rep;
    rep.name = "algebra_line";
    const double x = std::round(shift / f.axis.dx) * f.axis.dx;  // grid aligned

    const Signal1D fg = convolve_line(f, g);
    rep.norm_f = f.norm_l2();
    rep.norm_g = g.norm_l2();
    rep.norm_result = fg.norm_l2();

    rep.residuals["eq27_left"] =
        rel_residual_signal(convolve_line(translate_left(f, x), g), translate_left(fg, x));
    // rho(x) f = f(. + x) = lambda(-x) f on the line; Delta == 1
    rep.residuals["eq27_right"] = rel_residual_signal(convolve_line(translate_left(f, -x), g),
                                                      convolve_line(f, translate_left(g, -x)));
    rep.residuals["eq28_left"] = rel_residual_signal(convolve_line(f, translate_left(g, x)),
                                                     convolve_line(translate_left(f, x), g));
    rep.residuals["eq28_right"] =
        rel_residual_signal(convolve_line(f, translate_left(g, -x)), translate_left(fg, -x));
    rep.residuals["eq34"] = rel_residual_signal(check_inverse(fg),
                                                convolve_line(check_inverse(g), check_inverse(f)));

    const Signal1D absfg = convolve_line(abs_signal(f), abs_signal(g));
    const bool hyp = finite_signal(absfg) && finite_signal(convolve_line(absfg, abs_signal(h)));
    rep.convolvable = hyp;
    if (hyp) {
        rep.residuals["eq35"] = rel_residual_signal(convolve_line(f, convolve_line(g, h)),
                                                    convolve_line(fg, h));
    }
    return rep;
}

ConvReport algebra_check(const VoiceField& f, const VoiceField& g, const VoiceField& h,
                         const GroupElement& x) {
    ConvReport rep;
    rep.name = "algebra_affine";
    const GroupSpec spec = f.grid->spec;
    const GroupElement xi = inverse(spec, x);
    const double delta_inv = modular(spec, xi);

    const VoiceField fg = convolve_affine(f, g);
    rep.norm_f = lp_norm(f, 2.0);
    rep.norm_g = lp_norm(g, 2.0);
    rep.norm_result = lp_norm(fg, 2.0);

    rep.residuals["eq27_left"] =
        rel_residual_field(convolve_affine(translate_left(f, x), g), translate_left(fg, x));
    {
        VoiceField rhs = convolve_affine(f, translate_left(g, xi));
        for (auto& v : rhs.values) v *= delta_inv;
        rep.residuals["eq27_right"] = rel_residual_field(convolve_affine(translate_right(f, x), g), rhs);
    }
    {
        VoiceField rhs = convolve_affine(translate_right(f, xi), g);
        for (auto& v : rhs.values) v *= delta_inv;
        rep.residuals["eq28_left"] = rel_residual_field(convolve_affine(f, translate_left(g, x)), rhs);
    }
    rep.residuals["eq28_right"] =
        rel_residual_field(convolve_affine(f, translate_right(g, x)), translate_right(fg, x));
    rep.residuals["eq34"] = rel_residual_field(
        check_inverse(fg), convolve_affine(check_inverse(g), check_inverse(f)));

    const VoiceField absfg = convolve_affine(abs_field(f), abs_field(g));
    const bool hyp = absfg.all_finite() && convolve_affine(absfg, abs_field(h)).all_finite();
    rep.convolvable = hyp;
    if (hyp) {
        rep.residuals["eq35"] = rel_residual_field(convolve_affine(f, convolve_affine(g, h)),
                                                   convolve_affine(fg, h));
    }
    return rep;
}

namespace {

double young_r(double p, double q) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw std::domain_error("young: exponents must be >= 1");
    const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
    const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
    const double ir = ip + iq - 1.0;
    if (ir < -1e-12) throw std::domain_error("young: need 1/p + 1/q >= 1");
    if (ir <= 1e-12) return std::numeric_limits<double>::infinity();
    return 1.0 / ir;
}

}  // namespace

ConvReport young_suite(const Signal1D& f, const Signal1D& g, double p, double q) {
    ConvReport rep;
    rep.name = "young_line";
    rep.p = p;
    rep.q = q;
    rep.r = young_r(p, q);
    rep.norm_f = f.norm_lp(p);
    rep.norm_g = g.norm_lp(q);
    rep.norm_g_check = check_inverse(g).norm_lp(q);
    rep.norm_result = convolve_line(f, g).norm_lp(rep.r);
    rep.bound = rep.norm_f * rep.norm_g;
    rep.slack = rep.bound - rep.norm_result;
    return rep;
}

ConvReport young_suite(const VoiceField& f, const VoiceField& g, double p, double q) {
    ConvReport rep;
    rep.name = "young_affine";
    rep.p = p;
    rep.q = q;
    rep.r = young_r(p, q);
    rep.norm_f = lp_norm(f, p);
    rep.norm_g = lp_norm(g, q);
    rep.norm_g_check = lp_norm(check_inverse(g), q);
    rep.norm_result = lp_norm(convolve_affine(f, g), rep.r);
    rep.bound = rep.norm_f * rep.norm_g;
    rep.slack = rep.bound - rep.norm_result;
    return rep;
}

}  // namespace voicelab
