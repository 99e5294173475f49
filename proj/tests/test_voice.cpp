#include <doctest.h>

#include <cmath>

#include "voicelab/coorbit.hpp"
#include "voicelab/voice.hpp"

using namespace voicelab;

namespace {

GridPtr default_line() {
    GridParams p;
    return build_grid(GroupSpec{GroupKind::Line}, p);
}

GridPtr default_affine() {
    GridParams p;
    return build_grid(GroupSpec{GroupKind::Affine}, p);
}

GridPtr default_circle() {
    GridParams p;
    return build_grid(GroupSpec{GroupKind::AffineCircle}, p);
}

double signal_rel_gap(const Signal1D& a, const Signal1D& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.axis.n; ++j) {
        num += std::norm(a.samples[j] - b.samples[j]);
        den += std::norm(b.samples[j]);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("translation voice is the inclusion for band-limited signals") {
    const GridPtr grid = default_line();
    const Representation rep = translation_rep(0.5);
    Rng rng(7);
    const Signal1D v = random_bandlimited_signal(grid->b_axis, mollifier(0.05, 0.4), rng);
    const VoiceField V = voice(v, rep, grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid->n_b(); ++j)
        worst = std::max(worst, std::abs(V.values[j] - v.samples[j]));
    CHECK(worst < 1e-12);
}

TEST_CASE("translation kernel is the sinc kernel") {
    const GridPtr grid = default_line();
    const VoiceField K = kernel(translation_rep(0.5), grid);
    const Signal1D ref = sinc_kernel(0.5, grid->b_axis);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid->n_b(); ++j)
        worst = std::max(worst, std::abs(K.values[j] - ref.samples[j]));
    CHECK(worst < 1e-9);
}

TEST_CASE("kernel symmetry conj(K) = K-check") {
    const GridPtr grid = default_affine();
    const Representation rep = normalize_admissible(wavelet_rep(default_wavelet_atom())).first;
    const VoiceField K = kernel(rep, grid);
    const VoiceField Ki = check_inverse(K);
    double worst = 0.0;
    for (std::size_t ib = 0; ib < grid->n_b(); ++ib)
        for (std::size_t ia = 0; ia < grid->n_a(); ++ia)
            worst = std::max(worst, std::abs(std::conj(K.at(ib, ia)) - Ki.at(ib, ia)));
    CHECK(worst < 1e-6);
}

TEST_CASE("shannon kernel vanishes outside the scale band (1/2, 2)") {
    const GridPtr grid = default_affine();
    const VoiceField K = kernel(wavelet_rep(shannon_atom()), grid);
    double worst = 0.0;
    for (std::size_t ia = 0; ia < grid->n_a(); ++ia) {
        const double a = grid->a_nodes[ia];
        if (a > 0.5 && a < 2.0) continue;
        for (std::size_t ib = 0; ib < grid->n_b(); ++ib)
            worst = std::max(worst, std::abs(K.at(ib, ia)));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("calderon constants") {
    bool diverged = false;
    CHECK(std::abs(calderon(shannon_atom(), &diverged) - std::log(2.0)) < 1e-9);
    CHECK_FALSE(diverged);

    // dilation invariance
    CHECK(std::abs(calderon(dilated(shannon_atom(), 3.7)) - std::log(2.0)) < 1e-9);

    // empty profile integrates to zero
    SpectralProfile zero;
    zero.two_sided = true;
    zero.support = {0.3, 0.3};
    zero.eval = [](double) { return cdouble{0.0, 0.0}; };
    CHECK(calderon(zero) == 0.0);

    // support touching xi = 0 flags divergence
    calderon(indicator_band(0.0, 0.5, true), &diverged);
    CHECK(diverged);
}

TEST_CASE("admissibility normalization") {
    const auto [rep, report] = normalize_admissible(wavelet_rep(shannon_atom()));
    CHECK(report.admissible);
    CHECK(report.normalization.at(0) == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(1e-9));
    CHECK(std::abs(report.calderon_constants.at(0) - 1.0) < 1e-9);
    CHECK(std::abs(rep.atom.value(0.3).real() - 1.0 / std::sqrt(std::log(2.0))) < 1e-9);

    // idempotent: renormalizing an admissible atom applies factor 1
    const auto [rep2, report2] = normalize_admissible(rep);
    CHECK(std::abs(report2.normalization.at(0) - 1.0) < 1e-9);

    // a translation atom with |u_hat| = 1/2 on Omega cannot be admissible
    CHECK_THROWS_AS(normalize_admissible(translation_rep(0.5, indicator_band(0.0, 0.5, true, 0.5))),
                    std::domain_error);
}

TEST_CASE("schrodingerlet atom construction") {
    const Axis axis = symmetric_axis(32.0, 1024);
    Signal1D u0 = make_signal(axis);
    for (std::size_t j = 0; j < axis.n; ++j) {
        const double x = axis.at(j);
        u0.samples[j] = std::exp(-x * x) * std::cos(1.5 * x);
    }
    std::vector<double> decay(17);
    for (int k = 0; k <= 16; ++k) decay[k] = std::pow(0.5, k);

    const SchrodingerletAtom atom = build_schrodingerlet_atom(u0, decay);
    CHECK(atom.atom.modes.size() == 33);
    // sum a_n^alpha stays finite over the truncated family
    for (double alpha : {0.25, 0.5, 1.0}) {
        double sum = 0.0;
        for (int n = -16; n <= 16; ++n) sum += std::pow(decay[std::abs(n)], alpha);
        CHECK(std::isfinite(sum));
        CHECK(sum > 1.0);
    }
    const double u0sq = u0.norm_l2() * u0.norm_l2();
    double expected = 0.0;
    for (int n = -16; n <= 16; ++n) expected += decay[std::abs(n)] * u0sq;
    CHECK(atom.norm_sq_estimate == doctest::Approx(expected).epsilon(1e-12));

    std::vector<double> flat{1.0, 1.0};
    CHECK_THROWS_AS(build_schrodingerlet_atom(u0, flat), std::invalid_argument);

    // every dilated mode of an admissible profile keeps the Calderon constant
    const auto [rep, report] =
        normalize_admissible(schrodingerlet_rep(default_wavelet_atom(false), 0.5, 16));
    for (const auto& [n, c] : report.calderon_constants) CHECK(std::abs(c - 1.0) < 1e-9);
}

TEST_CASE("mode-0 signals give phi-constant voices equal to the wavelet voice") {
    const GridPtr grid3 = default_circle();
    const Representation rep =
        normalize_admissible(schrodingerlet_rep(default_wavelet_atom(false), 0.5, 2)).first;
    Rng rng(9);
    Signal2D v;
    v.modes.emplace(0, random_bandlimited_signal(grid3->b_axis,
                                                 lognormal_band(std::pow(2.0, -1.5), 0.12, false),
                                                 rng));
    const VoiceField V = voice(v, rep, grid3);
    double worst = 0.0;
    for (std::size_t ib = 0; ib < grid3->n_b(); ib += 17)
        for (std::size_t ia = 0; ia < grid3->n_a(); ++ia)
            for (std::size_t il = 1; il < grid3->n_phi; ++il)
                worst = std::max(worst, std::abs(V.at(ib, ia, il) - V.at(ib, ia, 0)));
    CHECK(worst < 1e-12);

    Representation wrep;
    wrep.kind = RepKind::Wavelet;
    wrep.atom = rep.mode_atoms.at(0);
    const VoiceField W = voice(v.modes.at(0), wrep, affine_subgrid(grid3));
    double gap = 0.0;
    for (std::size_t ib = 0; ib < grid3->n_b(); ib += 17)
        for (std::size_t ia = 0; ia < grid3->n_a(); ++ia)
            gap = std::max(gap, std::abs(V.at(ib, ia, 0) - W.at(ib, ia)));
    CHECK(gap < 1e-12);
}

TEST_CASE("parseval across modes is exact on the phi grid") {
    const GridPtr grid3 = default_circle();
    const Representation rep =
        normalize_admissible(schrodingerlet_rep(default_wavelet_atom(false), 0.5, 2)).first;
    Rng rng(19);
    Signal2D v;
    for (int n = -2; n <= 2; ++n)
        v.modes.emplace(
            n, random_bandlimited_signal(
                   grid3->b_axis,
                   dilated(lognormal_band(std::pow(2.0, -1.5), 0.12, false), rep.mode_scale.at(n)),
                   rng));
    const ModeField modes = voice_modes(v, rep, grid3);
    const VoiceField V = assemble_modes(modes, grid3);
    double mode_mass = 0.0;
    for (const auto& [n, fn] : modes) {
        const double nn = lp_norm(fn, 2.0);
        mode_mass += nn * nn;
    }
    const double full = lp_norm(V, 2.0);
    CHECK(std::abs(full * full - mode_mass) < 1e-10 * mode_mass);
}

TEST_CASE("voice is covariant under grid-aligned translations") {
    const GridPtr lgrid = default_line();
    const GridPtr agrid = default_affine();
    Rng rng(29);
    const double shift = 16.0 * lgrid->b_axis.dx;

    // translation representation
    {
        const Representation rep = translation_rep(0.5);
        const Signal1D v = random_bandlimited_signal(lgrid->b_axis, mollifier(0.05, 0.4), rng);
        const Signal1D shifted = group_action(rep, GroupElement{shift, 1.0, 0.0}, v);
        const VoiceField lhs = voice(shifted, rep, lgrid);
        const VoiceField rhs = translate_left(voice(v, rep, lgrid), GroupElement{shift, 1.0, 0.0});
        double worst = 0.0;
        for (std::size_t j = 64; j + 64 < lgrid->n_b(); ++j)
            worst = std::max(worst, std::abs(lhs.values[j] - rhs.values[j]));
        CHECK(worst < 1e-6);
    }
    // wavelet representation
    {
        const Representation rep = normalize_admissible(wavelet_rep(default_wavelet_atom())).first;
        const Signal1D v = random_bandlimited_signal(
            lgrid->b_axis, lognormal_band(std::pow(2.0, -1.5), 0.12, true), rng);
        const Signal1D shifted = group_action(rep, GroupElement{shift, 1.0, 0.0}, v);
        const VoiceField lhs = voice(shifted, rep, agrid);
        const VoiceField rhs = translate_left(voice(v, rep, agrid), GroupElement{shift, 1.0, 0.0});
        double worst = 0.0, scale = 0.0;
        for (std::size_t ib = 64; ib + 64 < agrid->n_b(); ++ib)
            for (std::size_t ia = 0; ia < agrid->n_a(); ++ia) {
                worst = std::max(worst, std::abs(lhs.at(ib, ia) - rhs.at(ib, ia)));
                scale = std::max(scale, std::abs(lhs.at(ib, ia)));
            }
        CHECK(worst / scale < 1e-6);
    }
}

TEST_CASE("synthesis inverts the voice transform") {
    const GridPtr agrid = default_affine();
    const Representation rep = normalize_admissible(wavelet_rep(default_wavelet_atom())).first;
    Rng rng(39);
    const Signal1D v = random_bandlimited_signal(
        agrid->b_axis, lognormal_band(std::pow(2.0, -1.5), 0.12, true), rng);
    const Signal1D back = synthesize(voice(v, rep, agrid), rep);
    CHECK(signal_rel_gap(back, v) < 1e-3);

    // zero field synthesizes to zero
    const Signal1D zero = synthesize(make_field(agrid), rep);
    CHECK(zero.norm_l2() == 0.0);
}

TEST_CASE("K is idempotent under right convolution") {
    const GridPtr agrid = default_affine();
    const Representation rep = normalize_admissible(wavelet_rep(default_wavelet_atom())).first;
    const VoiceField K = kernel(rep, agrid);
    CHECK(reproduce(K, K).second < 1e-3);
}

TEST_CASE("vector change reduces to the reproducing formula when the vectors agree") {
    const GridPtr agrid = default_affine();
    const Representation rep = normalize_admissible(wavelet_rep(default_wavelet_atom())).first;
    Rng rng(49);
    const Signal1D v = random_bandlimited_signal(
        agrid->b_axis, lognormal_band(std::pow(2.0, -1.5), 0.12, true), rng);
    CHECK(vector_change(v, rep, rep, agrid) < 1e-3);
}

TEST_CASE("vector change between unimodular translation atoms") {
    const GridPtr lgrid = default_line();
    SpectralProfile phase;
    phase.two_sided = true;
    phase.support = {0.0, 0.5};
    phase.eval = [](double xi) { return std::polar(1.0, std::cos(7.0 * xi)); };
    const Representation u = translation_rep(0.5);
    const Representation w = translation_rep(0.5, phase);
    Rng rng(59);
    const Signal1D v = random_bandlimited_signal(lgrid->b_axis, mollifier(0.05, 0.4), rng);
    CHECK(vector_change(v, u, w, lgrid) < 1e-3);
}

TEST_CASE("vector change: shannon against a smooth normalized bump") {
    const GridPtr agrid = default_affine();
    const Representation u = normalize_admissible(wavelet_rep(shannon_atom())).first;
    const Representation w =
        normalize_admissible(wavelet_rep(lognormal_band(std::pow(2.0, -1.5), 0.1, true))).first;
    Rng rng(69);
    const Signal1D v =
        random_bandlimited_signal(agrid->b_axis, indicator_band(0.26, 0.49, true), rng);
    CHECK(vector_change(v, u, w, agrid) < 1e-2);
}

TEST_CASE("polar unitary map") {
    const std::size_t n = 256;
    const Axis axis = symmetric_axis(4.0, n);
    CartesianField2D v;
    v.axis = axis;
    v.values.resize(n * n);
    for (std::size_t i0 = 0; i0 < n; ++i0)
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double x = axis.at(i0), y = axis.at(i1);
            v.values[i0 * n + i1] = cdouble{std::exp(-pi * (x * x + y * y)), 0.0};
        }

    const PolarField p = polar_unitary(v, 2048, 64, 32.0);
    // radial Gaussian maps to sqrt(pi) e^{-pi xi}, independent of theta
    double worst = 0.0;
    for (std::size_t i = 0; i < p.xi_axis.n; i += 37) {
        const double xi = p.xi_axis.at(i);
        for (std::size_t l = 0; l < p.n_theta; ++l)
            worst = std::max(worst, std::abs(p.values[i * p.n_theta + l] -
                                             cdouble{std::sqrt(pi) * std::exp(-pi * xi), 0.0}));
    }
    CHECK(worst < 1e-3);

    CHECK(std::abs(p.norm_l2() - v.norm_l2()) / v.norm_l2() < 1e-3);

    const CartesianField2D back = polar_unitary_inverse(p, axis);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        num += std::norm(back.values[i] - v.values[i]);
        den += std::norm(v.values[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-3);

    // rotating the input shifts theta in the output
    CartesianField2D rotated;
    rotated.axis = axis;
    rotated.values.resize(n * n);
    const double phi = two_pi * 8.0 / 64.0;  // eight theta bins
    for (std::size_t i0 = 0; i0 < n; ++i0)
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double x = axis.at(i0), y = axis.at(i1);
            const double xr = std::cos(phi) * x + std::sin(phi) * y;
            const double e = (xr - 1.0) / 0.8;
            rotated.values[i0 * n + i1] = cdouble{std::exp(-0.5 * e * e - 0.3 * (x * x + y * y)), 0.0};
        }
    CartesianField2D base;
    base.axis = axis;
    base.values.resize(n * n);
    for (std::size_t i0 = 0; i0 < n; ++i0)
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double x = axis.at(i0), y = axis.at(i1);
            const double e = (x - 1.0) / 0.8;
            base.values[i0 * n + i1] = cdouble{std::exp(-0.5 * e * e - 0.3 * (x * x + y * y)), 0.0};
        }
    const PolarField pr = polar_unitary(rotated, 512, 64, 32.0);
    const PolarField pb = polar_unitary(base, 512, 64, 32.0);
    double gap = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < pr.xi_axis.n; ++i)
        for (std::size_t l = 0; l < 64; ++l) {
            gap = std::max(gap, std::abs(pr.values[i * 64 + (l + 8) % 64] - pb.values[i * 64 + l]));
            scale = std::max(scale, std::abs(pb.values[i * 64 + l]));
        }
    CHECK(gap / scale < 1e-6);
}

TEST_CASE("schrodinger flow") {
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

    // b = 0 is the identity
    const CartesianField2D same = schrodinger_flow(f, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        worst = std::max(worst, std::abs(same.values[i] - f.values[i]));
    CHECK(worst < 1e-13);

    CHECK(schrodinger_flow_residual(f, 0.1, 1e-3) < 1e-4);

    // unitarity of the flow
    const CartesianField2D moved = schrodinger_flow(f, 0.37);
    CHECK(std::abs(moved.norm_l2() - f.norm_l2()) < 1e-12);
}
