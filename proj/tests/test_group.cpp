#include <doctest.h>

#include <cmath>
#include <functional>

#include "voicelab/grid.hpp"
#include "voicelab/group.hpp"
#include "voicelab/voice.hpp"

using namespace voicelab;

namespace {
const GroupSpec line{GroupKind::Line};
const GroupSpec affine{GroupKind::Affine};
const GroupSpec circle{GroupKind::AffineCircle};
}  // namespace

TEST_CASE("affine composition law") {
    const GroupElement id = identity(affine);
    const GroupElement g{3.0, 4.0, 0.0};
    const GroupElement left = compose(affine, id, g);
    CHECK(left.b == doctest::Approx(3.0));
    CHECK(left.a == doctest::Approx(4.0));

    const GroupElement gh =
        compose(affine, GroupElement{1.0, 2.0, 0.0}, GroupElement{3.0, 4.0, 0.0});
    CHECK(gh.b == doctest::Approx(7.0));
    CHECK(gh.a == doctest::Approx(8.0));
}

TEST_CASE("composition matches the representation homomorphism") {
    // pi(g)(pi(h) v) = pi(gh) v on a sampled Gaussian
    const Axis axis = symmetric_axis(64.0, 2048);
    Signal1D v = make_signal(axis);
    for (std::size_t j = 0; j < axis.n; ++j) {
        const double x = axis.at(j);
        v.samples[j] = std::exp(-0.25 * x * x);
    }
    Representation wave = wavelet_rep(default_wavelet_atom());
    const GroupElement g{1.0, 2.0, 0.0};
    const GroupElement h{3.0, 4.0, 0.0};
    const Signal1D two_step = group_action(wave, g, group_action(wave, h, v));
    const Signal1D one_step = group_action(wave, compose(affine, g, h), v);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < axis.n; ++j) {
        num += std::norm(two_step.samples[j] - one_step.samples[j]);
        den += std::norm(one_step.samples[j]);
    }
    CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("circle coordinate reduces mod 2 pi") {
    const GroupElement g{0.0, 1.0, pi};
    const GroupElement h{0.0, 1.0, 1.5 * pi};
    const GroupElement gh = compose(circle, g, h);
    CHECK(gh.phi == doctest::Approx(0.5 * pi));
}

TEST_CASE("inverse") {
    const GroupElement id_inv = inverse(affine, GroupElement{0.0, 1.0, 0.0});
    CHECK(id_inv.b == doctest::Approx(0.0));
    CHECK(id_inv.a == doctest::Approx(1.0));

    const GroupElement gi = inverse(affine, GroupElement{4.0, 2.0, 0.0});
    CHECK(gi.b == doctest::Approx(-2.0));
    CHECK(gi.a == doctest::Approx(0.5));

    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const GroupElement g{rng.uniform(-10.0, 10.0), std::exp(rng.uniform(-2.0, 2.0)),
                             rng.uniform(0.0, two_pi)};
        const GroupElement e = compose(circle, g, inverse(circle, g));
        CHECK(std::abs(e.b) < 1e-12 * (1.0 + std::abs(g.b)));
        CHECK(std::abs(e.a - 1.0) < 1e-12);
        CHECK(std::min(e.phi, two_pi - e.phi) < 1e-12);
    }

    CHECK(inverse(line, GroupElement{3.0, 1.0, 0.0}).b == doctest::Approx(-3.0));
}

TEST_CASE("modular function") {
    CHECK(modular(circle, GroupElement{0.0, 2.0, 0.0}) == doctest::Approx(0.5));
    CHECK(modular(affine, identity(affine)) == doctest::Approx(1.0));
    CHECK(modular(line, GroupElement{17.0, 1.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("associativity over random triples") {
    for (const GroupSpec& spec : {line, affine, circle}) {
        Rng rng(11);
        for (int i = 0; i < 10000; ++i) {
            auto draw = [&]() {
                GroupElement g;
                g.b = rng.uniform(-10.0, 10.0);
                if (spec.has_scale()) g.a = std::exp(rng.uniform(-2.0, 2.0));
                if (spec.has_angle()) g.phi = rng.uniform(0.0, two_pi);
                return g;
            };
            const GroupElement g = draw(), h = draw(), k = draw();
            const GroupElement left = compose(spec, compose(spec, g, h), k);
            const GroupElement right = compose(spec, g, compose(spec, h, k));
            const double scale = 1.0 + std::abs(left.b) + left.a;
            CHECK(std::abs(left.b - right.b) < 1e-12 * scale);
            CHECK(std::abs(left.a - right.a) < 1e-12 * left.a);
            if (spec.has_angle()) {
                const double dphi = std::abs(left.phi - right.phi);
                CHECK(std::min(dphi, two_pi - dphi) < 1e-10);
            }
        }
    }
}

TEST_CASE("invalid scale throws") {
    CHECK_THROWS_AS(compose(affine, GroupElement{0.0, -1.0, 0.0}, identity(affine)),
                    std::domain_error);
    CHECK_THROWS_AS(inverse(affine, GroupElement{0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("weight validation") {
    const SampleSet samples = make_sample_set(affine, 32.0, 0.125, 8.0, 1200, 3);

    const Weight one = validate_weight(affine, weight_one(), samples);
    CHECK(one.certificates.submultiplicative);
    CHECK(one.certificates.symmetric);
    CHECK(one.certificates.bounded_below_by_one);
    CHECK(one.certificates.positive_infimum);

    const SampleSet line_samples = make_sample_set(line, 32.0, 1.0, 2.0, 1200, 4);
    Weight poly;
    poly.evaluate = [](const GroupElement& g) { return 1.0 + std::abs(g.b); };
    const Weight vp = validate_weight(line, poly, line_samples);
    CHECK(vp.certificates.submultiplicative);
    CHECK(vp.certificates.symmetric);
    CHECK(vp.certificates.bounded_below_by_one);

    // exp(-|b|) loses the positive infimum as the sampling window grows
    Weight decaying;
    decaying.evaluate = [](const GroupElement& g) { return std::exp(-std::abs(g.b)); };
    const SampleSet narrow = make_sample_set(line, 4.0, 1.0, 2.0, 1200, 5);
    CHECK(validate_weight(line, decaying, narrow).certificates.positive_infimum);
    const SampleSet wide = make_sample_set(line, 64.0, 1.0, 2.0, 1200, 5);
    CHECK_FALSE(validate_weight(line, decaying, wide).certificates.positive_infimum);

    Weight bad;
    bad.evaluate = [](const GroupElement& g) { return g.b; };
    CHECK_THROWS_AS(validate_weight(line, bad, wide), std::domain_error);

    const Weight vpre = validate_weight(affine, weight_poly(2.0), samples);
    CHECK(vpre.certificates.submultiplicative);
    CHECK(vpre.certificates.symmetric);
}

TEST_CASE("quadrature left invariance and the right-translation modular factor") {
    GridParams params;
    params.b_halfwidth = 32.0;
    params.n_b = 1024;
    params.a_min = 0.125;
    params.a_max = 8.0;
    params.n_a = 48;
    const GridPtr grid = build_grid(affine, params);
    const GroupGrid& g = *grid;

    VoiceField f = make_field(grid);
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
            const double eb = g.b_axis.at(ib) / 1.5;
            const double el = std::log(g.a_nodes[ia]) / 0.3;
            f.at(ib, ia) = std::exp(-0.5 * (eb * eb + el * el));
        }

    OversampledField res(f);
    auto haar_sum = [&](const std::function<double(double, double)>& fn) {
        double acc = 0.0;
        for (std::size_t ib = 0; ib < g.n_b(); ++ib)
            for (std::size_t ia = 0; ia < g.n_a(); ++ia)
                acc += fn(g.b_axis.at(ib), g.a_nodes[ia]) * g.quad_weight(ib, ia, 0);
        return acc;
    };

    const double base = haar_sum([&](double b, double a) { return res.sample(b, a).real(); });
    const double abs_mass =
        haar_sum([&](double b, double a) { return std::abs(res.sample(b, a)); });

    const GroupElement x{1.3, 1.47, 0.0};
    const double shifted = haar_sum([&](double b, double a) {
        const GroupElement y = compose(affine, x, GroupElement{b, a, 0.0});
        return res.sample(y.b, y.a).real();
    });
    CHECK(std::abs(shifted - base) / abs_mass < 2e-3);

    const GroupElement y{0.7, 1.9, 0.0};
    const double right = haar_sum([&](double b, double a) {
        const GroupElement z = compose(affine, GroupElement{b, a, 0.0}, y);
        return res.sample(z.b, z.a).real();
    });
    const double delta = modular(affine, inverse(affine, y));
    CHECK(std::abs(right - delta * base) / (delta * abs_mass) < 2e-3);
}
