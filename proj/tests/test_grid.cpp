#include <doctest.h>

#include <cmath>

#include "voicelab/grid.hpp"
#include "voicelab/signal.hpp"
#include "voicelab/voice.hpp"

using namespace voicelab;

TEST_CASE("line grid nodes and weights") {
    GridParams p;
    p.b_halfwidth = 1.0;
    p.n_b = 4;
    const GridPtr grid = build_grid(GroupSpec{GroupKind::Line}, p);
    REQUIRE(grid->n_b() == 4);
    const double expected[4] = {-1.0, -0.5, 0.0, 0.5};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(grid->b_axis.at(i) == doctest::Approx(expected[i]));
        CHECK(grid->quad_weight(i, 0, 0) == doctest::Approx(0.5));
    }
}

TEST_CASE("box mass matches the closed form") {
    GridParams p;
    p.b_halfwidth = 3.0;
    p.n_b = 64;
    p.a_min = 0.5;
    p.a_max = 2.0;
    p.n_a = 17;
    p.n_phi = 8;
    const GridPtr grid = build_grid(GroupSpec{GroupKind::AffineCircle}, p);
    double total = 0.0;
    for (std::size_t ib = 0; ib < grid->n_b(); ++ib)
        for (std::size_t ia = 0; ia < grid->n_a(); ++ia)
            for (std::size_t il = 0; il < grid->n_phi; ++il)
                total += grid->quad_weight(ib, ia, il);
    const double closed = 2.0 * p.b_halfwidth * (1.0 / p.a_min - 1.0 / p.a_max);
    CHECK(std::abs(total - closed) / closed < 1e-10);
    CHECK(grid->box_mass() == doctest::Approx(closed));
}

TEST_CASE("invalid grid parameters are rejected") {
    GridParams p;
    p.n_a = 1;
    CHECK_THROWS_AS(build_grid(GroupSpec{GroupKind::Affine}, p), std::invalid_argument);
    GridParams q;
    q.n_b = 5;
    CHECK_THROWS_AS(build_grid(GroupSpec{GroupKind::Line}, q), std::invalid_argument);
    GridParams r;
    r.a_min = 2.0;
    r.a_max = 1.0;
    CHECK_THROWS_AS(build_grid(GroupSpec{GroupKind::Affine}, r), std::invalid_argument);
}

TEST_CASE("constant field on a unit-mass grid") {
    GridParams p;
    p.b_halfwidth = 0.5;
    p.n_b = 4;
    const GridPtr grid = build_grid(GroupSpec{GroupKind::Line}, p);
    VoiceField f = make_field(grid);
    for (auto& v : f.values) v = cdouble{0.7, 0.0};
    for (double pp : {1.0, 1.5, 2.0, 7.0}) CHECK(lp_norm(f, pp) == doctest::Approx(0.7));
    CHECK(lp_norm(f, std::numeric_limits<double>::infinity()) == doctest::Approx(0.7));
}

TEST_CASE("sinc kernel L2 norm via Plancherel") {
    GridParams p;
    p.b_halfwidth = 512.0;
    p.n_b = 1 << 14;
    const GridPtr grid = build_grid(GroupSpec{GroupKind::Line}, p);
    VoiceField f = make_field(grid);
    const Signal1D k = sinc_kernel(0.5, grid->b_axis);
    f.values = k.samples;
    CHECK(std::abs(lp_norm(f, 2.0) - 1.0) < 1e-3);
}

TEST_CASE("p below one is rejected") {
    GridParams p;
    p.b_halfwidth = 1.0;
    p.n_b = 8;
    const GridPtr grid = build_grid(GroupSpec{GroupKind::Line}, p);
    const VoiceField f = make_field(grid);
    CHECK_THROWS_AS(lp_norm(f, 0.5), std::domain_error);
    CHECK_THROWS_AS(window_profile(f, 0.5, {1.0, 2.0}), std::domain_error);
}

TEST_CASE("absolute homogeneity of lp_norm") {
    GridParams p;
    p.b_halfwidth = 8.0;
    p.n_b = 128;
    p.a_min = 0.5;
    p.a_max = 2.0;
    p.n_a = 8;
    const GridPtr grid = build_grid(GroupSpec{GroupKind::Affine}, p);
    Rng rng(21);
    VoiceField f = make_field(grid);
    for (auto& v : f.values) v = rng.complex_normal();
    VoiceField g = f;
    const cdouble c{-2.5, 1.25};
    for (auto& v : g.values) v *= c;
    for (double pp : {1.0, 1.5, 3.0}) {
        const double lhs = lp_norm(g, pp);
        const double rhs = std::abs(c) * lp_norm(f, pp);
        CHECK(std::abs(lhs - rhs) <= 1e-13 * rhs);
    }
}

TEST_CASE("window profiles: zero field, growth at p=1, Cauchy at p=2") {
    GridParams p;
    p.b_halfwidth = 1024.0;
    p.n_b = 1 << 15;
    const GridPtr grid = build_grid(GroupSpec{GroupKind::Line}, p);

    VoiceField zero = make_field(grid);
    for (const auto& pt : window_profile(zero, 1.0, {10.0, 100.0, 1000.0}))
        CHECK(pt.partial_norm == 0.0);

    VoiceField f = make_field(grid);
    f.values = sinc_kernel(0.5, grid->b_axis).samples;

    std::vector<double> windows;
    for (double w = 10.0; w <= 1000.0; w *= 2.0) windows.push_back(w);
    windows.push_back(1000.0 + 1.0);

    const auto prof1 = window_profile(f, 1.0, windows);
    // integral of |sinc| grows logarithmically: no plateau across 10 -> 1000
    CHECK(prof1.back().partial_norm / prof1.front().partial_norm > 1.8);
    const double inc1 = (prof1.back().partial_norm - prof1[prof1.size() - 2].partial_norm) /
                        prof1.back().partial_norm;
    CHECK(inc1 > 1e-2);

    const auto prof2 = window_profile(f, 2.0, windows);
    const double inc2 = (prof2.back().partial_norm - prof2[prof2.size() - 2].partial_norm) /
                        prof2.back().partial_norm;
    CHECK(inc2 < 1e-3);

    // monotone nondecreasing in the window
    for (const auto* prof : {&prof1, &prof2})
        for (std::size_t i = 1; i < prof->size(); ++i)
            CHECK((*prof)[i].partial_norm >= (*prof)[i - 1].partial_norm);
}

TEST_CASE("grid refinement is second order") {
    auto norm_at = [](std::size_t n_b, std::size_t n_a) {
        GridParams p;
        p.b_halfwidth = 16.0;
        p.n_b = n_b;
        p.a_min = 0.25;
        p.a_max = 4.0;
        p.n_a = n_a;
        const GridPtr grid = build_grid(GroupSpec{GroupKind::Affine}, p);
        VoiceField f = make_field(grid);
        for (std::size_t ib = 0; ib < grid->n_b(); ++ib)
            for (std::size_t ia = 0; ia < grid->n_a(); ++ia) {
                const double eb = grid->b_axis.at(ib) / 2.0;
                const double el = std::log(grid->a_nodes[ia]) / 0.4;
                f.at(ib, ia) = std::exp(-0.5 * (eb * eb + el * el)) *
                               std::cos(grid->b_axis.at(ib));
            }
        return lp_norm(f, 1.5);
    };
    const double coarse = norm_at(64, 6);
    const double mid = norm_at(128, 12);
    const double fine = norm_at(256, 24);
    CHECK(std::abs(fine - mid) < std::abs(mid - coarse));
    CHECK(std::abs(fine - mid) < 0.4 * std::abs(mid - coarse));
}

TEST_CASE("weighted norms use the weight pointwise") {
    GridParams p;
    p.b_halfwidth = 2.0;
    p.n_b = 16;
    const GridPtr grid = build_grid(GroupSpec{GroupKind::Line}, p);
    VoiceField f = make_field(grid);
    for (auto& v : f.values) v = cdouble{1.0, 0.0};
    const Weight w = weight_poly(1.0);
    double expected = 0.0;
    for (std::size_t ib = 0; ib < grid->n_b(); ++ib)
        expected += std::pow((1.0 + std::abs(grid->b_axis.at(ib))), 2.0) * grid->b_axis.dx;
    CHECK(lp_norm(f, 2.0, w) == doctest::Approx(std::sqrt(expected)));
}
