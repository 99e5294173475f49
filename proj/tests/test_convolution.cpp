#include <doctest.h>

#include <cmath>

#include "voicelab/convolution.hpp"
#include "voicelab/io.hpp"
#include "voicelab/voice.hpp"

using namespace voicelab;

namespace {

Signal1D gaussian_bump(const Axis& axis, double center, double width, cdouble amp = 1.0) {
    Signal1D f = make_signal(axis);
    for (std::size_t j = 0; j < axis.n; ++j) {
        const double e = (axis.at(j) - center) / width;
        if (std::abs(e) < 9.0) f.samples[j] = amp * std::exp(-0.5 * e * e);
    }
    return f;
}

GridPtr small_affine() {
    GridParams p;
    p.b_halfwidth = 8.0;
    p.n_b = 128;
    p.a_min = 0.5;
    p.a_max = 2.0;
    p.n_a = 9;  // ratio-closed
    return build_grid(GroupSpec{GroupKind::Affine}, p);
}

VoiceField affine_bump(GridPtr grid, double bc, double sb, double lc, double sl, cdouble amp) {
    const GroupGrid& g = *grid;
    VoiceField f = make_field(std::move(grid));
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
            const double eb = (g.b_axis.at(ib) - bc) / sb;
            const double el = (std::log(g.a_nodes[ia]) - lc) / sl;
            f.at(ib, ia) = amp * std::exp(-0.5 * (eb * eb + el * el));
        }
    return f;
}

}  // namespace

TEST_CASE("convolving with a discrete delta is the identity") {
    const Axis axis = symmetric_axis(8.0, 256);
    Rng rng(3);
    Signal1D f = make_signal(axis);
    for (auto& s : f.samples) s = rng.complex_normal();
    Signal1D delta = make_signal(axis);
    delta.samples[axis.n / 2] = cdouble{1.0 / axis.dx, 0.0};
    const Signal1D conv = convolve_line(f, delta);
    // delta sits at x = 0, so the output window contains f shifted by -W
    double worst = 0.0;
    for (std::size_t j = 0; j < axis.n; ++j)
        worst = std::max(worst, std::abs(conv.samples[j + axis.n / 2] - f.samples[j]));
    CHECK(worst < 1e-12);
}

TEST_CASE("box against box gives the triangle") {
    const Axis axis{0.0, 1.0 / 256.0, 512};  // covers [0, 2)
    Signal1D box = make_signal(axis);
    for (std::size_t j = 0; j < axis.n; ++j)
        if (axis.at(j) <= 1.0) box.samples[j] = cdouble{1.0, 0.0};
    const Signal1D tri = convolve_line(box, box);
    double worst = 0.0;
    for (std::size_t j = 0; j < tri.axis.n; ++j) {
        const double x = tri.axis.at(j);
        const double expected = x <= 1.0 ? x : std::max(0.0, 2.0 - x);
        worst = std::max(worst, std::abs(tri.samples[j].real() - expected));
    }
    CHECK(worst < 1e-2);  // rectangle-rule edge cells
    const std::size_t peak = static_cast<std::size_t>((1.0 - tri.axis.x0) / tri.axis.dx);
    CHECK(tri.samples[peak].real() == doctest::Approx(1.0).epsilon(1e-2));

    // engine vs direct O(N^2) sum
    double gap = 0.0;
    for (std::size_t j = 0; j < tri.axis.n; j += 5) {
        cdouble direct{0.0, 0.0};
        for (std::size_t i = 0; i < axis.n; ++i) {
            const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
            if (k >= 0 && k < static_cast<std::ptrdiff_t>(axis.n))
                direct += box.samples[i] * box.samples[static_cast<std::size_t>(k)];
        }
        gap = std::max(gap, std::abs(tri.samples[j] - direct * axis.dx));
    }
    CHECK(gap < 1e-10);
}

TEST_CASE("spacing mismatch is rejected") {
    const Signal1D f = make_signal(symmetric_axis(4.0, 64));
    const Signal1D g = make_signal(symmetric_axis(4.0, 128));
    CHECK_THROWS_AS(convolve_line(f, g), std::invalid_argument);
}

TEST_CASE("young inequalities on the line") {
    const Axis axis = symmetric_axis(16.0, 1024);
    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        const Signal1D f = gaussian_bump(axis, rng.uniform(-4.0, 4.0), rng.uniform(0.4, 1.5),
                                         cdouble(0.3 + rng.uniform(), 0.0));
        const Signal1D g = gaussian_bump(axis, rng.uniform(-4.0, 4.0), rng.uniform(0.4, 1.5),
                                         cdouble(0.3 + rng.uniform(), rng.uniform()));
        const ConvReport r12 = young_suite(f, g, 1.0, 2.0);
        CHECK(r12.slack >= -1e-9);
        CHECK(r12.r == doctest::Approx(2.0));

        // max |f conv g| <= ||f||_2 ||g-check||_2
        const ConvReport r22 = young_suite(f, g, 2.0, 2.0);
        CHECK(std::isinf(r22.r));
        const double maxval = convolve_line(f, g).norm_lp(std::numeric_limits<double>::infinity());
        CHECK(maxval <= r22.norm_f * r22.norm_g_check + 1e-9);
    }
    const Signal1D f = gaussian_bump(axis, 0.0, 1.0);
    CHECK_THROWS_AS(young_suite(f, f, 3.0, 3.0), std::domain_error);
}

TEST_CASE("line algebra identities at roundoff") {
    const Axis axis = symmetric_axis(16.0, 512);
    Rng rng(17);
    const Signal1D f = gaussian_bump(axis, -1.0, 0.8, {1.0, 0.4});
    const Signal1D g = gaussian_bump(axis, 2.0, 0.6, {0.7, -0.2});
    const Signal1D h = gaussian_bump(axis, 0.5, 1.1, {-0.4, 0.9});
    (void)rng;
    const ConvReport rep = algebra_check(f, g, h, 1.5);
    CHECK(rep.convolvable);
    for (const auto& [name, residual] : rep.residuals) {
        INFO(name);
        CHECK(residual < 1e-10);
    }
}

TEST_CASE("affine engine matches the brute-force double sum") {
    const GridPtr grid = small_affine();
    const GroupGrid& g = *grid;
    Rng rng(23);
    VoiceField F = affine_bump(grid, 0.5, 1.2, 0.1, 0.25, {1.0, 0.3});
    VoiceField G = affine_bump(grid, -0.4, 0.9, -0.1, 0.3, {0.8, -0.5});
    for (auto& v : F.values) v += 0.02 * rng.complex_normal();

    const VoiceField conv = convolve_affine(F, G);
    OversampledField res(G);
    double gap = 0.0, scale = 0.0;
    for (std::size_t jb = 0; jb < g.n_b(); jb += 5)
        for (std::size_t ka = 0; ka < g.n_a(); ++ka) {
            cdouble direct{0.0, 0.0};
            for (std::size_t ib = 0; ib < g.n_b(); ++ib)
                for (std::size_t la = 0; la < g.n_a(); ++la) {
                    const double alpha = g.a_nodes[la];
                    direct += F.at(ib, la) *
                              res.sample((g.b_axis.at(jb) - g.b_axis.at(ib)) / alpha,
                                         g.a_nodes[ka] / alpha) *
                              g.b_axis.dx * g.a_weights[la];
                }
            gap = std::max(gap, std::abs(conv.at(jb, ka) - direct));
            scale = std::max(scale, std::abs(direct));
        }
    CHECK(gap / scale < 1e-10);
}

TEST_CASE("bilinearity of the affine engine") {
    const GridPtr grid = small_affine();
    const VoiceField f1 = affine_bump(grid, 0.5, 1.0, 0.0, 0.25, {1.0, 0.0});
    const VoiceField f2 = affine_bump(grid, -1.0, 0.7, 0.1, 0.2, {0.0, 1.0});
    const VoiceField g = affine_bump(grid, 0.0, 0.8, -0.1, 0.25, {0.6, 0.2});
    const cdouble alpha{1.7, -0.3};

    VoiceField combo = f1;
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = alpha * f1.values[i] + f2.values[i];
    const VoiceField lhs = convolve_affine(combo, g);
    const VoiceField c1 = convolve_affine(f1, g);
    const VoiceField c2 = convolve_affine(f2, g);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
        worst = std::max(worst, std::abs(lhs.values[i] - (alpha * c1.values[i] + c2.values[i])));
        scale = std::max(scale, std::abs(lhs.values[i]));
    }
    CHECK(worst < 1e-12 * std::max(scale, 1.0));
}

TEST_CASE("a narrow normalized bump acts as an approximate identity") {
    GridParams p;
    p.b_halfwidth = 16.0;
    p.n_b = 512;
    p.a_min = 0.25;
    p.a_max = 4.0;
    p.n_a = 33;
    const GridPtr grid = build_grid(GroupSpec{GroupKind::Affine}, p);
    const GroupGrid& g = *grid;

    const VoiceField F = affine_bump(grid, 0.0, 2.0, 0.0, 0.4, {1.0, 0.0});
    VoiceField G = affine_bump(grid, 0.0, 0.05, 0.0, 0.05, {1.0, 0.0});
    double mass = 0.0;
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia)
            mass += G.at(ib, ia).real() * g.quad_weight(ib, ia, 0);
    for (auto& v : G.values) v /= mass;

    const VoiceField conv = convolve_affine(F, G);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        num += std::norm(conv.values[i] - F.values[i]);
        den += std::norm(F.values[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-2);
}

TEST_CASE("affine identities: translation equivariance and the check identity") {
    GridParams p;
    p.b_halfwidth = 32.0;
    p.n_b = 1024;
    p.a_min = 0.125;
    p.a_max = 8.0;
    p.n_a = 49;  // ratio-closed
    const GridPtr grid = build_grid(GroupSpec{GroupKind::Affine}, p);
    const VoiceField f = affine_bump(grid, 0.25, 0.6, 0.05, 0.12, {1.0, 0.2});
    const VoiceField g = affine_bump(grid, -0.5, 0.55, -0.05, 0.11, {0.7, -0.4});
    const VoiceField h = affine_bump(grid, 0.0, 0.5, 0.0, 0.1, {0.4, 0.1});

    const GroupElement shift{16.0 * grid->b_axis.dx, 1.0, 0.0};
    const ConvReport rep = algebra_check(f, g, h, shift);
    CHECK(rep.residuals.at("eq27_left") < 1e-6);
    CHECK(rep.residuals.at("eq34") < 1e-3);
    CHECK(rep.residuals.at("eq35") < 1e-3);
    CHECK(rep.residuals.at("eq27_right") < 1e-3);
    CHECK(rep.convolvable);
}

TEST_CASE("mode convolution reduces to the affine engine and kills disjoint characters") {
    const GridPtr grid = small_affine();
    ModeField F, G;
    F.emplace(0, affine_bump(grid, 0.3, 1.0, 0.0, 0.2, {1.0, 0.0}));
    G.emplace(0, affine_bump(grid, -0.3, 0.8, 0.0, 0.25, {0.5, 0.5}));
    const ModeField out = convolve_affine_circle(F, G);
    REQUIRE(out.size() == 1);
    const VoiceField direct = convolve_affine(F.at(0), G.at(0));
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.values.size(); ++i)
        worst = std::max(worst, std::abs(direct.values[i] - out.at(0).values[i]));
    CHECK(worst == 0.0);

    ModeField F1, G2;
    F1.emplace(1, affine_bump(grid, 0.0, 1.0, 0.0, 0.2, {1.0, 0.0}));
    G2.emplace(2, affine_bump(grid, 0.0, 1.0, 0.0, 0.2, {1.0, 0.0}));
    CHECK(convolve_affine_circle(F1, G2).empty());
}

TEST_CASE("conv report serializes with fixed keys") {
    const Axis axis = symmetric_axis(8.0, 128);
    const Signal1D f = gaussian_bump(axis, 0.0, 1.0);
    const ConvReport rep = young_suite(f, f, 1.0, 2.0);
    const auto j = io::to_json(rep);
    auto it = j.begin();
    CHECK(it.key() == "name");
    ++it;
    CHECK(it.key() == "p");
    CHECK(j.contains("slack"));
    CHECK(j.contains("norm_g_check"));
}

TEST_CASE("signal io round trips") {
    const Axis axis = symmetric_axis(4.0, 64);
    Rng rng(67);
    Signal1D f = make_signal(axis);
    for (auto& s : f.samples) s = rng.complex_normal();

    const auto dir = std::filesystem::temp_directory_path() / "voicelab_io_test";
    std::filesystem::create_directories(dir);
    io::write_signal_binary(f, dir / "sig.bin");
    const Signal1D back = io::read_signal_binary(dir / "sig.bin");
    REQUIRE(back.axis.n == f.axis.n);
    double worst = 0.0;
    for (std::size_t j = 0; j < f.axis.n; ++j)
        worst = std::max(worst, std::abs(back.samples[j] - f.samples[j]));
    CHECK(worst == 0.0);  // binary is exact

    io::write_signal_csv(f, dir / "sig.csv");
    const Signal1D csv = io::read_signal_csv(dir / "sig.csv");
    worst = 0.0;
    for (std::size_t j = 0; j < f.axis.n; ++j)
        worst = std::max(worst, std::abs(csv.samples[j] - f.samples[j]));
    CHECK(worst < 1e-10);  // 12 significant digits
}
