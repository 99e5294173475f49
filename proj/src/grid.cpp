#include "voicelab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "voicelab/fft.hpp"
#include "voicelab/signal.hpp"

namespace voicelab {

double GroupGrid::log_a_step() const {
    if (a_nodes.size() < 2) return 0.0;
    return std::log(a_nodes[1] / a_nodes[0]);
}

GroupElement GroupGrid::node(std::size_t i_b, std::size_t i_a, std::size_t i_phi) const {
    GroupElement g;
    g.b = b_axis.at(i_b);
    g.a = a_nodes[i_a];
    g.phi = spec.has_angle() ? phi_node(i_phi) : 0.0;
    return g;
}

double GroupGrid::box_mass() const {
    const double b_mass = b_axis.span();
    if (!spec.has_scale()) return b_mass;
    return b_mass * (1.0 / a_nodes.front() - 1.0 / a_nodes.back());
}

GridPtr build_grid(const GroupSpec& spec, const GridParams& params) {
    if (!(params.b_halfwidth > 0.0))
        throw std::invalid_argument("build_grid: b_halfwidth must be positive");
    if (params.n_b < 4 || params.n_b % 2 != 0)
        throw std::invalid_argument("build_grid: n_b must be even and >= 4");

    auto grid = std::make_shared<GroupGrid>();
    grid->spec = spec;
    grid->b_axis = symmetric_axis(params.b_halfwidth, params.n_b);

    if (spec.has_scale()) {
        if (!(params.a_min > 0.0 && params.a_min < params.a_max))
            throw std::invalid_argument("build_grid: need 0 < a_min < a_max");
        if (params.n_a < 2) throw std::invalid_argument("build_grid: n_a must be >= 2");
        const std::size_t n = params.n_a;
        grid->a_nodes.resize(n);
        const double ratio = std::pow(params.a_max / params.a_min,
                                      1.0 / static_cast<double>(n - 1));
        for (std::size_t k = 0; k < n; ++k)
            grid->a_nodes[k] = params.a_min * std::pow(ratio, static_cast<double>(k));
        grid->a_nodes.front() = params.a_min;
        grid->a_nodes.back() = params.a_max;
        // exact cell masses of da/a^2 with geometric-midpoint cell boundaries
        grid->a_weights.resize(n);
        std::vector<double> cuts(n + 1);
        cuts[0] = params.a_min;
        cuts[n] = params.a_max;
        for (std::size_t k = 1; k < n; ++k)
            cuts[k] = std::sqrt(grid->a_nodes[k - 1] * grid->a_nodes[k]);
        for (std::size_t k = 0; k < n; ++k)
            grid->a_weights[k] = 1.0 / cuts[k] - 1.0 / cuts[k + 1];
    } else {
        grid->a_nodes = {1.0};
        grid->a_weights = {1.0};
    }

    if (spec.has_angle()) {
        if (params.n_phi < 2) throw std::invalid_argument("build_grid: n_phi must be >= 2");
        grid->n_phi = params.n_phi;
    } else {
        grid->n_phi = 1;
    }
    return grid;
}

VoiceField make_field(GridPtr grid) {
    VoiceField f;
    f.grid = std::move(grid);
    f.values.assign(f.grid->size(), cdouble{0.0, 0.0});
    return f;
}

bool VoiceField::all_finite() const {
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

namespace {

double node_weight_checked(const VoiceField& field) {
    if (!field.grid) throw std::invalid_argument("field has no grid");
    if (field.values.size() != field.grid->size())
        throw std::invalid_argument("field value/grid size mismatch");
    return 0.0;
}

}  // namespace

double lp_norm(const VoiceField& field, double p, const Weight& w) {
    node_weight_checked(field);
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must satisfy p >= 1");
    const GroupGrid& g = *field.grid;

    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t ib = 0; ib < g.n_b(); ++ib)
            for (std::size_t ia = 0; ia < g.n_a(); ++ia)
                for (std::size_t il = 0; il < g.n_phi; ++il) {
                    const double wv = w(g.node(ib, ia, il));
                    m = std::max(m, wv * std::abs(field.at(ib, ia, il)));
                }
        return m;
    }

    std::vector<double> terms(field.values.size());
    std::size_t idx = 0;
    for (std::size_t ib = 0; ib < g.n_b(); ++ib)
        for (std::size_t ia = 0; ia < g.n_a(); ++ia)
            for (std::size_t il = 0; il < g.n_phi; ++il, ++idx) {
                const double wv = w(g.node(ib, ia, il));
                const double mag = wv * std::abs(field.values[g.index(ib, ia, il)]);
                terms[idx] = std::pow(mag, p) * g.quad_weight(ib, ia, il);
            }
    return std::pow(pairwise_sum(terms), 1.0 / p);
}

double lp_norm(const VoiceField& field, double p) { return lp_norm(field, p, weight_one()); }

std::vector<WindowPoint> window_profile(const VoiceField& field, double p,
                                        const std::vector<double>& windows, const Weight& w) {
    node_weight_checked(field);
    if (!(p >= 1.0)) throw std::domain_error("window_profile: p must satisfy p >= 1");
    for (std::size_t i = 1; i < windows.size(); ++i)
        if (!(windows[i] > windows[i - 1]))
            throw std::invalid_argument("window_profile: windows must be increasing");

    const GroupGrid& g = *field.grid;
    // accumulate |w f|^p mass per b index once, then prefix over windows
    std::vector<double> b_mass(g.n_b(), 0.0);
    for (std::size_t ib = 0; ib < g.n_b(); ++ib) {
        std::vector<double> terms(g.n_a() * g.n_phi);
        std::size_t t = 0;
        for (std::size_t ia = 0; ia < g.n_a(); ++ia)
            for (std::size_t il = 0; il < g.n_phi; ++il, ++t) {
                const double wv = w(g.node(ib, ia, il));
                const double mag = wv * std::abs(field.values[g.index(ib, ia, il)]);
                terms[t] = std::pow(mag, p) * g.quad_weight(ib, ia, il);
            }
        b_mass[ib] = pairwise_sum(terms);
    }

    std::vector<WindowPoint> out;
    out.reserve(windows.size());
    for (double hw : windows) {
        std::vector<double> inside;
        inside.reserve(g.n_b());
        for (std::size_t ib = 0; ib < g.n_b(); ++ib)
            if (std::abs(g.b_axis.at(ib)) <= hw * (1.0 + 1e-12)) inside.push_back(b_mass[ib]);
        out.push_back(WindowPoint{hw, std::pow(pairwise_sum(inside), 1.0 / p)});
    }
    return out;
}

std::vector<WindowPoint> window_profile(const VoiceField& field, double p,
                                        const std::vector<double>& windows) {
    return window_profile(field, p, windows, weight_one());
}

OversampledField::OversampledField(const VoiceField& field, std::size_t oversample)
    : grid_(field.grid), oversample_(oversample) {
    node_weight_checked(field);
    const GroupGrid& g = *grid_;
    const std::size_t n = g.n_b();
    std::size_t fine_n = 1;
    while (fine_n < n * oversample_) fine_n <<= 1;
    oversample_ = fine_n / n;
    fine_axis_ = Axis{g.b_axis.x0, g.b_axis.dx * static_cast<double>(n) / static_cast<double>(fine_n),
                      fine_n};

    slices_.resize(g.n_a() * g.n_phi);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t ia = 0; ia < g.n_a(); ++ia) {
        for (std::size_t il = 0; il < g.n_phi; ++il) {
            std::vector<cdouble> slice(n);
            for (std::size_t ib = 0; ib < n; ++ib) slice[ib] = field.at(ib, ia, il);
            fft::forward(slice);
            // centered zero-pad: copy bins into a fine spectrum
            std::vector<cdouble> fine(fine_n, cdouble{0.0, 0.0});
            for (std::ptrdiff_t m = -half + 1; m < half; ++m) {
                const std::size_t src = static_cast<std::size_t>((m + static_cast<std::ptrdiff_t>(n)) %
                                                                 static_cast<std::ptrdiff_t>(n));
                const std::size_t dst = static_cast<std::size_t>(
                    (m + static_cast<std::ptrdiff_t>(fine_n)) % static_cast<std::ptrdiff_t>(fine_n));
                fine[dst] = slice[src];
            }
            // Nyquist bin split keeps the interpolant real for real inputs
            {
                const std::size_t nyq_src = n / 2;
                fine[fine_n - n / 2] = 0.5 * slice[nyq_src];
                fine[n / 2] = 0.5 * slice[nyq_src];
            }
            fft::inverse(fine);
            const double scale = static_cast<double>(fine_n) / static_cast<double>(n);
            for (auto& v : fine) v *= scale;
            slices_[ia * g.n_phi + il] = std::move(fine);
        }
    }
}

cdouble OversampledField::sample_b(std::size_t i_a, std::size_t i_phi, double b) const {
    const auto& slice = slices_[i_a * grid_->n_phi + i_phi];
    const double u = (b - fine_axis_.x0) / fine_axis_.dx;
    if (u < 0.0 || u >= static_cast<double>(fine_axis_.n)) return {0.0, 0.0};
    const auto i = static_cast<std::size_t>(u);
    const double frac = u - static_cast<double>(i);
    const cdouble right = (i + 1 < fine_axis_.n) ? slice[i + 1] : cdouble{0.0, 0.0};
    return slice[i] * (1.0 - frac) + right * frac;
}

cdouble OversampledField::sample(double b, double a, std::size_t i_phi) const {
    const GroupGrid& g = *grid_;
    if (!g.spec.has_scale()) return sample_b(0, i_phi, b);
    const auto& nodes = g.a_nodes;
    if (a < nodes.front() || a > nodes.back()) {
        const double tol = 1e-12;
        if (a >= nodes.front() * (1.0 - tol) && a <= nodes.front() * (1.0 + tol))
            return sample_b(0, i_phi, b);
        if (a >= nodes.back() * (1.0 - tol) && a <= nodes.back() * (1.0 + tol))
            return sample_b(nodes.size() - 1, i_phi, b);
        return {0.0, 0.0};
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), a);
    std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
    if (hi == 0) hi = 1;
    if (hi >= nodes.size()) hi = nodes.size() - 1;
    const std::size_t lo = hi - 1;
    const double t = std::log(a / nodes[lo]) / std::log(nodes[hi] / nodes[lo]);
    return sample_b(lo, i_phi, b) * (1.0 - t) + sample_b(hi, i_phi, b) * t;
}

}  // namespace voicelab
