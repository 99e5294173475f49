#pragma once

#include <memory>
#include <vector>

#include "voicelab/common.hpp"
#include "voicelab/group.hpp"

namespace voicelab {

struct KernelInfo;  // defined in voice.hpp; attached to kernel fields

struct GridParams {
    double b_halfwidth = 32.0;
    std::size_t n_b = 4096;  // even
    double a_min = 0.125;
    double a_max = 8.0;
    std::size_t n_a = 64;
    std::size_t n_phi = 32;
};

/// Discretization of a group realizing the left Haar measure:
/// b uniform (step db), a geometric (a_k = a_min r^k), phi uniform.
/// Scale weights are exact cell masses of da/a^2 over geometric-midpoint
/// cells, so the total box mass matches the closed form exactly.
struct GroupGrid {
    GroupSpec spec;
    Axis b_axis;
    std::vector<double> a_nodes;
    std::vector<double> a_weights;  // integral of da/a^2 over the node's cell
    std::size_t n_phi = 1;

    std::size_t n_b() const { return b_axis.n; }
    std::size_t n_a() const { return a_nodes.size(); }
    std::size_t size() const { return n_b() * n_a() * n_phi; }

    double phi_node(std::size_t l) const {
        return two_pi * static_cast<double>(l) / static_cast<double>(n_phi);
    }
    double phi_weight() const { return 1.0 / static_cast<double>(n_phi); }

    double log_a_step() const;

    // flat layout: ((i_b * n_a) + i_a) * n_phi + i_phi
    std::size_t index(std::size_t i_b, std::size_t i_a, std::size_t i_phi) const {
        return (i_b * n_a() + i_a) * n_phi + i_phi;
    }
    GroupElement node(std::size_t i_b, std::size_t i_a, std::size_t i_phi) const;
    double quad_weight(std::size_t, std::size_t i_a, std::size_t) const {
        return b_axis.dx * a_weights[i_a] * phi_weight();
    }

    /// Closed-form mass of the grid box under the Haar measure.
    double box_mass() const;
};

using GridPtr = std::shared_ptr<const GroupGrid>;

GridPtr build_grid(const GroupSpec& spec, const GridParams& params);

/// Complex-valued function sampled on a GroupGrid (a voice transform,
/// a reproducing kernel, or any test field).
struct VoiceField {
    GridPtr grid;
    std::vector<cdouble> values;
    std::shared_ptr<const KernelInfo> kernel_info;  // set on rep-derived fields

    cdouble& at(std::size_t i_b, std::size_t i_a, std::size_t i_phi = 0) {
        return values[grid->index(i_b, i_a, i_phi)];
    }
    const cdouble& at(std::size_t i_b, std::size_t i_a, std::size_t i_phi = 0) const {
        return values[grid->index(i_b, i_a, i_phi)];
    }
    bool all_finite() const;
};

VoiceField make_field(GridPtr grid);

/// Weighted L^p norm: (sum |w(x) f(x)|^p quad(x))^(1/p); max for p = inf.
double lp_norm(const VoiceField& field, double p, const Weight& w);
double lp_norm(const VoiceField& field, double p);  // w == 1

/// Partial L^p norms restricted to |b| <= halfwidth, one per window.
struct WindowPoint {
    double halfwidth;
    double partial_norm;
};
std::vector<WindowPoint> window_profile(const VoiceField& field, double p,
                                        const std::vector<double>& windows,
                                        const Weight& w);
std::vector<WindowPoint> window_profile(const VoiceField& field, double p,
                                        const std::vector<double>& windows);

/// Band-limited interpolation cache: every (a, phi) slice is trigonometrically
/// oversampled on the b-axis so fields can be evaluated at off-grid b points
/// (linear interpolation on the fine grid; zero outside the window).
class OversampledField {
public:
    OversampledField(const VoiceField& field, std::size_t oversample = 16);

    cdouble sample_b(std::size_t i_a, std::size_t i_phi, double b) const;

    /// Log-linear interpolation between the two nearest a-slices
    /// (zero outside the grid's scale range).
    cdouble sample(double b, double a, std::size_t i_phi = 0) const;

    const GroupGrid& grid() const { return *grid_; }

private:
    GridPtr grid_;
    std::size_t oversample_;
    Axis fine_axis_;
    std::vector<std::vector<cdouble>> slices_;  // [i_a * n_phi + i_phi]
};

}  // namespace voicelab
