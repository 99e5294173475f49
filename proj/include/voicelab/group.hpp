#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "voicelab/common.hpp"

namespace voicelab {

// The three concrete groups: the line R, the connected affine group
// R x| R_+ with left Haar db da/a^2, and its direct product with the
// circle, (R x| R_+) x S^1 with Haar db da/a^2 dphi/2pi.
enum class GroupKind { Line, Affine, AffineCircle };

std::string to_string(GroupKind kind);

/// Group element in (b, a, phi) coordinates. Unused coordinates stay at
/// their identity values (a = 1, phi = 0), so one layout serves all kinds.
struct GroupElement {
    double b = 0.0;
    double a = 1.0;
    double phi = 0.0;
};

struct GroupSpec {
    GroupKind kind = GroupKind::Line;

    bool has_scale() const { return kind != GroupKind::Line; }
    bool has_angle() const { return kind == GroupKind::AffineCircle; }
};

GroupElement identity(const GroupSpec& spec);
GroupElement compose(const GroupSpec& spec, const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupSpec& spec, const GroupElement& g);

/// Modular function: 1 on the line, 1/a on the affine kinds.
double modular(const GroupSpec& spec, const GroupElement& g);

/// Validates element coordinates for the given kind (throws std::domain_error).
void check_element(const GroupSpec& spec, const GroupElement& g);

/// Sample points and pairs used to certify weight properties.
struct SampleSet {
    std::vector<GroupElement> points;
    std::vector<std::pair<GroupElement, GroupElement>> pairs;
};

/// Draws samples covering the box |b| <= b_halfwidth, a in [a_min, a_max]
/// (log-uniform), phi in [0, 2pi).
SampleSet make_sample_set(const GroupSpec& spec, double b_halfwidth, double a_min, double a_max,
                          std::size_t count, std::uint64_t seed);

struct WeightCertificates {
    bool submultiplicative = false;
    bool symmetric = false;
    bool bounded_below_by_one = false;
    bool positive_infimum = false;
    std::size_t pairs_tested = 0;
    std::size_t points_tested = 0;
    double min_value = 0.0;
};

/// Positive weight on the group. Certificates are sample-based; the
/// evaluator is a user-supplied closure and is never inspected symbolically.
struct Weight {
    std::function<double(const GroupElement&)> evaluate;
    WeightCertificates certificates;

    double operator()(const GroupElement& g) const { return evaluate(g); }
};

/// Weight presets: w == 1 and the polynomial family
/// (1+|b|)^s * max(a, 1/a)^s.
Weight weight_one();
Weight weight_poly(double s);

/// Runs the certificate checks on the sample set and returns the weight with
/// certificates filled in. Throws std::domain_error if w <= 0 anywhere.
Weight validate_weight(const GroupSpec& spec, Weight w, const SampleSet& samples);

}  // namespace voicelab
