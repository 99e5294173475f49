#include "voicelab/group.hpp"

#include <cmath>
#include <stdexcept>

namespace voicelab {

std::string to_string(GroupKind kind) {
    switch (kind) {
        case GroupKind::Line: return "line";
        case GroupKind::Affine: return "affine";
        case GroupKind::AffineCircle: return "affine_circle";
    }
    return "unknown";
}

void check_element(const GroupSpec& spec, const GroupElement& g) {
    if (!std::isfinite(g.b)) throw std::domain_error("group element: b not finite");
    if (spec.has_scale()) {
        if (!(g.a > 0.0) || !std::isfinite(g.a))
            throw std::domain_error("group element: scale a must be positive");
    }
    if (spec.has_angle() && !std::isfinite(g.phi))
        throw std::domain_error("group element: phi not finite");
}

GroupElement identity(const GroupSpec&) { return GroupElement{0.0, 1.0, 0.0}; }

GroupElement compose(const GroupSpec& spec, const GroupElement& g, const GroupElement& h) {
    check_element(spec, g);
    check_element(spec, h);
    GroupElement out;
    switch (spec.kind) {
        case GroupKind::Line:
            out.b = g.b + h.b;
            break;
        case GroupKind::Affine:
            out.b = g.b + g.a * h.b;
            out.a = g.a * h.a;
            break;
        case GroupKind::AffineCircle:
            out.b = g.b + g.a * h.b;
            out.a = g.a * h.a;
            out.phi = reduce_angle(g.phi + h.phi);
            break;
    }
    return out;
}

GroupElement inverse(const GroupSpec& spec, const GroupElement& g) {
    check_element(spec, g);
    GroupElement out;
    switch (spec.kind) {
        case GroupKind::Line:
            out.b = -g.b;
            break;
        case GroupKind::Affine:
            out.b = -g.b / g.a;
            out.a = 1.0 / g.a;
            break;
        case GroupKind::AffineCircle:
            out.b = -g.b / g.a;
            out.a = 1.0 / g.a;
            out.phi = reduce_angle(-g.phi);
            break;
    }
    return out;
}

double modular(const GroupSpec& spec, const GroupElement& g) {
    check_element(spec, g);
    return spec.has_scale() ? 1.0 / g.a : 1.0;
}

SampleSet make_sample_set(const GroupSpec& spec, double b_halfwidth, double a_min, double a_max,
                          std::size_t count, std::uint64_t seed) {
    if (!(b_halfwidth > 0.0)) throw std::invalid_argument("sample set: b_halfwidth must be > 0");
    if (spec.has_scale() && !(a_min > 0.0 && a_min < a_max))
        throw std::invalid_argument("sample set: need 0 < a_min < a_max");
    Rng rng(seed);
    const double la0 = spec.has_scale() ? std::log(a_min) : 0.0;
    const double la1 = spec.has_scale() ? std::log(a_max) : 0.0;
    auto draw = [&]() {
        GroupElement g;
        g.b = rng.uniform(-b_halfwidth, b_halfwidth);
        if (spec.has_scale()) g.a = std::exp(rng.uniform(la0, la1));
        if (spec.has_angle()) g.phi = rng.uniform(0.0, two_pi);
        return g;
    };
    SampleSet set;
    set.points.reserve(count);
    set.pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) set.points.push_back(draw());
    for (std::size_t i = 0; i < count; ++i) set.pairs.emplace_back(draw(), draw());
    return set;
}

Weight weight_one() {
    Weight w;
    w.evaluate = [](const GroupElement&) { return 1.0; };
    return w;
}

Weight weight_poly(double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("weight_poly: s must be >= 0");
    Weight w;
    w.evaluate = [s](const GroupElement& g) {
        const double scale = std::max(g.a, 1.0 / g.a);
        return std::pow(1.0 + std::abs(g.b), s) * std::pow(scale, s);
    };
    return w;
}

Weight validate_weight(const GroupSpec& spec, Weight w, const SampleSet& samples) {
    if (!w.evaluate) throw std::invalid_argument("validate_weight: missing evaluator");
    WeightCertificates certs;
    certs.pairs_tested = samples.pairs.size();
    certs.points_tested = samples.points.size();

    bool submult = true;
    bool symmetric = true;
    bool above_one = true;
    double min_value = std::numeric_limits<double>::infinity();

    auto value = [&](const GroupElement& g) {
        const double v = w.evaluate(g);
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::domain_error("validate_weight: weight must be positive and finite");
        return v;
    };

    for (const auto& [x, y] : samples.pairs) {
        const double wx = value(x);
        const double wy = value(y);
        const double wxy = value(compose(spec, x, y));
        if (wxy > wx * wy * (1.0 + 1e-10)) submult = false;
    }
    for (const auto& x : samples.points) {
        const double wx = value(x);
        const double winv = value(inverse(spec, x));
        if (std::abs(wx - winv) > 1e-10 * wx) symmetric = false;
        if (wx < 1.0 - 1e-12) above_one = false;
        min_value = std::min(min_value, std::min(wx, winv));
    }

    certs.submultiplicative = submult;
    certs.symmetric = symmetric;
    certs.bounded_below_by_one = above_one;
    certs.min_value = min_value;
    certs.positive_infimum = min_value >= 1e-9;
    w.certificates = certs;
    return w;
}

}  // namespace voicelab
