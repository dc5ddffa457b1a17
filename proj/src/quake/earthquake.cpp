#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qf/earthquake.hpp"
#include "qf/error.hpp"
#include "qf/log.hpp"

namespace qf::quake {

namespace {

std::vector<CurveClass> support_of(const WeightedMulticurve& lambda) {
    std::vector<CurveClass> out;
    for (const auto& c : lambda.components()) out.push_back(c.curve);
    return out;
}

ConeSurface shift_twists(const ConeSurface& s, const WeightedMulticurve& lambda, Side side) {
    auto fn = s.fn();
    for (const auto& c : lambda.components()) {
        auto& coord = fn[static_cast<std::size_t>(*c.pants_index)];
        coord.twist += side == Side::Right ? -c.weight : c.weight;
    }
    return ConeSurface::assemble(s.decomposition_ptr(), std::move(fn), s.angles());
}

DeformedHolonomy cocycle(const ConeSurface& s, const WeightedMulticurve& lambda, Side side,
                         const EarthquakeOptions& options) {
    DeformedHolonomy out{s.fn(), s.angles(), s.holonomy(), 0.0, 0.0};
    if (!lambda.empty()) {
        const CocycleContext ctx(s.holonomy(), s.angles(), support_of(lambda), options.seed);
        out.holonomy = ctx.deform(lambda.weights(), side);
    }
    out.relator_residual = out.holonomy.relator_residual();
    out.peripheral_residual = out.holonomy.peripheral_residual(s.angles());
    return out;
}

ConeSurface twist_or_fallback(const ConeSurface& s, const WeightedMulticurve& lambda, Side side,
                              const EarthquakeOptions& options) {
    if (lambda.empty()) return s;
    if (lambda.pants_supported()) return shift_twists(s, lambda, side);
    if (options.strict) throw UnsupportedError("twist earthquake needs every component to be a pants curve");
    log::notice("earthquake support leaves the pants curves; using the cocycle");
    const auto d = cocycle(s, lambda, side, options);
    return surface::surface_from_holonomy(d.holonomy, s.angles());
}

}  // namespace

ConeSurface right_earthquake_twist(const ConeSurface& s, const WeightedMulticurve& lambda,
                                   const EarthquakeOptions& options) {
    return twist_or_fallback(s, lambda, Side::Right, options);
}

ConeSurface left_earthquake_twist(const ConeSurface& s, const WeightedMulticurve& lambda,
                                  const EarthquakeOptions& options) {
    return twist_or_fallback(s, lambda, Side::Left, options);
}

DeformedHolonomy right_earthquake_cocycle(const ConeSurface& s, const WeightedMulticurve& lambda,
                                          const EarthquakeOptions& options) {
    return cocycle(s, lambda, Side::Right, options);
}

DeformedHolonomy left_earthquake_cocycle(const ConeSurface& s, const WeightedMulticurve& lambda,
                                         const EarthquakeOptions& options) {
    return cocycle(s, lambda, Side::Left, options);
}

ConeSurface earthquake(const ConeSurface& s, const WeightedMulticurve& lambda, Side side,
                       const EarthquakeOptions& options) {
    return twist_or_fallback(s, lambda, side, options);
}

EquivarianceReport equivariance_check(const ConeSurface& s, const WeightedMulticurve& lambda, int pairs,
                                      unsigned seed) {
    EquivarianceReport report;
    if (lambda.empty()) return report;
    const CocycleContext ctx(s.holonomy(), s.angles(), support_of(lambda), seed);
    const auto w = lambda.weights();
    const auto& dom = ctx.domain();
    const auto& h = s.holonomy();

    // Pairs near the sides, so that most of them are separated by leaves.
    std::mt19937 rng(seed + 101u);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_int_distribution<std::size_t> pick(0, dom.size() - 1);
    const HypPoint centre = dom.interior_point(seed);
    auto near_side = [&] { return hyp::geodesic_point(dom.side_point(pick(rng), u(rng)), centre, 0.1 * u(rng)); };
    for (int p = 0; p < pairs; ++p) {
        const HypPoint x = near_side();
        const HypPoint y = near_side();
        const auto direct = ctx.crossings(x, y, w);
        if (!direct) continue;
        for (const Isometry& g : h.images) {
            // Leaves of g(D) are the images of the traced chords.
            const HypPoint gx = g.apply(x);
            const HypPoint gy = g.apply(y);
            std::vector<CrossingFactor> moved;
            for (std::size_t i = 0; i < ctx.leaves().size(); ++i) {
                for (const auto& c : ctx.leaves()[i].chords) {
                    const auto line = g.apply(c.line);
                    const auto hit = hyp::segment_crossing(gx, gy, line);
                    if (hit) moved.push_back(CrossingFactor{hit->left_to_right ? line : line.reversed(), w[i], hit->distance});
                }
            }
            std::sort(moved.begin(), moved.end(),
                      [](const CrossingFactor& a, const CrossingFactor& b) { return a.at < b.at; });
            Isometry lhs;
            for (const auto& c : moved) lhs = lhs * leaf_factor(c, Side::Right);
            Isometry rhs;
            for (const auto& c : *direct) rhs = rhs * leaf_factor(c, Side::Right);
            // Compared in the frame of D, relative to the size of beta.
            double scale = 1.0;
            for (double e : rhs.entries()) scale = std::max(scale, std::abs(e));
            report.max_residual = std::max(report.max_residual, (g.inverse() * lhs * g).distance(rhs) / scale);
            ++report.samples;
        }
    }

    const CocycleContext other(s.holonomy(), s.angles(), support_of(lambda), seed + 1u);
    report.basepoint_spread =
        surface::teich_distance(ctx.deform(w, Side::Right), other.deform(w, Side::Right));
    report.passed = report.max_residual < 1e-8 && report.basepoint_spread < 1e-8;
    return report;
}

double intersection_mass(const ConeSurface& s, const WeightedMulticurve& lambda, const CurveClass& gamma) {
    if (lambda.empty()) return 0.0;
    const auto dom = surface::FundamentalDomain::build(s.holonomy(), s.angles());
    const auto traced = trace_curve(s.holonomy(), dom, gamma);
    double mass = 0.0;
    for (const auto& c : lambda.components()) {
        const int k = geometric_intersection(traced, trace_curve(s.holonomy(), dom, c.curve));
        if (const auto table = table_intersection(s.decomposition(), gamma.word, c.curve.word)) {
            if (*table != k) {
                std::ostringstream os;
                os << "intersection of " << gamma.name << " with " << c.curve.name << ": traced " << k
                   << ", decomposition table " << *table;
                throw Error(os.str());
            }
        }
        mass += c.weight * k;
    }
    return mass;
}

LengthInequality length_inequality_check(const ConeSurface& s, const WeightedMulticurve& lambda,
                                         const CurveClass& gamma) {
    LengthInequality out{};
    out.before = surface::geodesic_length(s, gamma);
    if (lambda.empty()) {
        out.after = out.before;
        out.mass = 0.0;
        return out;
    }
    if (lambda.pants_supported()) {
        // Large shifts lose the relator to round-off long before the trace of
        // gamma loses its leading digits, so the invariant checks are skipped.
        auto fn = s.fn();
        for (const auto& c : lambda.components()) fn[static_cast<std::size_t>(*c.pants_index)].twist -= c.weight;
        out.after = surface::geodesic_length(surface::assemble_holonomy(s.decomposition_ptr(), fn, s.angles()), gamma);
    } else {
        out.after = surface::geodesic_length(cocycle(s, lambda, Side::Right, {}).holonomy, gamma);
    }
    out.mass = intersection_mass(s, lambda, gamma);
    return out;
}

}  // namespace qf::quake
