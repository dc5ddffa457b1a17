#include <cmath>

#include "doctest.h"
#include "qf/error.hpp"
#include "qf/log.hpp"
#include "support.hpp"

using namespace qf;
using namespace qf::quake;
using surface::ConeSurface;
using surface::length_spectrum;
using surface::spectrum_distance;
using qft::Gen;

namespace {

double spectrum_gap(const ConeSurface& a, const Holonomy& b) { return spectrum_distance(length_spectrum(a), length_spectrum(b)); }
double spectrum_gap(const ConeSurface& a, const ConeSurface& b) { return spectrum_gap(a, b.holonomy()); }

double peripheral_gap(const Holonomy& a, const Holonomy& b) {
    double worst = 0.0;
    for (const auto& w : a.decomposition->marking.peripheral) {
        worst = std::max(worst, std::abs(a.image(w).abs_trace() - b.image(w).abs_trace()));
    }
    return worst;
}

// The transversal crosses the pants curve twice, so its trace is a combination
// of 1, cosh t and sinh t. Fit the three coefficients from assembled surfaces.
struct TwistTrace {
    double p, q, r;
    double at(double t) const { return p + q * std::cosh(t) + r * std::sinh(t); }
};

TwistTrace fit_transversal_trace(double length) {
    auto tr = [&](double t) {
        const auto s = qft::four_cone_sphere(length, t);
        return s.holonomy().image(s.decomposition().marking.transversals[0].word).abs_trace();
    };
    const double a = tr(-1.0), b = tr(0.0), c = tr(1.0);
    const double ch = std::cosh(1.0), sh = std::sinh(1.0);
    const double q = (a + c - 2.0 * b) / (2.0 * (ch - 1.0));
    return {b - q, q, (c - a) / (2.0 * sh)};
}

}  // namespace

TEST_CASE("empty multicurve is the identity on every path") {
    const auto s = qft::four_cone_sphere();
    const WeightedMulticurve none;
    CHECK(spectrum_gap(right_earthquake_twist(s, none), s) == 0.0);
    CHECK(spectrum_gap(left_earthquake(s, none), s) == 0.0);
    CHECK(spectrum_gap(s, right_earthquake_cocycle(s, none).holonomy) < 1e-14);
    CHECK(equivariance_check(s, none).max_residual == 0.0);
    const auto gamma = s.decomposition().marking.transversals[0];
    CHECK(length_inequality_check(s, none, gamma).mass == 0.0);
}

TEST_CASE("right twist path: t -> t - w, transversal length from the trace formula") {
    const auto s = qft::four_cone_sphere();
    const auto r = right_earthquake_twist(s, qft::single(s, "pants0", 0.5));
    CHECK(r.fn()[0].twist == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(r.fn()[0].length == 1.0);
    const auto oracle = fit_transversal_trace(1.0);
    const auto& word = s.decomposition().marking.transversals[0].word;
    CHECK(r.holonomy().image(word).abs_trace() == doctest::Approx(oracle.at(-0.5)).epsilon(1e-10));
    CHECK(left_earthquake(s, qft::single(s, "pants0", 0.5)).fn()[0].twist == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("additivity on one curve") {
    Gen gen(21);
    for (const auto& base : {qft::four_cone_sphere(), qft::one_cone_torus()}) {
        for (const char* name : {"pants0", "transversal0"}) {
            const double w1 = gen.uniform(0.1, 1.0), w2 = gen.uniform(0.1, 1.0);
            const auto two = right_earthquake(right_earthquake(base, qft::single(base, name, w1)), qft::single(base, name, w2));
            const auto one = right_earthquake(base, qft::single(base, name, w1 + w2));
            CHECK(spectrum_gap(two, one) < 1e-8);
        }
    }
}

TEST_CASE("property: twist and cocycle paths agree on pants-supported multicurves") {
    Gen gen(22);
    for (int i = 0; i < 30; ++i) {
        const int kind = gen.index(3);
        const auto base = kind == 0 ? qft::four_cone_sphere() : kind == 1 ? qft::one_cone_torus() : qft::five_cone_sphere();
        const auto s = qft::with_fn(base, gen.fn(base.decomposition().curve_count(), 0.5, 2.0, 1.0));
        std::vector<std::pair<int, double>> ws;
        for (int k = 0; k < s.decomposition().curve_count(); ++k) ws.push_back({k, gen.uniform(0.05, 2.0)});
        const auto lambda = WeightedMulticurve::on_pants(s.decomposition(), ws);
        for (Side side : {Side::Right, Side::Left}) {
            const auto twist = side == Side::Right ? right_earthquake_twist(s, lambda) : left_earthquake_twist(s, lambda);
            const auto co = side == Side::Right ? right_earthquake_cocycle(s, lambda) : left_earthquake_cocycle(s, lambda);
            CHECK(spectrum_gap(twist, co.holonomy) < 1e-8);
        }
    }
}

TEST_CASE("property: cone angles survive every earthquake") {
    Gen gen(23);
    for (int i = 0; i < 20; ++i) {
        const auto s = i % 2 ? qft::with_fn(qft::four_cone_sphere(), gen.fn(1)) : qft::with_fn(qft::one_cone_torus(), gen.fn(1));
        const auto lambda = qft::single(s, gen.coin() ? "transversal0" : "pants0", gen.uniform(0.05, 3.0));
        const auto co = right_earthquake_cocycle(s, lambda);
        CHECK(peripheral_gap(s.holonomy(), co.holonomy) < 1e-10);
        CHECK(co.peripheral_residual < 1e-10);
        CHECK(co.relator_residual < 1e-9);
        CHECK(peripheral_gap(s.holonomy(), left_earthquake(s, lambda).holonomy()) < 1e-10);
    }
}

TEST_CASE("left earthquake undoes the right one") {
    Gen gen(24);
    for (const auto& s : {qft::four_cone_sphere(), qft::one_cone_torus(), qft::five_cone_sphere()}) {
        for (const char* name : {"pants0", "transversal0"}) {
            const auto lambda = qft::single(s, name, gen.uniform(0.1, 2.0));
            CHECK(surface::equals_in_teich(left_earthquake(right_earthquake(s, lambda), lambda), s, 1e-8));
        }
    }
}

TEST_CASE("cocycle identity on developed points") {
    Gen gen(25);
    const auto s = qft::four_cone_sphere();
    for (const char* name : {"pants0", "transversal0"}) {
        const auto lambda = qft::single(s, name, 0.9);
        std::vector<CurveClass> support;
        for (const auto& c : lambda.components()) support.push_back(c.curve);
        const CocycleContext ctx(s.holonomy(), s.angles(), support);
        const std::vector<double> w = lambda.weights();
        int used = 0;
        for (int i = 0; i < 60; ++i) {
            const auto x = ctx.domain().interior_point(gen.seed());
            const auto y = ctx.domain().interior_point(gen.seed());
            const auto z = ctx.domain().interior_point(gen.seed());
            if (!ctx.crossings(x, y, w) || !ctx.crossings(y, z, w) || !ctx.crossings(x, z, w)) continue;
            ++used;
            for (Side side : {Side::Right, Side::Left}) {
                const Isometry lhs = ctx.beta(x, y, w, side) * ctx.beta(y, z, w, side);
                CHECK(lhs.distance(ctx.beta(x, z, w, side)) < 1e-10);
            }
            CHECK((ctx.beta(x, y, w, Side::Right) * ctx.beta(y, x, w, Side::Right)).is_identity(1e-10));
        }
        CHECK(used > 40);
    }
}

TEST_CASE("equivariance and basepoint independence") {
    const auto s = qft::four_cone_sphere();
    for (const char* name : {"pants0", "transversal0"}) {
        const auto report = equivariance_check(s, qft::single(s, name, 1.1));
        CHECK(report.max_residual < 1e-8);
        CHECK(report.basepoint_spread < 1e-8);
        CHECK(report.passed);
    }
    const auto lambda = qft::single(s, "transversal0", 0.7);
    EarthquakeOptions a, b;
    b.seed = 5;
    CHECK(spectrum_distance(length_spectrum(right_earthquake_cocycle(s, lambda, a).holonomy),
                            length_spectrum(right_earthquake_cocycle(s, lambda, b).holonomy)) < 1e-8);
}

TEST_CASE("strict mode and fallback notice for non-pants components") {
    const auto s = qft::four_cone_sphere();
    const auto lambda = qft::single(s, "transversal0", 0.4);
    EarthquakeOptions strict;
    strict.strict = true;
    CHECK_THROWS_AS(right_earthquake_twist(s, lambda, strict), UnsupportedError);
    log::drain_notices();
    const auto r = right_earthquake_twist(s, lambda);
    CHECK_FALSE(log::drain_notices().empty());
    CHECK(spectrum_gap(r, right_earthquake_cocycle(s, lambda).holonomy) < 1e-8);
}

TEST_CASE("multicurve validation") {
    const auto s = qft::four_cone_sphere();
    const auto& d = s.decomposition();
    log::drain_notices();
    CHECK(WeightedMulticurve::single(d, "pants0", 1e-13).empty());
    CHECK_FALSE(log::drain_notices().empty());
    CHECK_THROWS_AS(WeightedMulticurve::single(d, "pants0", -0.1), std::invalid_argument);
    const auto p = *find_curve(d, "pants0");
    const auto t = *find_curve(d, "transversal0");
    CHECK_THROWS(WeightedMulticurve::make(d, {{p, 1.0, std::nullopt}, {t, 1.0, std::nullopt}}));
    CurveClass again = p;
    again.word = qf::inverse(p.word);
    CHECK_THROWS_AS(WeightedMulticurve::make(d, {{p, 1.0, std::nullopt}, {again, 1.0, std::nullopt}}), std::invalid_argument);
    CurveClass peri{"around", d.marking.peripheral[0], true, 0};
    CHECK_THROWS_AS(WeightedMulticurve::make(d, {{peri, 1.0, std::nullopt}}), std::invalid_argument);
}

TEST_CASE("length inequality: four-cone example and linear mass") {
    const auto s = qft::four_cone_sphere();
    const auto gamma = s.decomposition().marking.transversals[0];
    // A transversal meets the pants curve of a chain sphere twice.
    CHECK(intersection_mass(s, qft::single(s, "pants0", 1.0), gamma) == doctest::Approx(2.0));
    const auto li = length_inequality_check(s, qft::single(s, "pants0", 4.0), gamma);
    CHECK(li.mass == doctest::Approx(8.0));
    CHECK(li.slack() > 0.0);
    CHECK(li.slack() < 2.0 * li.before + 1.0);
    CHECK(intersection_mass(s, qft::single(s, "pants0", 40.0), gamma) == doctest::Approx(10.0 * li.mass));
    CHECK(surface::geodesic_length(s, gamma) == doctest::Approx(li.before).epsilon(1e-14));
    // Past the example: the right twist adds about 2w to the transversal.
    const auto ref = length_inequality_check(s, qft::single(s, "pants0", 8.0), gamma);
    for (double w : {16.0, 24.0}) {
        const auto far = length_inequality_check(s, qft::single(s, "pants0", w), gamma);
        CHECK(far.slack() > 0.0);
        CHECK(far.after - 2.0 * w == doctest::Approx(ref.after - 16.0).epsilon(1e-3));
    }
}

TEST_CASE("property: length inequality on randomized triples") {
    Gen gen(26);
    int violations = 0;
    for (int i = 0; i < 200; ++i) {
        const bool torus = gen.coin();
        const auto s = qft::with_fn(torus ? qft::one_cone_torus() : qft::four_cone_sphere(), gen.fn(1, 0.3, 3.0, 2.0));
        const char* support = gen.coin() ? "pants0" : "transversal0";
        const char* other = std::string(support) == "pants0" ? "transversal0" : "pants0";
        const auto gamma = *find_curve(s.decomposition(), other);
        const auto li = length_inequality_check(s, qft::single(s, support, gen.uniform(0.05, 5.0)), gamma);
        if (li.slack() < -1e-9) ++violations;
    }
    CHECK(violations == 0);
}
