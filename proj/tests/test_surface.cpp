#include <cmath>

#include "doctest.h"
#include "qf/error.hpp"
#include "qf/surface.hpp"
#include "support.hpp"

using namespace qf;
using namespace qf::surface;
using hyp::Isometry;
using qft::Gen;
using qft::kQuarter;

namespace {

// Matrix product of a word, written out here rather than through evaluate().
Isometry word_product(const Holonomy& h, const Word& w) {
    Isometry out;
    for (int k : w) {
        const Isometry& g = h.images[static_cast<std::size_t>(std::abs(k) - 1)];
        out = out * (k > 0 ? g : g.inverse());
    }
    return out;
}

double trace_length(const Holonomy& h, const Word& w) {
    return 2.0 * std::acosh(std::abs(word_product(h, w).trace()) / 2.0);
}

// Two counterclockwise rotations by t1, t2 about points at distance d have
// |tr(AB)|/2 = sin(t1/2) sin(t2/2) cosh d - cos(t1/2) cos(t2/2).
double cone_pants_separation(double t1, double t2, double l) {
    return std::acosh((std::cosh(l / 2) + std::cos(t1 / 2) * std::cos(t2 / 2)) / (std::sin(t1 / 2) * std::sin(t2 / 2)));
}

}  // namespace

TEST_CASE("ConeAngles enforce (0, pi)") {
    CHECK_THROWS_AS(ConeAngles({1.0, hyp::kPi}), std::invalid_argument);
    CHECK_THROWS_AS(ConeAngles({0.0}), std::invalid_argument);
    CHECK_NOTHROW(ConeAngles({3.1}));
}

TEST_CASE("build_cone_pants: separation from the trace equation, boundary length") {
    const auto b = build_cone_pants(kQuarter, kQuarter, 1.0);
    CHECK(b.separation == doctest::Approx(cone_pants_separation(kQuarter, kQuarter, 1.0)).epsilon(1e-12));
    CHECK((b.generators[0] * b.generators[1] * b.generators[2]).is_identity(1e-12));
    CHECK(hyp::translation_length(b.generators[2]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hyp::rotation_angle(b.generators[0]) == doctest::Approx(kQuarter).epsilon(1e-12));
    Gen gen(11);
    for (int i = 0; i < 50; ++i) {
        const double t1 = gen.uniform(0.1, 3.0), t2 = gen.uniform(0.1, 3.0), l = gen.uniform(0.05, 5.0);
        const auto c = build_cone_pants(t1, t2, l);
        CHECK(c.separation == doctest::Approx(cone_pants_separation(t1, t2, l)).epsilon(1e-9));
        CHECK(hyp::translation_length(c.generators[2]) == doctest::Approx(l).epsilon(1e-10));
    }
    // Short boundary: |tr(AB)| -> 2 like 2cosh(l/2).
    for (double l : {1e-1, 1e-2, 1e-3}) {
        const auto tiny = build_cone_pants(kQuarter, kQuarter, l);
        const double excess = std::abs((tiny.generators[0] * tiny.generators[1]).trace()) - 2.0;
        CHECK(excess == doctest::Approx(2.0 * std::cosh(l / 2) - 2.0).epsilon(1e-6));
    }
}

TEST_CASE("build_pants: prescribed lengths, relabelling symmetry") {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double l = 2.0 * std::acosh(phi);
    const auto sym = build_pants(l, l, l);
    for (const auto& g : sym.generators) CHECK(std::abs(g.trace()) == doctest::Approx(2.0 * phi).epsilon(1e-12));
    Gen gen(12);
    for (int i = 0; i < 30; ++i) {
        const double l1 = gen.uniform(0.2, 4), l2 = gen.uniform(0.2, 4), l3 = gen.uniform(0.2, 4);
        const auto p = build_pants(l1, l2, l3);
        CHECK((p.generators[0] * p.generators[1] * p.generators[2]).is_identity(1e-11));
        CHECK(hyp::translation_length(p.generators[0]) == doctest::Approx(l1).epsilon(1e-10));
        CHECK(hyp::translation_length(p.generators[1]) == doctest::Approx(l2).epsilon(1e-10));
        CHECK(hyp::translation_length(p.generators[2]) == doctest::Approx(l3).epsilon(1e-10));
        const auto q = build_pants(l2, l3, l1);
        CHECK(hyp::translation_length(q.generators[2]) == doctest::Approx(l1).epsilon(1e-10));
    }
}

TEST_CASE("assemble: four-cone sphere and one-cone torus") {
    const auto s = qft::four_cone_sphere();
    const auto& m = s.decomposition().marking;
    for (const auto& w : m.peripheral) {
        CHECK(std::abs(word_product(s.holonomy(), w).trace()) == doctest::Approx(2.0 * std::cos(kQuarter / 2)).epsilon(1e-12));
    }
    const auto t = qft::one_cone_torus();
    CHECK(word_product(t.holonomy(), t.decomposition().marking.relator).is_identity(1e-9));
    CHECK(t.holonomy().relator_residual() < 1e-9);
}

TEST_CASE("twist by a full period: pants length kept, transversal changed") {
    const auto s = qft::four_cone_sphere(1.0, 0.0);
    const auto f = qft::four_cone_sphere(1.0, 1.0);
    const auto& m = s.decomposition().marking;
    CHECK(geodesic_length(f, m.pants[0]) == doctest::Approx(geodesic_length(s, m.pants[0])).epsilon(1e-12));
    CHECK(std::abs(geodesic_length(f, m.transversals[0]) - geodesic_length(s, m.transversals[0])) > 1e-3);
    CHECK(geodesic_length(f, m.transversals[0]) == doctest::Approx(trace_length(f.holonomy(), m.transversals[0].word)).epsilon(1e-12));
    CHECK_FALSE(equals_in_teich(s, f, 1e-8));
}

TEST_CASE("geodesic_length: FN length, inverse, square") {
    const auto s = qft::four_cone_sphere();
    const auto& c = s.decomposition().marking.pants[0];
    CHECK(geodesic_length(s, c) == doctest::Approx(1.0).epsilon(1e-12));
    CurveClass inv = c;
    inv.word = inverse(c.word);
    CHECK(geodesic_length(s, inv) == doctest::Approx(1.0).epsilon(1e-12));
    CurveClass sq = c;
    sq.word = concat(c.word, c.word);
    CHECK(geodesic_length(s.holonomy(), sq) == doctest::Approx(2.0).epsilon(1e-12));
    CurveClass peri{"peripheral", s.decomposition().marking.peripheral[0], true, 0};
    CHECK_THROWS_AS(geodesic_length(s, peri), ClassMismatch);
}

TEST_CASE("equals_in_teich") {
    const auto s = qft::one_cone_torus();
    CHECK(equals_in_teich(s, s, 1e-12));
    const double tol = 1e-8;
    CHECK_FALSE(equals_in_teich(s, qft::one_cone_torus(1.5 + 10 * tol, 0.3), tol));
    CHECK_THROWS_AS(equals_in_teich(s, qft::four_cone_sphere(), tol), IncomparableError);
}

TEST_CASE("gauss_bonnet_area") {
    CHECK(gauss_bonnet_area(ConeAngles({kQuarter, kQuarter, kQuarter, kQuarter}), 0) == doctest::Approx(2 * hyp::kPi));
    CHECK(gauss_bonnet_area(ConeAngles(), 2) == doctest::Approx(4 * hyp::kPi));
    CHECK(gauss_bonnet_area(ConeAngles({kQuarter}), 1) == doctest::Approx(1.5 * hyp::kPi));
    CHECK_THROWS_AS(gauss_bonnet_area(ConeAngles({kQuarter, kQuarter}), 0), NoHyperbolicStructure);
}

TEST_CASE("property: Gauss-Bonnet area equals the triangulated fundamental domain") {
    Gen gen(13);
    for (int i = 0; i < 20; ++i) {
        const auto s = i % 2 ? qft::with_fn(qft::four_cone_sphere(), gen.fn(1))
                             : qft::with_fn(qft::one_cone_torus(), gen.fn(1));
        const auto dom = FundamentalDomain::build(s.holonomy(), s.angles());
        CHECK(dom.area() == doctest::Approx(gauss_bonnet_area(s.angles(), s.decomposition().genus)).epsilon(1e-9));
    }
    const auto five = qft::five_cone_sphere();
    CHECK(FundamentalDomain::build(five.holonomy(), five.angles()).area() ==
          doctest::Approx(gauss_bonnet_area(five.angles(), 0)).epsilon(1e-9));
}

TEST_CASE("property: every assembled surface satisfies relator and angle invariants") {
    Gen gen(14);
    for (int i = 0; i < 100; ++i) {
        const int kind = gen.index(3);
        const auto base = kind == 0 ? qft::four_cone_sphere() : kind == 1 ? qft::one_cone_torus() : qft::five_cone_sphere();
        const auto s = qft::with_fn(base, gen.fn(base.decomposition().curve_count()));
        CHECK(s.holonomy().relator_residual() < 1e-9);
        CHECK(s.holonomy().peripheral_residual(s.angles()) < 1e-9);
    }
}

TEST_CASE("property: marked spectrum is invariant under global conjugation") {
    Gen gen(15);
    auto moved_distance = [&](const ConeSurface& s) {
        const Isometry g = hyp::rotation_about(hyp::HypPoint(gen.uniform(-0.5, 0.5), std::exp(gen.uniform(-0.5, 0.5))),
                                               gen.uniform(0.0, 2 * hyp::kPi));
        Holonomy moved = s.holonomy();
        for (auto& x : moved.images) x = hyp::conjugate(g, x);
        return spectrum_distance(length_spectrum(moved), length_spectrum(s));
    };
    for (const auto& s : {qft::four_cone_sphere(), qft::one_cone_torus(), qft::five_cone_sphere()}) {
        for (int i = 0; i < 30; ++i) CHECK(moved_distance(s) < 1e-10);
    }
    // Product words on random FN data have traces near 1e4 built from entries
    // near 1e2, so a few more digits go to cancellation.
    for (int i = 0; i < 30; ++i) CHECK(moved_distance(qft::with_fn(qft::five_cone_sphere(), gen.fn(2, 0.5, 1.5, 0.5))) < 1e-9);
    for (int i = 0; i < 30; ++i) CHECK(moved_distance(qft::with_fn(qft::five_cone_sphere(), gen.fn(2))) < 1e-8);
}

TEST_CASE("property: holonomy_to_fn inverts assemble") {
    Gen gen(16);
    for (int i = 0; i < 40; ++i) {
        const auto base = i % 2 ? qft::four_cone_sphere() : qft::one_cone_torus();
        const auto fn = gen.fn(1);
        const auto s = qft::with_fn(base, fn);
        const auto back = holonomy_to_fn(s.holonomy(), s.angles());
        CHECK(back[0].length == doctest::Approx(fn[0].length).epsilon(1e-8));
        CHECK(std::abs(back[0].twist - fn[0].twist) < 1e-8);
    }
    // Full-period branch: t and t + l are told apart.
    const auto s = qft::four_cone_sphere(1.0, 0.4);
    const auto shifted = qft::four_cone_sphere(1.0, 1.4);
    CHECK(std::abs(holonomy_to_fn(shifted.holonomy(), shifted.angles())[0].twist - 1.4) < 1e-8);
    CHECK(std::abs(holonomy_to_fn(s.holonomy(), s.angles())[0].twist - 0.4) < 1e-8);
}

TEST_CASE("singular_margin: positive, shrinking as angles grow") {
    const auto s = qft::four_cone_sphere();
    const auto& c = s.decomposition().marking.pants[0];
    CHECK(singular_margin(s, c) > 0.0);
    double previous = std::numeric_limits<double>::infinity();
    for (double t : {1.0, 1.5, 2.0, 2.5, 3.0}) {
        const auto st = ConeSurface::assemble(qft::sphere_decomposition(), {{1.0, 0.0}}, ConeAngles({t, t, t, t}));
        const double m = singular_margin(st, c);
        CHECK(m > 0.0);
        CHECK(m < previous);
        previous = m;
    }
}
