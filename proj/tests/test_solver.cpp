#include <cmath>

#include "doctest.h"
#include "qf/error.hpp"
#include "qf/solver.hpp"
#include "support.hpp"

using namespace qf;
using namespace qf::solver;
using qft::Gen;
using surface::length_spectrum;
using surface::spectrum_distance;

namespace {

CurveClass curve(const ConeSurface& s, const char* name) { return *quake::find_curve(s.decomposition(), name); }

InversionProblem problem(const ConeSurface& source, const ConeSurface& target, std::vector<CurveClass> support) {
    InversionProblem p;
    p.source = std::make_shared<const ConeSurface>(source);
    p.target = std::make_shared<const ConeSurface>(target);
    p.support = std::move(support);
    return p;
}

// Forward oracle: the earthquake module applied component by component.
ConeSurface planted(const ConeSurface& s, const std::vector<CurveClass>& support, const std::vector<double>& w) {
    std::vector<quake::Component> cs;
    for (std::size_t k = 0; k < support.size(); ++k) cs.push_back({support[k], w[k], std::nullopt});
    return quake::right_earthquake(s, quake::WeightedMulticurve::make(s.decomposition(), cs));
}

double recomputed(const SolverReport& r, const ConeSurface& source, const ConeSurface& target,
                  const std::vector<CurveClass>& support) {
    const EarthquakeMap map(source, support);
    return spectrum_distance(length_spectrum(map.holonomy(r.weights)), length_spectrum(target));
}

}  // namespace

TEST_CASE("identity target gives zero weights") {
    const auto s = qft::four_cone_sphere();
    const auto r = invert_earthquake(problem(s, s, {curve(s, "pants0")}));
    CHECK(r.converged);
    CHECK(std::abs(r.weights[0]) < 1e-9);
}

TEST_CASE("planted weights are recovered") {
    const auto s = qft::four_cone_sphere();
    for (const char* name : {"pants0", "transversal0"}) {
        const std::vector<CurveClass> support{curve(s, name)};
        const auto t = planted(s, support, {0.5});
        const auto r = invert_earthquake(problem(s, t, support));
        CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(r.residual <= 1e-9);
        CHECK(recomputed(r, s, t, support) <= 1e-9);
    }
    const auto five = qft::five_cone_sphere();
    const std::vector<CurveClass> two{curve(five, "pants0"), curve(five, "pants1")};
    const auto t = planted(five, two, {0.3, 1.1});
    const auto r = invert_earthquake(problem(five, t, two));
    CHECK(std::abs(r.weights[0] - 0.3) < 1e-6);
    CHECK(std::abs(r.weights[1] - 1.1) < 1e-6);
    CHECK(r.condition > 0.0);
}

TEST_CASE("property: grid recovery on both reference surfaces") {
    Gen gen(41);
    for (const auto& s : {qft::four_cone_sphere(), qft::one_cone_torus()}) {
        for (const char* name : {"pants0", "transversal0"}) {
            const std::vector<CurveClass> support{curve(s, name)};
            for (int i = 0; i < 5; ++i) {
                const double w = 0.05 + i * (3.0 - 0.05) / 4.0;
                const auto t = planted(s, support, {w});
                const auto r = invert_earthquake(problem(s, t, support));
                CHECK(std::abs(r.weights[0] - w) < 1e-6);
                // Success is never reported above tolerance.
                CHECK(recomputed(r, s, t, support) <= 1e-9);
            }
        }
    }
}

TEST_CASE("targets outside the support fail loudly") {
    const auto s = qft::four_cone_sphere();
    const auto t = planted(s, {curve(s, "transversal0")}, {0.8});
    auto p = problem(s, t, {curve(s, "pants0")});
    p.max_iterations = 40;
    CHECK_THROWS_AS(invert_earthquake(p), NonConvergence);
}

TEST_CASE("local rigidity") {
    const auto s = qft::four_cone_sphere();
    const auto single = local_rigidity_check(s, qft::single(s, "pants0", 0.5));
    CHECK(single.sigma_min > 1e-6);
    CHECK_FALSE(single.rank_deficient);
    const auto twice = local_rigidity_check(s, {curve(s, "pants0"), curve(s, "pants0")}, {0.5, 0.5});
    CHECK(twice.rank_deficient);
    CHECK(twice.sigma_min < 1e-6);
    const auto a = local_rigidity_check(s, qft::single(s, "transversal0", 0.5), 0);
    const auto b = local_rigidity_check(s, qft::single(s, "transversal0", 0.5), 7);
    CHECK(std::abs(a.sigma_min - b.sigma_min) <= 0.1 * a.sigma_min);
}

TEST_CASE("properness probe") {
    const auto s = qft::four_cone_sphere();
    const auto report = properness_probe(s, qft::single(s, "pants0", 0.05), {0.0, 1.0, 10.0, 100.0}, curve(s, "transversal0"));
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].bound == doctest::Approx(-report.rows[0].length_before));
    for (const auto& row : report.rows) {
        CHECK(row.computed);
        CHECK(row.holds());
        CHECK(row.length_before + row.length_after - row.mass >= -1e-9);
    }
    CHECK(report.linear_growth);
    CHECK_FALSE(report.inconclusive);
    // The torus pants curve and its transversal meet once.
    const auto t = qft::one_cone_torus();
    const auto tr = properness_probe(t, qft::single(t, "pants0", 0.05), {1.0, 10.0, 100.0});
    for (const auto& row : tr.rows) CHECK(row.holds());
}

TEST_CASE("objective is coercive along rays") {
    const auto s = qft::one_cone_torus();
    const std::vector<CurveClass> support{curve(s, "transversal0")};
    const auto target = planted(s, support, {0.5});
    const EarthquakeMap map(s, support);
    double previous = -1.0;
    for (double k : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double r = spectrum_distance(length_spectrum(map.holonomy({0.3 * k})), length_spectrum(target));
        if (k >= 4.0) CHECK(r > previous);
        previous = r;
    }
}

TEST_CASE("mess_inverse") {
    const auto s = qft::four_cone_sphere();
    const std::vector<CurveClass> support{curve(s, "pants0")};
    const auto same = mess_inverse(s, s, support);
    CHECK(std::abs(same.inversion.weights[0]) < 1e-9);
    CHECK(same.left_residual < 1e-7);

    Gen gen(42);
    for (const auto& h : {qft::four_cone_sphere(), qft::one_cone_torus()}) {
        for (const char* name : {"pants0", "transversal0"}) {
            const double w = gen.uniform(0.1, 1.0);
            const auto [ml, mr] = ads::left_right_metrics(ads::from_bending({h, qft::single(h, name, w)}));
            const auto m = mess_inverse(ml, mr, {curve(h, name)});
            CHECK(m.inversion.weights[0] == doctest::Approx(2 * w).epsilon(1e-6));
            CHECK(m.left_residual < 1e-7);
            CHECK(m.right_residual < 1e-7);
            CHECK(surface::equals_in_teich(m.bend.h_plus, h, 1e-7));
            CHECK(m.ghmc.peripheral_residual() < 1e-10);
        }
    }
}
