// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "qf/ads.hpp"
#include "qf/error.hpp"
#include "qf/log.hpp"
#include "qf/solver.hpp"
#include "qf/volume.hpp"
#include "support.hpp"

using namespace qf;
using qft::Gen;
using quake::WeightedMulticurve;
using surface::ConeSurface;
using surface::CurveClass;
using surface::length_spectrum;
using surface::spectrum_distance;

namespace {

constexpr double kPi = hyp::kPi;

struct Outcome {
    bool ok = true;
    std::string detail;
};

class Tally {
public:
    void need(bool cond, const std::string& what) {
        if (!cond && out_.ok) {
            out_.ok = false;
            out_.detail = what;
        }
    }
    void worst(double value) { worst_ = std::max(worst_, value); }
    double worst() const { return worst_; }
    Outcome done(const std::string& summary) {
        if (out_.ok) out_.detail = summary;
        return out_;
    }

private:
    Outcome out_;
    double worst_ = 0.0;
};

std::string say(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CurveClass curve(const ConeSurface& s, const char* name) { return *quake::find_curve(s.decomposition(), name); }

ConeSurface random_surface(Gen& gen, int kind, double lmax = 3.0, double tmax = 1.0) {
    const auto base = kind == 0 ? qft::four_cone_sphere() : kind == 1 ? qft::one_cone_torus() : qft::five_cone_sphere();
    return qft::with_fn(base, gen.fn(base.decomposition().curve_count(), 0.5, lmax, tmax));
}

double peripheral_gap(const surface::Holonomy& h, const surface::ConeAngles& angles) { return h.peripheral_residual(angles); }

Outcome inverse_law() {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    Gen gen(101);
    for (const auto& s : {qft::four_cone_sphere(), qft::one_cone_torus()}) {
        for (int i = 0; i < 50; ++i) {
            const auto lambda = qft::single(s, gen.coin() ? "pants0" : "transversal0", gen.uniform(0.05, 3.0));
            const auto back = quake::left_earthquake(quake::right_earthquake(s, lambda), lambda);
            const double d = spectrum_distance(length_spectrum(back), length_spectrum(s));
            t.worst(d);
            t.need(surface::equals_in_teich(back, s, 1e-8), say("round trip off by %.3g", d));
        }
    }
    const double secs = seconds_since(t0);
    t.need(secs < 10.0, say("took %.1f s", secs));
    return t.done(say("100 round trips, worst %.2g, %.2f s", t.worst(), secs));
}

Outcome twist_cocycle() {
    Tally t;
    Gen gen(102);
    for (int i = 0; i < 50; ++i) {
        const auto s = random_surface(gen, gen.index(3), 2.0, 1.0);
        std::vector<std::pair<int, double>> ws;
        for (int k = 0; k < s.decomposition().curve_count(); ++k) ws.push_back({k, gen.uniform(0.05, 2.0)});
        const auto lambda = WeightedMulticurve::on_pants(s.decomposition(), ws);
        const bool right = gen.coin();
        const auto twist = right ? quake::right_earthquake_twist(s, lambda) : quake::left_earthquake_twist(s, lambda);
        const auto co = right ? quake::right_earthquake_cocycle(s, lambda) : quake::left_earthquake_cocycle(s, lambda);
        const double d = spectrum_distance(length_spectrum(twist), length_spectrum(co.holonomy));
        t.worst(d);
        t.need(d < 1e-8, say("case %g: spectra differ by %.3g", i, d));
    }
    return t.done(say("50 cases, worst %.2g", t.worst()));
}

Outcome length_inequality() {
    Tally t;
    Gen gen(103);
    int violations = 0;
    double slack = 1e300;
    for (int i = 0; i < 1000; ++i) {
        const bool torus = gen.coin();
        const auto s = qft::with_fn(torus ? qft::one_cone_torus() : qft::four_cone_sphere(), gen.fn(1, 0.3, 3.0, 2.0));
        const bool on_pants = gen.coin();
        const auto gamma = curve(s, on_pants ? "transversal0" : "pants0");
        const auto li =
            quake::length_inequality_check(s, qft::single(s, on_pants ? "pants0" : "transversal0", gen.uniform(0.05, 5.0)), gamma);
        slack = std::min(slack, li.slack());
        if (li.slack() < -1e-9) ++violations;
    }
    t.need(violations == 0, say("%g violations", violations));
    int rows = 0;
    for (const auto& s : {qft::four_cone_sphere(), qft::one_cone_torus()}) {
        for (int i = 0; i < 3; ++i) {
            const auto p = solver::properness_probe(s, qft::single(s, "pants0", gen.uniform(0.02, 0.08)), {1.0, 10.0, 100.0},
                                                    curve(s, "transversal0"));
            for (const auto& row : p.rows) {
                t.need(row.computed, say("scale %g not computable", row.scale));
                t.need(row.holds(), say("scale %g: length %.6g below bound", row.scale, row.length_after));
                ++rows;
            }
        }
    }
    return t.done(say("1000 triples, min slack %.3g; %g probe rows hold", slack, rows));
}

Outcome planted_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    int solves = 0;
    auto solve = [&](const ConeSurface& s, const std::vector<CurveClass>& support, const std::vector<double>& w) {
        std::vector<quake::Component> cs;
        for (std::size_t k = 0; k < support.size(); ++k) cs.push_back({support[k], w[k], std::nullopt});
        solver::InversionProblem p;
        p.source = std::make_shared<const ConeSurface>(s);
        p.target = std::make_shared<const ConeSurface>(
            quake::right_earthquake(s, WeightedMulticurve::make(s.decomposition(), cs)));
        p.support = support;
        const auto r = solver::invert_earthquake(p);
        for (std::size_t k = 0; k < w.size(); ++k) {
            t.worst(std::abs(r.weights[k] - w[k]));
            t.need(std::abs(r.weights[k] - w[k]) < 1e-6, say("weight %.3g recovered as %.9g", w[k], r.weights[k]));
        }
        ++solves;
    };
    auto grid = [](int i) { return 0.05 + i * (3.0 - 0.05) / 24.0; };
    auto coarse = [](int i) { return 0.05 + i * (3.0 - 0.05) / 4.0; };
    for (const auto& s : {qft::four_cone_sphere(), qft::one_cone_torus()}) {
        for (const char* name : {"pants0", "transversal0"}) {
            for (int i = 0; i < 25; ++i) solve(s, {curve(s, name)}, {grid(i)});
        }
    }
    const auto five = qft::five_cone_sphere();
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) solve(five, {curve(five, "pants0"), curve(five, "pants1")}, {coarse(i), coarse(j)});
    }
    const double secs = seconds_since(t0);
    t.need(secs < 60.0, say("took %.1f s", secs));
    return t.done(say("%g solves, worst weight error %.2g", solves, t.worst()) + say(", %.1f s", secs));
}

std::vector<ads::BendData> random_bend_data() {
    Gen gen(105);
    std::vector<ads::BendData> out;
    while (out.size() < 20) {
        const auto s = random_surface(gen, gen.index(3), 2.5, 1.0);
        out.push_back({s, qft::single(s, gen.coin() ? "pants0" : "transversal0", gen.uniform(0.05, 1.5))});
    }
    return out;
}

Outcome mess_round_trip(const std::vector<ads::BendData>& data) {
    Tally t;
    for (const auto& b : data) {
        const auto [ml, mr] = ads::left_right_metrics(ads::from_bending(b));
        std::vector<CurveClass> support;
        for (const auto& c : b.lambda_plus.components()) support.push_back(c.curve);
        const auto m = solver::mess_inverse(ml, mr, support);
        const double dh = spectrum_distance(length_spectrum(m.bend.h_plus), length_spectrum(b.h_plus));
        const double dw = std::abs(m.bend.lambda_plus.weights()[0] - b.lambda_plus.weights()[0]);
        const auto [ml2, mr2] = ads::left_right_metrics(ads::from_bending(m.bend));
        const double dl = spectrum_distance(length_spectrum(ml2), length_spectrum(ml));
        const double dr = spectrum_distance(length_spectrum(mr2), length_spectrum(mr));
        t.worst(std::max({dh, dl, dr}));
        t.need(dh < 1e-7, say("h+ recovered off by %.3g", dh));
        t.need(dw < 1e-6, say("bending weight off by %.3g", dw));
        t.need(dl < 1e-7 && dr < 1e-7, say("metrics off by %.3g / %.3g", dl, dr));
    }
    return t.done(say("20 instances, worst spectrum gap %.2g", t.worst()));
}

Outcome diagram(const std::vector<ads::BendData>& data) {
    Tally t;
    for (const auto& b : data) {
        const auto d = ads::diagram_check(b);
        t.worst(std::max({d.left, d.right, d.doubled}));
        t.need(d.passed(1e-7), say("identity residual %.3g", std::max({d.left, d.right, d.doubled})));
    }
    return t.done(say("20 instances, worst identity residual %.2g", t.worst()));
}

double cube(double x) { return x * x * x; }

Outcome volume_checks() {
    Tally t;
    const double e1 = std::abs(volume::cos2_integral(10000) - kPi / 4);
    const double e2 = std::abs(volume::cos_sin_integral(10000) - 0.5);
    t.need(e1 < 1e-10 && e2 < 1e-10, say("radial integrals off by %.3g / %.3g", e1, e2));
    t.need(std::abs(volume::simpson(cube, 2) - std::pow(kPi / 2, 4) / 4) < 1e-12, "Simpson not exact on cubics");

    const auto five = qft::five_cone_sphere();
    const auto four = qft::four_cone_sphere();
    double worst_omega = 0.0;
    for (const auto& [s, lambda] :
         {std::pair{four, qft::single(four, "pants0", 0.7)},
          std::pair{five, WeightedMulticurve::on_pants(five.decomposition(), {{0, 0.6}, {1, 0.35}})},
          std::pair{four, WeightedMulticurve()}}) {
        const auto n = volume::omega_volume_numeric(s, lambda, 10000);
        const double closed =
            volume::omega_volume_closed(surface::gauss_bonnet_area(s.angles(), 0), volume::bending_length(s, lambda));
        worst_omega = std::max(worst_omega, std::abs(n.volume - closed));
    }
    t.need(worst_omega < 1e-6, say("numeric Omega volume off by %.3g", worst_omega));

    Gen gen(107);
    double worst_identity = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto s = random_surface(gen, gen.index(3));
        const double a = surface::gauss_bonnet_area(s.angles(), s.decomposition().genus);
        const auto id = volume::total_volume_identity(a, a, gen.uniform(0.0, 5.0), gen.uniform(0.0, 5.0), s.angles(),
                                                      s.decomposition().genus);
        worst_identity = std::max(worst_identity, id.residual);
    }
    t.need(worst_identity <= 1e-12, say("identity residual %.3g", worst_identity));

    const double domain = surface::FundamentalDomain::build(four.holonomy(), four.angles()).area();
    const double gb = surface::gauss_bonnet_area(four.angles(), 0);
    t.need(std::abs(domain - gb) < 1e-6, say("domain area %.12g vs %.12g", domain, gb));
    return t.done(say("Omega gap %.2g, identity residual %.2g", worst_omega, worst_identity) +
                  say(", area gap %.2g", std::abs(domain - gb)));
}

Outcome local_formulas() {
    Tally t;
    Gen gen(108);
    double worst_flow = 0.0, lo_ratio = 1e300, hi_ratio = 0.0;
    for (int i = 0; i < 10; ++i) {
        ads::GraphSurface g;
        g.eps = gen.uniform(0.05, 0.35);
        g.a = gen.uniform(-1.0, 1.0);
        g.b = gen.uniform(-1.0, 1.0);
        g.c = gen.uniform(-0.5, 0.5);
        const double tt = gen.uniform(0.0, 1.0);
        const double fine = ads::flow_curvature_check(ads::sample_graph(g, 0.1, -0.2, 1e-3, 9), tt);
        const double coarse = ads::flow_curvature_check(ads::sample_graph(g, 0.1, -0.2, 2e-3, 9), tt);
        worst_flow = std::max(worst_flow, fine);
        lo_ratio = std::min(lo_ratio, coarse / fine);
        hi_ratio = std::max(hi_ratio, coarse / fine);
    }
    t.need(worst_flow < 1e-4, say("flow curvature error %.3g", worst_flow));
    t.need(lo_ratio >= 3.5 && hi_ratio <= 4.5, say("refinement ratio in [%.3g, %.3g]", lo_ratio, hi_ratio));
    double worst_dev = 0.0, min_norm = 1e300;
    for (int i = 0; i < 100; ++i) {
        std::array<double, 2> v0{gen.uniform(-1, 1), gen.uniform(-1, 1)};
        std::array<double, 2> v1{gen.uniform(-1, 1), gen.uniform(-1, 1)};
        if (v0[0] * v1[0] + v0[1] * v1[1] < 0.0) v1 = {-v1[0], -v1[1]};
        const auto r = ads::jacobi_check(v0, v1, kPi / 2);
        worst_dev = std::max(worst_dev, r.deviation);
        min_norm = std::min(min_norm, r.min_norm);
    }
    t.need(worst_dev < 1e-6, say("Jacobi deviation %.3g", worst_dev));
    t.need(min_norm > 0.0, "Jacobi field vanishes on (0, pi/2)");
    return t.done(say("flow error %.2g, ratio [%.3g, ", worst_flow, lo_ratio) + say("%.3g], Jacobi deviation %.2g", hi_ratio, worst_dev) +
                  say(", min |J| %.2g", min_norm));
}

Outcome angles() {
    Tally t;
    Gen gen(109);
    int outputs = 0;
    auto check = [&](const surface::Holonomy& h, const surface::ConeAngles& a, const char* what) {
        const double d = peripheral_gap(h, a);
        t.worst(d);
        t.need(d <= 1e-10, std::string(what) + say(": angle off by %.3g", d));
        ++outputs;
    };
    for (int i = 0; i < 30; ++i) {
        const auto s = random_surface(gen, gen.index(3), 2.5, 1.0);
        const auto lambda = qft::single(s, gen.coin() ? "pants0" : "transversal0", gen.uniform(0.05, 2.0));
        check(quake::right_earthquake(s, lambda).holonomy(), s.angles(), "right earthquake");
        check(quake::left_earthquake(s, lambda).holonomy(), s.angles(), "left earthquake");
        check(quake::right_earthquake_cocycle(s, lambda).holonomy, s.angles(), "right cocycle");
        check(quake::left_earthquake_cocycle(s, lambda).holonomy, s.angles(), "left cocycle");
        const auto g = ads::from_bending({s, lambda});
        check(g.rho_l, s.angles(), "rho_l");
        check(g.rho_r, s.angles(), "rho_r");
        if (i % 3 == 0) {
            const auto [ml, mr] = ads::left_right_metrics(g);
            const auto m = solver::mess_inverse(ml, mr, {lambda.components()[0].curve});
            check(m.bend.h_plus.holonomy(), s.angles(), "mess_inverse h+");
            check(m.ghmc.rho_l, s.angles(), "mess_inverse rho_l");
            check(m.ghmc.rho_r, s.angles(), "mess_inverse rho_r");
        }
    }
    return t.done(say("%g outputs, worst angle error %.2g", outputs, t.worst()));
}

Outcome rigidity() {
    Tally t;
    Gen gen(110);
    double smallest = 1e300;
    for (int i = 0; i < 20; ++i) {
        const int kind = gen.index(3);
        const auto s = random_surface(gen, kind, 2.5, 1.0);
        solver::RigidityReport r;
        if (kind == 2 && gen.coin()) {
            r = solver::local_rigidity_check(s, {curve(s, "pants0"), curve(s, "pants1")},
                                             {gen.uniform(0.05, 3.0), gen.uniform(0.05, 3.0)});
        } else {
            r = solver::local_rigidity_check(s, qft::single(s, gen.coin() ? "pants0" : "transversal0", gen.uniform(0.05, 3.0)));
        }
        smallest = std::min(smallest, r.sigma_min);
        t.need(r.sigma_min > 1e-6 && !r.rank_deficient, say("sigma_min %.3g", r.sigma_min));
    }
    const auto s = qft::four_cone_sphere();
    const auto dup = solver::local_rigidity_check(s, {curve(s, "pants0"), curve(s, "pants0")}, {0.5, 0.5});
    t.need(dup.rank_deficient, "duplicated curve not reported rank-deficient");
    return t.done(say("20 points, smallest sigma %.3g; duplicated curve sigma %.2g", smallest, dup.sigma_min));
}

}  // namespace

int main() {
    const std::vector<ads::BendData> bends = random_bend_data();
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"earthquake inverse law", inverse_law},
        {"twist/cocycle agreement", twist_cocycle},
        {"length inequality", length_inequality},
        {"planted weights recovered", planted_recovery},
        {"bending data round trip", [&] { return mess_round_trip(bends); }},
        {"diagram identities", [&] { return diagram(bends); }},
        {"volume formulas", volume_checks},
        {"local AdS formulas", local_formulas},
        {"angle preservation", angles},
        {"local rigidity", rigidity},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        log::drain_notices();
        std::printf("%-4s %2d  %-28s %s\n", o.ok ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.ok) ++failed;
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed ? 1 : 0;
}
