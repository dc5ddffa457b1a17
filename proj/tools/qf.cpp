// qf: batch front-end over the library. One subcommand per operation; every
// run writes a JSON report with the residuals it checked.

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "qf/ads.hpp"
#include "qf/earthquake.hpp"
#include "qf/error.hpp"
#include "qf/io.hpp"
#include "qf/log.hpp"
#include "qf/solver.hpp"
#include "qf/volume.hpp"

namespace fs = std::filesystem;
using namespace qf;
using io::json;

namespace {

struct Options {
    std::optional<double> tol;
    int resolution = 10000;
    unsigned seed = 0;
    bool strict = false;
    std::string out;
    std::string trace;
};

class Report {
public:
    Report(std::string command, const Options& o) : command_(std::move(command)) {
        options_ = {{"resolution", o.resolution}, {"seed", o.seed}, {"strict", o.strict}};
        if (o.tol) options_["tol"] = *o.tol;
    }

    void option(const std::string& key, const json& value) { options_[key] = value; }
    void residual(const std::string& name, double value, double tol) {
        const bool ok = std::isfinite(value) && value <= tol;
        residuals_.push_back({{"name", name}, {"value", value}, {"tol", tol}, {"bound", "max"}, {"passed", ok}});
        passed_ = passed_ && ok;
    }
    // A quantity that must stay at or above `floor`.
    void margin(const std::string& name, double value, double floor) {
        const bool ok = std::isfinite(value) && value >= floor;
        residuals_.push_back({{"name", name}, {"value", value}, {"tol", floor}, {"bound", "min"}, {"passed", ok}});
        passed_ = passed_ && ok;
    }
    json& result() { return result_; }
    bool passed() const { return passed_; }

    json finish(const io::Inputs& inputs) const {
        std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return {{"schema_version", io::kSchemaVersion}, {"command", command_},    {"generated_at", stamp},
                {"inputs", inputs.digests_json()},      {"options", options_},    {"residuals", residuals_},
                {"passed", passed_},                    {"result", result_},      {"notices", log::drain_notices()}};
    }

    void print_table(std::ostream& os) const {
        for (const auto& r : residuals_) {
            os << (r["passed"].get<bool>() ? "  ok    " : "  FAIL  ") << r["name"].get<std::string>() << "  "
               << r["value"].dump() << (r["bound"] == "min" ? "  (at least " : "  (tol ") << r["tol"].dump() << ")\n";
        }
    }

private:
    std::string command_;
    json options_;
    json residuals_ = json::array();
    json result_ = json::object();
    bool passed_ = true;
};

double tol_or(const Options& o, double fallback) { return o.tol ? *o.tol : fallback; }

fs::path dir_of(const std::string& file) { return fs::path(file).parent_path(); }

constexpr double kAngleTol = 1e-10;

surface::ConeSurface load_surface(io::Inputs& in, const json& ref, const fs::path& base, const std::string& ptr) {
    const json doc = in.resolve(ref, base, "surface", ptr);
    return io::surface_from_json(doc, ref.is_string() ? (base / ref.get<std::string>()).string() + "#" : ptr);
}

quake::WeightedMulticurve load_multicurve(io::Inputs& in, const json& ref, const fs::path& base, const std::string& ptr,
                                          const surface::BlockDecomposition& d) {
    const json doc = in.resolve(ref, base, "multicurve", ptr);
    return io::multicurve_from_json(doc, d, ref.is_string() ? (base / ref.get<std::string>()).string() + "#" : ptr);
}

void check_angles(Report& r, const std::string& name, const surface::Holonomy& h, const surface::ConeAngles& a) {
    r.residual(name, h.peripheral_residual(a), kAngleTol);
}

// ---------------------------------------------------------------------------

void run_build(Report& r, io::Inputs& in, const Options&, const std::string& file) {
    const auto s = load_surface(in, json(fs::path(file).filename().string()), dir_of(file), "");
    const auto dom = surface::FundamentalDomain::build(s.holonomy(), s.angles());
    const double gb = surface::gauss_bonnet_area(s.angles(), s.decomposition().genus);
    r.result()["surface"] = io::surface_to_json(s);
    r.result()["spectrum"] = io::spectrum_to_json(surface::length_spectrum(s));
    r.result()["gauss_bonnet_area"] = gb;
    r.result()["domain_area"] = dom.area();
    r.residual("relator", s.holonomy().relator_residual(), 1e-9);
    check_angles(r, "peripheral_angles", s.holonomy(), s.angles());
    r.residual("domain_area_vs_gauss_bonnet", std::abs(dom.area() - gb), 1e-6);
}

void run_earthquake(Report& r, io::Inputs& in, const Options& o, const std::string& sfile, const std::string& mfile,
                    bool left) {
    const auto s = load_surface(in, json(fs::path(sfile).filename().string()), dir_of(sfile), "");
    const auto lam = load_multicurve(in, json(fs::path(mfile).filename().string()), dir_of(mfile), "", s.decomposition());
    const auto side = left ? quake::Side::Left : quake::Side::Right;
    const quake::EarthquakeOptions eo{o.strict, o.seed};
    const double tol = tol_or(o, 1e-8);
    r.option("side", left ? "left" : "right");

    const auto out = quake::earthquake(s, lam, side, eo);
    r.result()["method"] = lam.pants_supported() ? "twist" : "cocycle";
    r.result()["surface"] = io::surface_to_json(out);
    r.result()["spectrum"] = io::spectrum_to_json(surface::length_spectrum(out));
    r.result()["multicurve"] = io::multicurve_to_json(lam);
    check_angles(r, "peripheral_angles", out.holonomy(), out.angles());
    r.residual("relator", out.holonomy().relator_residual(), 1e-9);

    const auto back = quake::earthquake(out, lam, left ? quake::Side::Right : quake::Side::Left, eo);
    r.residual("inverse_law", surface::teich_distance(back, s), tol);
    if (lam.pants_supported() && !lam.empty()) {
        const auto coc = left ? quake::left_earthquake_cocycle(s, lam, eo) : quake::right_earthquake_cocycle(s, lam, eo);
        r.residual("twist_vs_cocycle", surface::teich_distance(out.holonomy(), coc.holonomy), tol);
    }
}

void run_invert(Report& r, io::Inputs& in, const Options& o, const std::string& file) {
    const json doc = in.load(file, "invert");
    const fs::path base = dir_of(file);
    const std::string f = file + "#";
    auto source = std::make_shared<const surface::ConeSurface>(load_surface(in, doc["source"], base, f + "/source"));
    const auto& d = source->decomposition();
    std::optional<quake::WeightedMulticurve> planted;
    std::shared_ptr<const surface::ConeSurface> target;
    if (doc.contains("planted")) {
        planted = load_multicurve(in, doc["planted"], base, f + "/planted", d);
        target = std::make_shared<const surface::ConeSurface>(quake::right_earthquake(*source, *planted, {o.strict, o.seed}));
    } else {
        target = std::make_shared<const surface::ConeSurface>(load_surface(in, doc["target"], base, f + "/target"));
    }
    solver::InversionProblem p;
    p.source = source;
    p.target = target;
    p.support = io::curves_from_json(doc["support"], d, f + "/support");
    p.seed = doc.value("seed", o.seed);
    p.tol = tol_or(o, doc.value("tol", p.tol));
    p.upper = doc.value("upper", p.upper);
    p.max_iterations = doc.value("max_iterations", p.max_iterations);
    if (doc.contains("initial")) {
        p.initial = doc["initial"].get<std::vector<double>>();
        if (p.initial->size() != p.support.size()) throw SchemaError(f + "/initial", "one initial weight per support curve");
    }
    const auto rep = solver::invert_earthquake(p);
    r.result()["inversion"] = io::solver_report_to_json(rep);
    json support = json::array();
    for (const auto& c : p.support) support.push_back(io::curve_to_json(c));
    r.result()["support"] = support;
    r.residual("spectrum", rep.residual, p.tol);
    if (planted) {
        r.result()["planted"] = io::multicurve_to_json(*planted);
        double err = 0.0;
        for (std::size_t j = 0; j < p.support.size(); ++j) {
            double want = 0.0;
            for (const auto& c : planted->components()) {
                if (d.free_group().conjugate(c.curve.word, p.support[j].word, true)) want = c.weight;
            }
            err = std::max(err, std::abs(rep.weights[j] - want));
        }
        r.residual("planted_weights", err, 1e-6);
    }
    if (!o.trace.empty()) {
        std::ofstream(o.trace) << io::trace_csv(rep);
        r.option("trace", o.trace);
    }
}

void run_diagram(Report& r, io::Inputs& in, const Options& o, const std::string& file) {
    const json doc = in.load(file, "bend");
    const fs::path base = dir_of(file);
    const std::string f = file + "#";
    const auto h = load_surface(in, doc["surface"], base, f + "/surface");
    const auto lam = load_multicurve(in, doc["multicurve"], base, f + "/multicurve", h.decomposition());
    const unsigned seed = doc.value("seed", o.seed);
    const double tol = tol_or(o, doc.value("tol", 1e-7));
    const ads::BendData b{h, lam};
    const auto g = ads::from_bending(b, seed);
    const auto rep = ads::diagram_check(b, seed);
    const auto [mu_l, mu_r] = ads::left_right_metrics(g);
    r.result()["diagram"] = io::diagram_to_json(rep);
    r.result()["left_metric"] = io::surface_to_json(mu_l);
    r.result()["right_metric"] = io::surface_to_json(mu_r);
    r.residual("left_identity", rep.left, tol);
    r.residual("right_identity", rep.right, tol);
    r.residual("doubled_identity", rep.doubled, tol);
    r.residual("ghmc_relator", g.relator_residual(), 1e-9);
    r.residual("ghmc_peripheral_angles", g.peripheral_residual(), kAngleTol);
}

void run_mess_inverse(Report& r, io::Inputs& in, const Options& o, const std::string& file) {
    const json doc = in.load(file, "mess");
    const fs::path base = dir_of(file);
    const std::string f = file + "#";
    const auto mu_l = load_surface(in, doc["left"], base, f + "/left");
    const auto mu_r = load_surface(in, doc["right"], base, f + "/right");
    const auto support = io::curves_from_json(doc["support"], mu_l.decomposition(), f + "/support");
    const double tol = tol_or(o, doc.value("tol", 1e-9));
    const auto m = solver::mess_inverse(mu_l, mu_r, support, tol, doc.value("seed", o.seed));
    r.result()["inversion"] = io::solver_report_to_json(m.inversion);
    r.result()["h_plus"] = io::surface_to_json(m.bend.h_plus);
    r.result()["lambda_plus"] = io::multicurve_to_json(m.bend.lambda_plus);
    r.residual("left_metric", m.left_residual, 1e-7);
    r.residual("right_metric", m.right_residual, 1e-7);
    r.residual("ghmc_peripheral_angles", m.ghmc.peripheral_residual(), kAngleTol);
}

void run_volume(Report& r, io::Inputs& in, const Options& o, const std::string& sfile, const std::string& mfile) {
    const auto s = load_surface(in, json(fs::path(sfile).filename().string()), dir_of(sfile), "");
    quake::WeightedMulticurve lam;
    if (!mfile.empty()) {
        lam = load_multicurve(in, json(fs::path(mfile).filename().string()), dir_of(mfile), "", s.decomposition());
    }
    const auto v = volume::volume_report(s, lam, o.resolution);
    const auto dom = surface::FundamentalDomain::build(s.holonomy(), s.angles());
    r.result()["volume"] = io::volume_report_to_json(v);
    r.result()["domain_area"] = dom.area();
    r.result()["quadrature"] = {{"cos2", volume::cos2_integral(o.resolution)},
                                {"cos_sin", volume::cos_sin_integral(o.resolution)}};
    r.residual("quadrature_cos2", std::abs(volume::cos2_integral(o.resolution) - std::numbers::pi / 4.0), 1e-10);
    r.residual("quadrature_cos_sin", std::abs(volume::cos_sin_integral(o.resolution) - 0.5), 1e-10);
    r.residual("omega_numeric_vs_closed", std::abs(v.numeric - v.closed), tol_or(o, 1e-6));
    r.residual("volume_identity", v.identity.residual, 1e-12);
    r.residual("domain_area_vs_gauss_bonnet", std::abs(dom.area() - v.area), 1e-6);
}

void run_probe(Report& r, io::Inputs& in, const Options& o, const std::string& sfile, const std::string& mfile,
               const std::string& curve, const std::vector<double>& scales) {
    const auto s = load_surface(in, json(fs::path(sfile).filename().string()), dir_of(sfile), "");
    const auto lam = load_multicurve(in, json(fs::path(mfile).filename().string()), dir_of(mfile), "", s.decomposition());
    std::optional<surface::CurveClass> gamma;
    if (!curve.empty()) gamma = io::curve_from_json({{"name", curve}}, s.decomposition(), "--curve");
    r.option("scales", scales);
    const auto p = solver::properness_probe(s, lam, scales, gamma);
    json rows = json::array();
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& row : p.rows) {
        rows.push_back({{"scale", row.scale},
                        {"length_before", row.length_before},
                        {"length_after", row.length_after},
                        {"mass", row.mass},
                        {"bound", row.bound},
                        {"computed", row.computed}});
        if (row.computed) worst = std::min(worst, row.length_after - row.bound);
    }
    r.result()["curve"] = p.curve;
    r.result()["rows"] = rows;
    r.result()["inconclusive"] = p.inconclusive;
    r.result()["linear_growth"] = p.linear_growth;
    if (!p.inconclusive) r.margin("bound_margin", worst, -tol_or(o, 1e-9));
}

void run_embedding(Report& r, io::Inputs& in, const Options& o, const std::string& file, double t) {
    const json doc = in.load(file, "embedding");
    const auto e = io::embedding_from_json(doc, file + "#");
    if (doc.contains("flow_t")) t = doc["flow_t"].get<double>();
    r.option("flow_t", t);
    const auto c = ads::check_embedding(e);
    const double flow = ads::flow_curvature_check(e, t);
    const auto [mp, mm] = ads::mu_from_embedding(e);
    double mu_dev = 0.0;
    for (const auto* m : {&mp, &mm}) {
        for (double k : ads::gaussian_curvature(*m, e.n, e.h)) {
            if (std::isfinite(k)) mu_dev = std::max(mu_dev, std::abs(k + 1.0));
        }
    }
    r.result()["check"] = {{"min_det_I", c.min_det_I}, {"self_adjoint", c.self_adjoint},
                           {"complex_square", c.complex_square}, {"orthogonal", c.orthogonal}, {"gauss", c.gauss}};
    r.result()["flow_curvature"] = flow;
    r.result()["mu_curvature"] = mu_dev;
    const double fd = tol_or(o, 1e-3);
    r.margin("min_det_I", c.min_det_I, 1e-12);
    r.residual("self_adjoint", c.self_adjoint, 1e-10);
    r.residual("complex_square", c.complex_square, 1e-12);
    r.residual("orthogonal", c.orthogonal, 1e-10);
    r.residual("gauss_equation", c.gauss, fd);
    r.residual("flow_curvature", flow, fd);
    r.residual("mu_curvature", mu_dev, fd);
}

// Quick run over built-in surfaces of the checks the fixtures exercise.
void run_selftest(Report& r, const Options& o) {
    using surface::BlockDecomposition;
    const double q = std::numbers::pi / 2.0;
    const auto sphere = surface::ConeSurface::assemble(
        std::make_shared<const BlockDecomposition>(BlockDecomposition::chain_sphere(4)), {{1.0, 0.0}},
        surface::ConeAngles({q, q, q, q}));
    const auto torus = surface::ConeSurface::assemble(
        std::make_shared<const BlockDecomposition>(BlockDecomposition::cone_torus()), {{1.5, 0.3}},
        surface::ConeAngles({q}));
    const quake::EarthquakeOptions eo{false, o.seed};
    for (const auto* s : {&sphere, &torus}) {
        const std::string tag = s == &sphere ? "sphere" : "torus";
        const auto& d = s->decomposition();
        const auto pants = quake::WeightedMulticurve::single(d, "pants0", 0.9);
        const auto trans = quake::WeightedMulticurve::single(d, "transversal0", 1.1);
        const auto tw = quake::right_earthquake(*s, pants, eo);
        const auto coc = quake::right_earthquake_cocycle(*s, pants, eo);
        r.residual(tag + "/twist_vs_cocycle", surface::teich_distance(tw.holonomy(), coc.holonomy), 1e-8);
        const auto er = quake::right_earthquake(*s, trans, eo);
        r.residual(tag + "/inverse_law", surface::teich_distance(quake::left_earthquake(er, trans, eo), *s), 1e-8);
        check_angles(r, tag + "/earthquake_angles", er.holonomy(), er.angles());
        const auto dg = ads::diagram_check({*s, trans}, o.seed);
        r.residual(tag + "/diagram", std::max({dg.left, dg.right, dg.doubled}), 1e-7);
        const auto v = volume::volume_report(*s, pants, o.resolution);
        r.residual(tag + "/omega_volume", std::abs(v.numeric - v.closed), 1e-6);
        r.residual(tag + "/volume_identity", v.identity.residual, 1e-12);
    }
    const auto e = ads::sample_graph({}, 0.1, -0.2, 1e-3, 9);
    r.residual("flow_curvature", ads::flow_curvature_check(e, 0.3), 1e-4);
    r.residual("jacobi", ads::jacobi_check({0.3, -0.2}, {0.5, 0.1}, 1.0).deviation, 1e-6);
}

int finish(const Report& r, const io::Inputs& in, const Options& o) {
    const json report = r.finish(in);
    const std::string text = io::dump(report);
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        const fs::path p = fs::path(o.out) / (report["command"].get<std::string>() + ".json");
        std::ofstream(p) << text;
        std::cout << report["command"].get<std::string>() << ": " << (r.passed() ? "passed" : "FAILED")
                  << " (report " << p.string() << ")\n";
        r.print_table(std::cout);
    } else {
        std::cout << text;
    }
    if (!r.passed()) {
        std::cerr << "tolerance failure:\n";
        r.print_table(std::cerr);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    log::configure_from_env();
    CLI::App app{"Earthquakes, AdS holonomy pairs and volumes for hyperbolic cone surfaces"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--tol", o.tol, "main tolerance of the subcommand");
    app.add_option("--resolution", o.resolution, "quadrature panels")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "seed for basepoints and sampling");
    app.add_flag("--strict", o.strict, "refuse the cocycle fallback for non-pants supports");
    app.add_option("--out", o.out, "directory for the report");
    app.add_option("--trace", o.trace, "CSV file for solver iterates");

    std::string a, b, curve;
    bool left = false;
    double flow_t = 0.3;
    std::vector<double> scales{1.0, 10.0, 100.0};

    auto* build = app.add_subcommand("build", "assemble a surface and report its holonomy and spectrum");
    build->add_option("surface", a)->required()->check(CLI::ExistingFile);
    auto* quake_cmd = app.add_subcommand("earthquake", "earthquake along a weighted multicurve");
    quake_cmd->add_option("surface", a)->required()->check(CLI::ExistingFile);
    quake_cmd->add_option("multicurve", b)->required()->check(CLI::ExistingFile);
    quake_cmd->add_flag("--left", left, "left earthquake (default right)");
    auto* invert = app.add_subcommand("invert", "recover earthquake weights between two surfaces");
    invert->add_option("problem", a)->required()->check(CLI::ExistingFile);
    auto* diagram = app.add_subcommand("diagram", "GHMC manifold from bending data and the earthquake diagram");
    diagram->add_option("bend", a)->required()->check(CLI::ExistingFile);
    auto* mess = app.add_subcommand("mess-inverse", "bending data from the left and right metrics");
    mess->add_option("metrics", a)->required()->check(CLI::ExistingFile);
    auto* vol = app.add_subcommand("volume", "volumes of the Omega regions");
    vol->add_option("surface", a)->required()->check(CLI::ExistingFile);
    vol->add_option("multicurve", b)->check(CLI::ExistingFile);
    auto* probe = app.add_subcommand("probe", "lengths after large earthquakes against the intersection bound");
    probe->add_option("surface", a)->required()->check(CLI::ExistingFile);
    probe->add_option("multicurve", b)->required()->check(CLI::ExistingFile);
    probe->add_option("--curve", curve, "catalogue curve to measure");
    probe->add_option("--scales", scales, "earthquake scales")->delimiter(',');
    auto* emb = app.add_subcommand("embedding", "local identities of a sampled surface in AdS3");
    emb->add_option("embedding", a)->required()->check(CLI::ExistingFile);
    emb->add_option("--flow-t", flow_t, "time of the normal flow");
    auto* self = app.add_subcommand("selftest", "built-in checks on the standard surfaces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Report r(name, o);
    io::Inputs in;
    try {
        if (build->parsed()) run_build(r, in, o, a);
        if (quake_cmd->parsed()) run_earthquake(r, in, o, a, b, left);
        if (invert->parsed()) run_invert(r, in, o, a);
        if (diagram->parsed()) run_diagram(r, in, o, a);
        if (mess->parsed()) run_mess_inverse(r, in, o, a);
        if (vol->parsed()) run_volume(r, in, o, a, b);
        if (probe->parsed()) run_probe(r, in, o, a, b, curve, scales);
        if (emb->parsed()) run_embedding(r, in, o, a, flow_t);
        if (self->parsed()) run_selftest(r, o);
    } catch (const SchemaError& e) {
        std::cerr << "schema error at " << e.what() << "\n";
        return 2;
    } catch (const NonConvergence& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return finish(r, in, o);
}
