#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "qf/error.hpp"
#include "qf/io.hpp"

namespace qf::io {

namespace {

using surface::BlockDecomposition;
using surface::CurveClass;

Word word_from_json(const json& j, int generators, const std::string& ptr) {
    Word w;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const int k = j[i].get<int>();
        if (k == 0 || std::abs(k) > generators) {
            throw SchemaError(ptr + "/" + std::to_string(i), "letter out of range 1.." + std::to_string(generators));
        }
        w.push_back(k);
    }
    return w;
}

json named_words(const std::vector<CurveClass>& list) {
    json out = json::array();
    for (const auto& c : list) out.push_back({{"name", c.name}, {"word", c.word}});
    return out;
}

json blocks_json(const BlockDecomposition& d) {
    json out = json::array();
    for (const auto& b : d.blocks) {
        json slots = json::array();
        for (const auto& s : b.slots) {
            slots.push_back({{"kind", s.kind == surface::SlotKind::Cone ? "cone" : "boundary"}, {"index", s.index}});
        }
        out.push_back(slots);
    }
    return out;
}

json gluing_json(const BlockDecomposition& d) {
    json out = json::array();
    for (const auto& g : d.gluing) {
        out.push_back({{"curve", g.curve}, {"block_a", g.block_a}, {"slot_a", g.slot_a},
                       {"block_b", g.block_b}, {"slot_b", g.slot_b}});
    }
    return out;
}

json marking_json(const BlockDecomposition& d) {
    json gens = json::array();
    for (const auto& g : d.marking.generators) gens.push_back(g.name);
    return {{"generators", gens},
            {"relator", d.marking.relator},
            {"peripheral", d.marking.peripheral},
            {"pants", named_words(d.marking.pants)},
            {"transversals", named_words(d.marking.transversals)}};
}

void require_same(const json& given, const json& built, const std::string& ptr, const std::string& what) {
    if (given != built) throw SchemaError(ptr, what + " does not match the " + what + " of this decomposition kind");
}

json matrices(const std::vector<ads::Mat2>& field) {
    json out = json::array();
    for (const auto& m : field) out.push_back(m);
    return out;
}

std::vector<ads::Mat2> field_from_json(const json& j, std::size_t count, const std::string& ptr) {
    if (j.size() != count) {
        throw SchemaError(ptr, "expected " + std::to_string(count) + " samples, found " + std::to_string(j.size()));
    }
    std::vector<ads::Mat2> out;
    for (const auto& m : j) out.push_back(m.get<ads::Mat2>());
    return out;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    std::ostringstream os;
    os << std::hex;
    for (unsigned int i = 0; i < len; ++i) os << (digest[i] >> 4) << (digest[i] & 0xf);
    return os.str();
}

json read_json(const std::filesystem::path& path, const std::string& pointer) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(pointer, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw SchemaError(pointer, "malformed JSON in " + path.string() + ": " + e.what());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json Inputs::load(const std::filesystem::path& path, const std::string& schema_name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path.string(), "cannot read file");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string(), std::string("malformed JSON: ") + e.what());
    }
    validate(doc, schema_name, path.string() + "#");
    digests_.push_back({path.string(), sha256_hex(bytes)});
    return doc;
}

json Inputs::resolve(const json& ref, const std::filesystem::path& base_dir, const std::string& schema_name,
                     const std::string& pointer) {
    if (!ref.is_string()) {
        validate(ref, schema_name, pointer);
        return ref;
    }
    const std::filesystem::path p = base_dir / ref.get<std::string>();
    if (!std::filesystem::exists(p)) throw SchemaError(pointer, "referenced file " + p.string() + " does not exist");
    return load(p, schema_name);
}

json Inputs::digests_json() const {
    json out = json::array();
    for (const auto& d : digests_) out.push_back({{"path", d.path}, {"sha256", d.sha256}});
    return out;
}

json isometry_to_json(const hyp::Isometry& g) { return g.entries(); }

surface::ConeSurface surface_from_json(const json& j, const std::string& pointer) {
    std::vector<double> angles = j.at("angles").get<std::vector<double>>();
    const std::string kind = j.at("kind").get<std::string>();
    BlockDecomposition d;
    if (kind == "chain_sphere") {
        if (angles.size() < 4) throw SchemaError(pointer + "/angles", "a chain sphere needs at least 4 cone points");
        d = BlockDecomposition::chain_sphere(static_cast<int>(angles.size()));
    } else {
        if (angles.size() != 1) throw SchemaError(pointer + "/angles", "a cone torus has exactly 1 cone point");
        d = BlockDecomposition::cone_torus();
    }
    if (j.at("genus").get<int>() != d.genus) {
        throw SchemaError(pointer + "/genus", "kind " + kind + " has genus " + std::to_string(d.genus));
    }
    const json& fn_json = j.at("fn");
    if (static_cast<int>(fn_json.size()) != d.curve_count()) {
        throw SchemaError(pointer + "/fn", "expected " + std::to_string(d.curve_count()) + " FN pairs");
    }
    if (j.contains("blocks")) require_same(j["blocks"], blocks_json(d), pointer + "/blocks", "block list");
    if (j.contains("gluing")) require_same(j["gluing"], gluing_json(d), pointer + "/gluing", "gluing");
    if (j.contains("marking")) {
        const auto built = marking_json(d);
        for (const auto& [k, v] : j["marking"].items()) {
            require_same(v, built.at(k), pointer + "/marking/" + k, "marking " + k);
        }
    }
    surface::FNCoordinates fn;
    for (const auto& c : fn_json) fn.push_back({c.at("length").get<double>(), c.at("twist").get<double>()});

    auto dp = std::make_shared<const BlockDecomposition>(std::move(d));
    std::optional<surface::ConeSurface> s;
    try {
        s = surface::ConeSurface::assemble(dp, fn, surface::ConeAngles(angles));
    } catch (const NoHyperbolicStructure& e) {
        throw SchemaError(pointer + "/angles", e.what());
    } catch (const ExistenceViolation& e) {
        throw SchemaError(pointer + "/fn", e.what());
    } catch (const AssemblyError& e) {
        throw SchemaError(pointer + "/fn", e.what());
    }
    if (j.contains("holonomy")) {
        const auto& h = j["holonomy"];
        const auto& images = s->holonomy().images;
        if (h.size() != images.size()) throw SchemaError(pointer + "/holonomy", "wrong number of generator images");
        for (std::size_t i = 0; i < images.size(); ++i) {
            const auto e = h[i].get<std::array<double, 4>>();
            const double det = e[0] * e[3] - e[1] * e[2];
            if (!(det > 0.0) || hyp::Isometry::from_matrix(e[0], e[1], e[2], e[3]).distance(images[i]) > 1e-9) {
                throw SchemaError(pointer + "/holonomy/" + std::to_string(i), "does not match the FN data");
            }
        }
    }
    return *s;
}

json surface_to_json(const surface::ConeSurface& s, const std::string& name) {
    const auto& d = s.decomposition();
    json fn = json::array();
    for (const auto& c : s.fn()) fn.push_back({{"length", c.length}, {"twist", c.twist}});
    json hol = json::array();
    for (const auto& g : s.holonomy().images) hol.push_back(isometry_to_json(g));
    json out{{"schema_version", kSchemaVersion},
             {"kind", d.kind},
             {"genus", d.genus},
             {"angles", s.angles().values()},
             {"fn", fn},
             {"blocks", blocks_json(d)},
             {"gluing", gluing_json(d)},
             {"marking", marking_json(d)},
             {"holonomy", hol}};
    if (!name.empty()) out["name"] = name;
    return out;
}

CurveClass curve_from_json(const json& j, const BlockDecomposition& d, const std::string& pointer) {
    if (j.contains("name")) {
        if (auto c = quake::find_curve(d, j["name"].get<std::string>())) return *c;
        throw SchemaError(pointer + "/name", "no curve of that name in the marking catalogue");
    }
    if (j.contains("pants")) {
        const int k = j["pants"].get<int>();
        if (k >= d.curve_count()) throw SchemaError(pointer + "/pants", "pants curve index out of range");
        return d.marking.pants[static_cast<std::size_t>(k)];
    }
    const Word w = word_from_json(j.at("word"), d.generator_count(), pointer + "/word");
    const auto fg = d.free_group();
    for (const auto* list : {&d.marking.pants, &d.marking.transversals, &d.marking.products}) {
        for (const auto& c : *list) {
            if (fg.conjugate(w, c.word, true)) return c;
        }
    }
    throw SchemaError(pointer + "/word", "not conjugate to a catalogue curve");
}

json curve_to_json(const CurveClass& c) { return {{"name", c.name}}; }

std::vector<CurveClass> curves_from_json(const json& j, const BlockDecomposition& d, const std::string& pointer) {
    std::vector<CurveClass> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(curve_from_json(j[i], d, pointer + "/" + std::to_string(i)));
    return out;
}

quake::WeightedMulticurve multicurve_from_json(const json& j, const BlockDecomposition& d, const std::string& pointer) {
    std::vector<quake::Component> comps;
    const auto& list = j.at("components");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = pointer + "/components/" + std::to_string(i);
        comps.push_back({curve_from_json(list[i].at("curve"), d, p + "/curve"), list[i].at("weight").get<double>(),
                         std::nullopt});
    }
    try {
        return quake::WeightedMulticurve::make(d, std::move(comps));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(pointer + "/components", e.what());
    }
}

json multicurve_to_json(const quake::WeightedMulticurve& lambda) {
    json comps = json::array();
    for (const auto& c : lambda.components()) comps.push_back({{"curve", curve_to_json(c.curve)}, {"weight", c.weight}});
    return {{"schema_version", kSchemaVersion}, {"components", comps}};
}

ads::EmbeddingSample embedding_from_json(const json& j, const std::string& pointer) {
    ads::EmbeddingSample e;
    e.n = j.at("n").get<int>();
    e.h = j.at("h").get<double>();
    e.u0 = j.at("u0").get<double>();
    e.v0 = j.at("v0").get<double>();
    const auto count = static_cast<std::size_t>(e.n) * static_cast<std::size_t>(e.n);
    e.I = field_from_json(j.at("I"), count, pointer + "/I");
    e.B = field_from_json(j.at("B"), count, pointer + "/B");
    e.J = field_from_json(j.at("J"), count, pointer + "/J");
    return e;
}

json embedding_to_json(const ads::EmbeddingSample& e, const std::string& name) {
    json out{{"schema_version", kSchemaVersion}, {"n", e.n},           {"h", e.h},           {"u0", e.u0},
             {"v0", e.v0},                       {"I", matrices(e.I)}, {"B", matrices(e.B)}, {"J", matrices(e.J)}};
    if (!name.empty()) out["name"] = name;
    return out;
}

json spectrum_to_json(const surface::LengthSpectrum& s) {
    json out = json::array();
    for (const auto& e : s) out.push_back({{"name", e.name}, {"word", e.word}, {"length", e.length}});
    return out;
}

json solver_report_to_json(const solver::SolverReport& r) {
    return {{"weights", r.weights},         {"residual", r.residual},   {"iterations", r.iterations},
            {"condition", r.condition},     {"sigma_min", r.sigma_min}, {"converged", r.converged},
            {"notices", r.notices}};
}

std::string trace_csv(const solver::SolverReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "iteration,residual,damping";
    const std::size_t n = r.trace.empty() ? 0 : r.trace.front().weights.size();
    for (std::size_t j = 0; j < n; ++j) os << ",w" << j;
    os << "\n";
    for (const auto& it : r.trace) {
        os << it.iteration << "," << it.residual << "," << it.damping;
        for (double w : it.weights) os << "," << w;
        os << "\n";
    }
    return os.str();
}

json volume_report_to_json(const volume::VolumeReport& r) {
    return {{"area", r.area},
            {"bending_length", r.bending_length},
            {"omega_closed", r.closed},
            {"omega_numeric", r.numeric},
            {"refinement", r.refinement},
            {"identity",
             {{"lhs", r.identity.lhs},
              {"rhs", r.identity.rhs},
              {"residual", r.identity.residual},
              {"rhs_other_sign", r.identity.rhs_other_sign}}},
            {"notices", r.notices}};
}

json diagram_to_json(const ads::DiagramReport& r) {
    return {{"left", r.left}, {"right", r.right}, {"doubled", r.doubled}};
}

}  // namespace qf::io
