#pragma once

// JSON files of the qf tool: schema validation, conversion to and from the
// library types, input digests.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "qf/ads.hpp"
#include "qf/earthquake.hpp"
#include "qf/solver.hpp"
#include "qf/volume.hpp"

namespace qf::io {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

/// Names of the embedded schemas ("surface", "multicurve", ...).
std::vector<std::string> schema_names();
const json& schema(const std::string& name);

/// Throws SchemaError with the JSON pointer of the first offending value,
/// prefixed by `base`.
void validate(const json& doc, const std::string& schema_name, const std::string& base = "");

std::string sha256_hex(const std::string& bytes);

/// Reads and parses; a missing file or malformed JSON is a SchemaError at `pointer`.
json read_json(const std::filesystem::path& path, const std::string& pointer = "");

/// Shortest round-trip representation of every double.
std::string dump(const json& j);

struct InputDigest {
    std::string path;
    std::string sha256;
};

/// Loads files and references to files, validating each against its schema
/// and recording the digests of everything read.
class Inputs {
public:
    json load(const std::filesystem::path& path, const std::string& schema_name);
    /// A string is a path relative to `base_dir`; an object is taken inline.
    json resolve(const json& ref, const std::filesystem::path& base_dir, const std::string& schema_name,
                 const std::string& pointer);

    const std::vector<InputDigest>& digests() const { return digests_; }
    json digests_json() const;

private:
    std::vector<InputDigest> digests_;
};

json isometry_to_json(const hyp::Isometry& g);

/// The decomposition is rebuilt from kind and angle count; optional blocks,
/// gluing, marking and holonomy must agree with it.
surface::ConeSurface surface_from_json(const json& j, const std::string& pointer = "");
json surface_to_json(const surface::ConeSurface& s, const std::string& name = "");

surface::CurveClass curve_from_json(const json& j, const surface::BlockDecomposition& d, const std::string& pointer);
json curve_to_json(const surface::CurveClass& c);
std::vector<surface::CurveClass> curves_from_json(const json& j, const surface::BlockDecomposition& d,
                                                  const std::string& pointer);

quake::WeightedMulticurve multicurve_from_json(const json& j, const surface::BlockDecomposition& d,
                                               const std::string& pointer = "");
json multicurve_to_json(const quake::WeightedMulticurve& lambda);

ads::EmbeddingSample embedding_from_json(const json& j, const std::string& pointer = "");
json embedding_to_json(const ads::EmbeddingSample& e, const std::string& name = "");

json spectrum_to_json(const surface::LengthSpectrum& s);
json solver_report_to_json(const solver::SolverReport& r);
/// iteration, residual, damping, w0, w1, ...
std::string trace_csv(const solver::SolverReport& r);
json volume_report_to_json(const volume::VolumeReport& r);
json diagram_to_json(const ads::DiagramReport& r);

}  // namespace qf::io
