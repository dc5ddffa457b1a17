#pragma once

// Marked hyperbolic structures with cone singularities, built from blocks
// (pairs of pants whose three slots are geodesic boundaries or cone points)
// glued with Fenchel-Nielsen length/twist data.

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qf/hyp.hpp"
#include "qf/words.hpp"

namespace qf::surface {

using hyp::Isometry;

class ConeAngles {
public:
    ConeAngles() = default;
    /// Throws std::invalid_argument unless every angle lies in (0, π).
    explicit ConeAngles(std::vector<double> angles);

    std::size_t size() const { return angles_.size(); }
    double operator[](std::size_t i) const { return angles_[i]; }
    const std::vector<double>& values() const { return angles_; }

private:
    std::vector<double> angles_;
};

enum class SlotKind { Cone, Boundary };

struct Slot {
    SlotKind kind;
    int index;  // cone point index or pants-curve index
};

struct Block {
    std::array<Slot, 3> slots;
};

/// The element of slot b is conjugated onto the inverse of the element of slot a.
struct Gluing {
    int curve;
    int block_a;
    int slot_a;
    int block_b;
    int slot_b;
};

struct GeneratorDef {
    enum class Kind { BlockSlot, Stable };
    Kind kind;
    int block = -1;
    int slot = -1;
    int gluing = -1;
    std::string name;
};

struct CurveClass {
    std::string name;
    Word word;
    bool simple = true;
    std::optional<int> peripheral;
};

/// Vertex = ρ(word) applied to the fixed point of the peripheral holonomy of `cone`.
struct DomainVertex {
    int cone;
    Word word;
};

/// Side k joins vertex k to vertex k+1; `pairing` maps side `paired` onto side k.
struct DomainSide {
    int paired;
    Word pairing;
};

struct Marking {
    std::vector<GeneratorDef> generators;
    Word relator;
    std::vector<Word> peripheral;  // one loop per cone point
    std::vector<CurveClass> pants;
    std::vector<CurveClass> transversals;  // one per pants curve
    std::vector<CurveClass> products;      // transversal * pants curve
    std::vector<DomainVertex> domain_vertices;
    std::vector<DomainSide> domain_sides;
    /// Geometric intersection numbers i(transversal_k, pants_k).
    std::vector<int> transversal_intersections;
    /// Each generator as a word in side pairings (letter k+1 is side k's pairing).
    std::vector<Word> generator_sides;
};

struct BlockDecomposition {
    std::string kind;  // "chain_sphere", "cone_torus" or "custom"
    int genus = 0;
    int cone_points = 0;
    std::vector<Block> blocks;
    std::vector<Gluing> gluing;
    Marking marking;

    int generator_count() const { return static_cast<int>(marking.generators.size()); }
    int curve_count() const { return static_cast<int>(gluing.size()); }

    /// Structural checks; throws qf::Error describing the first violation.
    void validate() const;
    FreeElimination free_group() const;

    /// Sphere with n >= 4 cone points cut along the nested curves c1...c(k+1).
    static BlockDecomposition chain_sphere(int n);
    /// Torus with one cone point, cut along one non-separating curve.
    static BlockDecomposition cone_torus();
};

using DecompositionPtr = std::shared_ptr<const BlockDecomposition>;

struct FnCoordinate {
    double length;
    double twist;
};
using FNCoordinates = std::vector<FnCoordinate>;

/// Images of the marking generators.
struct Holonomy {
    DecompositionPtr decomposition;
    std::vector<Isometry> images;

    Isometry image(const Word& w) const { return evaluate(w, images); }
    double relator_residual() const;
    /// Largest deviation of a peripheral rotation angle from its prescribed value.
    double peripheral_residual(const ConeAngles& angles) const;
};

// ---------------------------------------------------------------------------
// Blocks

struct SlotSpec {
    SlotKind kind;
    double value;  // cone angle or boundary length
};

struct BlockHolonomy {
    std::array<Isometry, 3> generators;  // product is the identity
    /// Separation along the imaginary axis between the first two slot centres.
    double separation = 0.0;
    /// Marked point on each boundary axis: foot of the seam to the next slot.
    std::array<std::optional<hyp::HypPoint>, 3> seam_feet;
};

/// The third slot must be a boundary. Throws ExistenceViolation if the trace
/// equation has no solution with positive separation.
BlockHolonomy build_block(const std::array<SlotSpec, 3>& slots);
BlockHolonomy build_cone_pants(double angle1, double angle2, double length);
BlockHolonomy build_pants(double length1, double length2, double length3);

// ---------------------------------------------------------------------------
// Surfaces

class ConeSurface {
public:
    /// Throws AssemblyError if the relator or a peripheral angle is off by more
    /// than 1e-9.
    static ConeSurface assemble(DecompositionPtr decomposition, FNCoordinates fn, ConeAngles angles);

    const BlockDecomposition& decomposition() const { return *holonomy_.decomposition; }
    const DecompositionPtr& decomposition_ptr() const { return holonomy_.decomposition; }
    const ConeAngles& angles() const { return angles_; }
    const FNCoordinates& fn() const { return fn_; }
    const Holonomy& holonomy() const { return holonomy_; }

private:
    ConeSurface(ConeAngles angles, FNCoordinates fn, Holonomy holonomy)
        : angles_(std::move(angles)), fn_(std::move(fn)), holonomy_(std::move(holonomy)) {}

    ConeAngles angles_;
    FNCoordinates fn_;
    Holonomy holonomy_;
};

/// Holonomy of the blocks glued with the given FN data; no invariant checks.
Holonomy assemble_holonomy(const DecompositionPtr& decomposition, const FNCoordinates& fn,
                           const ConeAngles& angles);

struct SpectrumEntry {
    std::string name;
    Word word;
    double length;
};
using LengthSpectrum = std::vector<SpectrumEntry>;

/// Pants curves, then transversals, then transversal * pants products.
std::vector<CurveClass> determining_system(const BlockDecomposition& d);

/// Throws ClassMismatch for elliptic or parabolic holonomy.
double geodesic_length(const Holonomy& h, const CurveClass& curve);
double geodesic_length(const ConeSurface& s, const CurveClass& curve);

LengthSpectrum length_spectrum(const Holonomy& h, const std::vector<CurveClass>& system);
LengthSpectrum length_spectrum(const ConeSurface& s, const std::vector<CurveClass>& system);
LengthSpectrum length_spectrum(const ConeSurface& s);
LengthSpectrum length_spectrum(const Holonomy& h);

/// Componentwise max |difference|; throws IncomparableError on mismatched systems.
double spectrum_distance(const LengthSpectrum& a, const LengthSpectrum& b);

/// Throws IncomparableError if the markings or angles differ.
bool equals_in_teich(const ConeSurface& s1, const ConeSurface& s2, double tol);
double teich_distance(const ConeSurface& s1, const ConeSurface& s2);
double teich_distance(const Holonomy& h1, const Holonomy& h2);

/// Σ(2π − θᵢ) − 2πχ(Σ); throws NoHyperbolicStructure if not positive.
double gauss_bonnet_area(const ConeAngles& angles, int genus);

/// Recover FN coordinates from a representation of the marked surface group.
/// Throws RecoveryError when a twist cannot be bracketed.
FNCoordinates holonomy_to_fn(const Holonomy& h, const ConeAngles& angles);
ConeSurface surface_from_holonomy(const Holonomy& h, const ConeAngles& angles);

// ---------------------------------------------------------------------------
// Fundamental domain

struct DomainSideGeometry {
    int paired;
    Word pairing;
    Isometry pairing_map;
};

/// Convex polygon, counterclockwise, vertices at developed cone points.
class FundamentalDomain {
public:
    static FundamentalDomain build(const Holonomy& h, const ConeAngles& angles);

    const std::vector<hyp::HypPoint>& vertices() const { return vertices_; }
    const std::vector<int>& vertex_cones() const { return cones_; }
    const std::vector<DomainSideGeometry>& sides() const { return sides_; }
    std::size_t size() const { return vertices_.size(); }
    /// Position of a side of the marking's domain recipe in this polygon.
    std::size_t side_index(int recipe_side) const { return side_index_[static_cast<std::size_t>(recipe_side)]; }

    hyp::GeodesicLine side_line(std::size_t k) const;
    /// Positive inside: min over sides of the sinh-distance to the side.
    double depth(const hyp::HypPoint& p) const;
    bool contains(const hyp::HypPoint& p, double tol = 0.0) const;
    std::vector<double> interior_angles() const;
    double area() const;  // by fan triangulation
    double diameter() const;
    /// Deterministic interior point; different seeds give different points.
    hyp::HypPoint interior_point(unsigned seed) const;
    /// Point on side k at fraction s from its first vertex.
    hyp::HypPoint side_point(std::size_t k, double s) const;

private:
    std::vector<hyp::HypPoint> vertices_;
    std::vector<int> cones_;
    std::vector<DomainSideGeometry> sides_;
    std::vector<std::size_t> side_index_;
};

struct MarginOptions {
    int max_word_length = -1;   // default: 2 * number of free generators
    double radius_factor = 3.0; // translates kept within this many domain diameters
};

/// Distance from the axis of ρ(γ) to the cone points' developed images.
double singular_margin(const ConeSurface& s, const CurveClass& curve, const MarginOptions& options = {});

}  // namespace qf::surface
