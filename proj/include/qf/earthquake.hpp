#pragma once

// Right and left earthquakes along weighted multicurves, computed two ways:
// shifting Fenchel-Nielsen twists, and composing translations along the
// lifted leaves (the earthquake cocycle).

#include <optional>
#include <string>
#include <vector>

#include "qf/surface.hpp"

namespace qf::quake {

using hyp::HypPoint;
using hyp::Isometry;
using surface::ConeSurface;
using surface::CurveClass;
using surface::Holonomy;

struct Component {
    CurveClass curve;
    double weight;
    /// Index of the pants curve carrying this component, if it is one.
    std::optional<int> pants_index;
};

class WeightedMulticurve {
public:
    WeightedMulticurve() = default;

    /// Validates against the decomposition: simple, non-peripheral,
    /// pairwise disjoint and non-isotopic components with positive weights.
    /// Weights below 1e-12 are dropped with a notice; negative weights throw.
    static WeightedMulticurve make(const surface::BlockDecomposition& d, std::vector<Component> components);

    /// Convenience: weights on pants curves, by index.
    static WeightedMulticurve on_pants(const surface::BlockDecomposition& d,
                                       const std::vector<std::pair<int, double>>& weights);
    /// Convenience: one curve from the marking catalogue ("pants0", "transversal1", ...).
    static WeightedMulticurve single(const surface::BlockDecomposition& d, const std::string& name, double weight);

    const std::vector<Component>& components() const { return components_; }
    bool empty() const { return components_.empty(); }
    bool pants_supported() const;
    WeightedMulticurve scaled(double k) const;
    WeightedMulticurve with_weights(const std::vector<double>& w) const;
    std::vector<double> weights() const;

private:
    std::vector<Component> components_;
};

/// Looks a curve up in the marking catalogue (pants curves and transversals)
/// up to conjugacy and inversion.
std::optional<CurveClass> find_curve(const surface::BlockDecomposition& d, const std::string& name);
std::optional<int> pants_index_of(const surface::BlockDecomposition& d, const Word& word);

/// Combinatorial intersection number between two catalogue curves, when the
/// decomposition template knows it.
std::optional<int> table_intersection(const surface::BlockDecomposition& d, const Word& a, const Word& b);

enum class Side { Right, Left };

// ---------------------------------------------------------------------------
// Lifted leaves inside the fundamental domain

struct Chord {
    hyp::GeodesicLine line;  // the lift containing this chord, oriented along the curve
    HypPoint entry;
    HypPoint exit;
    std::size_t entry_side;
    std::size_t exit_side;
    double length;
};

struct TracedCurve {
    CurveClass curve;
    double length;  // translation length of the holonomy
    std::vector<Chord> chords;
    Word traversal;  // side-pairing words met along the way, as a marking word
};

/// Follow one lift of the closed geodesic through the domain until it closes.
/// Throws qf::Error if the trace does not close on the curve's class.
TracedCurve trace_curve(const Holonomy& h, const surface::FundamentalDomain& dom, const CurveClass& curve);

/// Number of transverse intersections between the traced geodesics.
int geometric_intersection(const TracedCurve& a, const TracedCurve& b);

// ---------------------------------------------------------------------------
// Cocycle

struct CrossingFactor {
    hyp::GeodesicLine leaf;  // oriented so the path crosses from its left to its right
    double weight;
    double at;  // distance along the path
};

/// Everything the cocycle needs that does not depend on the weights:
/// domain, traced leaves, base point. Build once per surface and support.
class CocycleContext {
public:
    CocycleContext(const Holonomy& h, const surface::ConeAngles& angles, const std::vector<CurveClass>& support,
                   unsigned seed = 0);

    const Holonomy& holonomy() const { return holonomy_; }
    const surface::FundamentalDomain& domain() const { return domain_; }
    const std::vector<TracedCurve>& leaves() const { return leaves_; }
    const HypPoint& basepoint() const { return basepoint_; }

    /// Leaves crossed by the segment [x, y] (both in the domain), in order.
    /// Returns nullopt when the segment meets a leaf tangentially, at an
    /// endpoint, or two crossings tie.
    std::optional<std::vector<CrossingFactor>> crossings(const HypPoint& x, const HypPoint& y,
                                                         const std::vector<double>& weights) const;

    /// beta(x, y) for x, y in the domain.
    Isometry beta(const HypPoint& x, const HypPoint& y, const std::vector<double>& weights, Side side) const;

    /// Deformed images of the marking generators: beta(x0, g x0) h(g).
    Holonomy deform(const std::vector<double>& weights, Side side) const;

    /// Deformed side pairings, indexed like the domain's sides.
    std::vector<Isometry> deformed_pairings(const std::vector<double>& weights, Side side) const;

private:
    Holonomy holonomy_;
    surface::FundamentalDomain domain_;
    std::vector<TracedCurve> leaves_;
    HypPoint basepoint_{0.0, 1.0};
    std::vector<double> side_params_;  // where each side's path point sits
};

Isometry leaf_factor(const CrossingFactor& c, Side side);

struct DeformedHolonomy {
    surface::FNCoordinates base_fn;
    surface::ConeAngles angles;
    Holonomy holonomy;
    double relator_residual = 0.0;
    double peripheral_residual = 0.0;
};

// ---------------------------------------------------------------------------
// Earthquakes

struct EarthquakeOptions {
    bool strict = false;  // twist path only; no cocycle fallback
    unsigned seed = 0;    // basepoint choice for the cocycle
};

/// FN twist of each pants curve shifted by -weight (right) or +weight (left).
/// Non-pants components fall back to the cocycle unless strict.
ConeSurface right_earthquake_twist(const ConeSurface& s, const WeightedMulticurve& lambda,
                                   const EarthquakeOptions& options = {});
ConeSurface left_earthquake_twist(const ConeSurface& s, const WeightedMulticurve& lambda,
                                  const EarthquakeOptions& options = {});

DeformedHolonomy right_earthquake_cocycle(const ConeSurface& s, const WeightedMulticurve& lambda,
                                          const EarthquakeOptions& options = {});
DeformedHolonomy left_earthquake_cocycle(const ConeSurface& s, const WeightedMulticurve& lambda,
                                         const EarthquakeOptions& options = {});

/// Twist path when every component is a pants curve, cocycle + FN recovery otherwise.
ConeSurface earthquake(const ConeSurface& s, const WeightedMulticurve& lambda, Side side,
                       const EarthquakeOptions& options = {});
inline ConeSurface right_earthquake(const ConeSurface& s, const WeightedMulticurve& lambda,
                                    const EarthquakeOptions& options = {}) {
    return earthquake(s, lambda, Side::Right, options);
}
inline ConeSurface left_earthquake(const ConeSurface& s, const WeightedMulticurve& lambda,
                                   const EarthquakeOptions& options = {}) {
    return earthquake(s, lambda, Side::Left, options);
}

struct EquivarianceReport {
    /// Entrywise, relative to the largest entry of beta (at least 1).
    double max_residual = 0.0;
    int samples = 0;
    /// Spectrum distance between deformations built from two basepoints.
    double basepoint_spread = 0.0;
    bool passed = true;
};

/// beta(g x, g y) against h(g) beta(x, y) h(g)^-1 over marking generators
/// and sampled pairs, with the left side evaluated on lifts in g(D).
EquivarianceReport equivariance_check(const ConeSurface& s, const WeightedMulticurve& lambda, int pairs = 8,
                                      unsigned seed = 0);

struct LengthInequality {
    double before;
    double after;
    double mass;
    double slack() const { return before + after - mass; }
};

/// Length of gamma before and after the right earthquake, and lambda(gamma).
LengthInequality length_inequality_check(const ConeSurface& s, const WeightedMulticurve& lambda,
                                         const CurveClass& gamma);

/// lambda(gamma) = sum of w_i i(gamma, c_i), intersections counted on the traced geodesics.
double intersection_mass(const ConeSurface& s, const WeightedMulticurve& lambda, const CurveClass& gamma);

}  // namespace qf::quake
