#pragma once

// Numerical inversion of the earthquake map on a fixed support, local
// rigidity and properness probes, and the inverse of the Mess map.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qf/ads.hpp"
#include "qf/earthquake.hpp"

namespace qf::solver {

using surface::ConeSurface;
using surface::CurveClass;
using surface::Holonomy;

/// w -> holonomy of E^r_w(s) for weights on a fixed list of curves. Pants
/// supports shift twists; anything else goes through one cocycle context.
/// Curves may repeat (for designed degenerate inputs); weights may be zero.
class EarthquakeMap {
public:
    EarthquakeMap(const ConeSurface& source, std::vector<CurveClass> support, unsigned seed = 0);

    Holonomy holonomy(const std::vector<double>& w) const;
    std::vector<double> spectrum(const std::vector<double>& w) const;
    std::size_t size() const { return support_.size(); }
    const std::vector<CurveClass>& support() const { return support_; }
    bool twist_path() const { return !context_; }

private:
    ConeSurface source_;
    std::vector<CurveClass> support_;
    std::vector<int> pants_;
    std::shared_ptr<const quake::CocycleContext> context_;
};

struct InversionProblem {
    std::shared_ptr<const ConeSurface> source;
    std::shared_ptr<const ConeSurface> target;
    std::vector<CurveClass> support;
    double upper = 50.0;  // weight bound
    double tol = 1e-9;    // spectrum distance
    std::optional<std::vector<double>> initial;
    int max_iterations = 100;
    unsigned seed = 0;
};

struct Iterate {
    int iteration;
    std::vector<double> weights;
    double residual;
    double damping;
};

struct SolverReport {
    std::vector<double> weights;
    double residual = 0.0;  // recomputed at the returned weights
    int iterations = 0;
    double condition = 0.0;
    double sigma_min = 0.0;
    bool converged = false;
    std::vector<Iterate> trace;
    std::vector<std::string> notices;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) on spectrum(E^r_w(source)) - spectrum(target),
/// central-difference Jacobian, projection to [0, upper], backtracking.
/// Throws NonConvergence (with the best report in the message) when the
/// residual stays above tol after the multi-start fallback.
SolverReport invert_earthquake(const InversionProblem& p);

struct RigidityReport {
    double sigma_min;
    double sigma_max;
    double condition;
    bool rank_deficient;
};

RigidityReport local_rigidity_check(const ConeSurface& s, const std::vector<CurveClass>& support,
                                    const std::vector<double>& weights, unsigned seed = 0);
RigidityReport local_rigidity_check(const ConeSurface& s, const quake::WeightedMulticurve& lambda, unsigned seed = 0);

struct ProbeRow {
    double scale;
    double length_before;
    double length_after;
    double mass;
    double bound;  // scale * lambda(gamma) - length_before
    bool computed = true;  // false when the deformed holonomy is out of double range
    bool holds() const { return !computed || length_after >= bound - 1e-9; }
};

struct ProbeReport {
    std::string curve;
    std::vector<ProbeRow> rows;
    bool inconclusive = false;  // no transverse curve
    bool linear_growth = true;  // every computed row clears the bound, which is linear in the scale
};

/// Lengths of gamma after E^r_{k lambda} for each scale k. Without gamma the
/// first catalogue curve crossing lambda is used.
ProbeReport properness_probe(const ConeSurface& s, const quake::WeightedMulticurve& direction,
                             const std::vector<double>& scales, const std::optional<CurveClass>& gamma = std::nullopt);

struct MessInverse {
    SolverReport inversion;
    ads::BendData bend;
    ads::GhmcData ghmc;
    double left_residual;   // left_right_metrics(ghmc).first against mu_l
    double right_residual;  // .second against mu_r
};

/// lambda = invert_earthquake(mu_l -> mu_r), h+ = E^r_{lambda/2}(mu_l), then from_bending(h+, lambda/2).
MessInverse mess_inverse(const ConeSurface& mu_l, const ConeSurface& mu_r, const std::vector<CurveClass>& support,
                         double tol = 1e-9, unsigned seed = 0);

}  // namespace qf::solver
