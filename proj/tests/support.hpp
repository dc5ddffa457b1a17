#pragma once

// Shared fixtures and hand-rolled generators for the test binaries.

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "qf/earthquake.hpp"
#include "qf/surface.hpp"

namespace qft {

using qf::surface::BlockDecomposition;
using qf::surface::ConeAngles;
using qf::surface::ConeSurface;
using qf::surface::FNCoordinates;

inline constexpr double kQuarter = std::numbers::pi / 2.0;

class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    bool coin() { return index(2) == 1; }
    unsigned seed() { return static_cast<unsigned>(rng_()); }

    // Upper half-plane point with moderate coordinates.
    qf::hyp::HypPoint point() { return {uniform(-2.0, 2.0), std::exp(uniform(-1.5, 1.5))}; }
    qf::hyp::Isometry isometry() {
        for (;;) {
            const double a = uniform(-2, 2), b = uniform(-2, 2), c = uniform(-2, 2), d = uniform(-2, 2);
            if (a * d - b * c > 0.2) return qf::hyp::Isometry::from_matrix(a, b, c, d);
        }
    }
    FNCoordinates fn(int curves, double lmin = 0.5, double lmax = 3.0, double tmax = 2.0) {
        FNCoordinates out;
        for (int k = 0; k < curves; ++k) out.push_back({uniform(lmin, lmax), uniform(-tmax, tmax)});
        return out;
    }

private:
    std::mt19937 rng_;
};

inline std::shared_ptr<const BlockDecomposition> sphere_decomposition(int n = 4) {
    return std::make_shared<const BlockDecomposition>(BlockDecomposition::chain_sphere(n));
}

inline std::shared_ptr<const BlockDecomposition> torus_decomposition() {
    return std::make_shared<const BlockDecomposition>(BlockDecomposition::cone_torus());
}

inline ConeSurface four_cone_sphere(double length = 1.0, double twist = 0.0) {
    return ConeSurface::assemble(sphere_decomposition(), {{length, twist}},
                                 ConeAngles({kQuarter, kQuarter, kQuarter, kQuarter}));
}

inline ConeSurface one_cone_torus(double length = 1.5, double twist = 0.3) {
    return ConeSurface::assemble(torus_decomposition(), {{length, twist}}, ConeAngles({kQuarter}));
}

inline ConeSurface five_cone_sphere() {
    return ConeSurface::assemble(sphere_decomposition(5), {{1.2, 0.2}, {1.4, -0.1}},
                                 ConeAngles({1.2, kQuarter, 2.0, 1.0, kQuarter}));
}

/// Same decomposition and angles as s, new FN data.
inline ConeSurface with_fn(const ConeSurface& s, FNCoordinates fn) {
    return ConeSurface::assemble(s.decomposition_ptr(), std::move(fn), s.angles());
}

inline qf::quake::WeightedMulticurve single(const ConeSurface& s, const char* name, double w) {
    return qf::quake::WeightedMulticurve::single(s.decomposition(), name, w);
}

}  // namespace qft
