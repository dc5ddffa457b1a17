#pragma once

// Anti-de Sitter side: holonomy pairs of GHMC manifolds with particles,
// reconstruction from bending data, the earthquake diagram, and the local
// formulas for surfaces in AdS3.

#include <array>
#include <utility>
#include <vector>

#include "qf/earthquake.hpp"
#include "qf/surface.hpp"

namespace qf::ads {

using hyp::HypPoint;
using hyp::Isometry;
using quake::WeightedMulticurve;
using surface::ConeAngles;
using surface::ConeSurface;
using surface::Holonomy;

struct GhmcData {
    Holonomy rho_l;
    Holonomy rho_r;
    ConeAngles angles;

    /// Relator within 1e-9 in both factors, and every peripheral loop a
    /// rotation by its cone angle in both. Throws qf::Error otherwise.
    void validate() const;
    double relator_residual() const;
    double peripheral_residual() const;
};

struct BendData {
    ConeSurface h_plus;
    WeightedMulticurve lambda_plus;
};

/// rho_l(g) = beta_l(x0, g x0) rho_+(g), rho_r(g) = beta_r(x0, g x0) rho_+(g).
GhmcData from_bending(const BendData& b, unsigned seed = 0);

/// The hyperbolic metrics with holonomies rho_l and rho_r.
std::pair<ConeSurface, ConeSurface> left_right_metrics(const GhmcData& g);

using surface::holonomy_to_fn;

struct DiagramReport {
    double left = 0.0;     // mu_l against E^l_{lambda+}(h+)
    double right = 0.0;    // mu_r against E^r_{lambda+}(h+)
    double doubled = 0.0;  // mu_r against E^r_{2 lambda+}(mu_l)
    bool passed(double tol = 1e-7) const { return left <= tol && right <= tol && doubled <= tol; }
};

DiagramReport diagram_check(const BendData& b, unsigned seed = 0);

std::pair<Isometry, Isometry> pure_rotation_pair(double angle, const HypPoint& centre_l, const HypPoint& centre_r);
/// Common rotation angle of both factors; throws ClassMismatch if either is
/// not elliptic or the angles differ by more than tol.
double decompose_rotation_pair(const std::pair<Isometry, Isometry>& pair, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Surfaces in AdS3

using Mat2 = std::array<double, 4>;  // row-major 2x2

Mat2 mat_mul(const Mat2& a, const Mat2& b);
Mat2 mat_transpose(const Mat2& a);
Mat2 mat_inverse(const Mat2& a);
double mat_det(const Mat2& a);

/// Square grid of samples with spacing h; index (i, j) is u = u0 + i h, v = v0 + j h.
struct EmbeddingSample {
    int n = 0;
    double h = 0.0;
    double u0 = 0.0;
    double v0 = 0.0;
    std::vector<Mat2> I;  // first fundamental form
    std::vector<Mat2> B;  // shape operator
    std::vector<Mat2> J;  // complex structure of I

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j); }
};

struct EmbeddingCheck {
    double min_det_I;
    double self_adjoint;  // max |I B - (I B)^T|
    double complex_square;  // max |J^2 + E|
    double orthogonal;      // max |J^T I J - I|
    double gauss;           // max |det B + 1 + K_I|, K_I by finite differences
    bool valid(double tol = 1e-10) const {
        return min_det_I > 0.0 && self_adjoint <= tol && complex_square <= 1e-12 && orthogonal <= tol;
    }
};

EmbeddingCheck check_embedding(const EmbeddingSample& e);

/// Parameters of the spacelike graph used to produce samples: the surface is
/// the normalization of (u, v, 1, eps * (a sin u cos v + b u v + c (u^2 - v^2))).
struct GraphSurface {
    double eps = 0.3;
    double a = 1.0;
    double b = 0.5;
    double c = 0.25;
};

/// Samples of I, B, J computed exactly (second-order automatic differentiation).
EmbeddingSample sample_graph(const GraphSurface& g, double u0, double v0, double h, int n);

using MetricSample = std::vector<Mat2>;

/// I((cos t E + sin t B) ., (cos t E + sin t B) .) at every sample.
/// Throws DegenerateSample at a focal point.
MetricSample normal_flow_metric(const EmbeddingSample& e, double t);

/// Largest |K + 1| over the sectional curvatures of the coordinate planes of
/// -dt^2 + g_t, by central differences on the grid, over interior samples.
double flow_curvature_check(const EmbeddingSample& e, double t);

/// Gaussian curvature of a sampled metric by the Brioschi formula; interior
/// samples only (NaN on the border ring of width 1).
std::vector<double> gaussian_curvature(const MetricSample& m, int n, double h);

/// Pullbacks by E + JB and E - JB. Throws DegenerateSample where either is singular.
std::pair<MetricSample, MetricSample> mu_from_embedding(const EmbeddingSample& e);

struct JacobiReport {
    double deviation;  // sup over s of |numeric J(s) - closed form|
    double min_norm;   // min over s in (0, pi/2) of |J(s)|
};

/// Jacobi field along a unit timelike geodesic of AdS3 with initial value v0
/// and derivative v1 (orthogonal to the geodesic), against the numerically
/// integrated variation of geodesics in the quadric model, on [0, s].
JacobiReport jacobi_check(const std::array<double, 2>& v0, const std::array<double, 2>& v1, double s);

}  // namespace qf::ads
