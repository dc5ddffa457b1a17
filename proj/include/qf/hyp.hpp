#pragma once

// Upper half-plane model of the hyperbolic plane and its orientation
// preserving isometry group PSL(2,R).

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <variant>

namespace qf::hyp {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kParabolicTol = 1e-9;
inline constexpr double kDetTol = 1e-12;

class HypPoint {
public:
    /// Throws std::invalid_argument unless y > 0.
    HypPoint(double x, double y);
    explicit HypPoint(Complex z) : HypPoint(z.real(), z.imag()) {}

    double x() const { return x_; }
    double y() const { return y_; }
    Complex z() const { return {x_, y_}; }

    static HypPoint i() { return {0.0, 1.0}; }

private:
    double x_;
    double y_;
};

/// A point of R ∪ {∞}.
class BoundaryPoint {
public:
    BoundaryPoint(double x) : x_(x), infinite_(false) {}  // NOLINT: implicit by intent
    static BoundaryPoint infinity() {
        BoundaryPoint p(0.0);
        p.infinite_ = true;
        return p;
    }

    bool is_infinite() const { return infinite_; }
    /// Finite coordinate; meaningless for ∞.
    double value() const { return x_; }

    bool approx_equal(const BoundaryPoint& other, double tol) const;

private:
    double x_;
    bool infinite_;
};

/// Oriented complete geodesic, given by its tail and head on the boundary.
class GeodesicLine {
public:
    /// Throws std::invalid_argument if the endpoints coincide.
    GeodesicLine(BoundaryPoint from, BoundaryPoint to);

    const BoundaryPoint& from() const { return from_; }
    const BoundaryPoint& to() const { return to_; }
    GeodesicLine reversed() const { return {to_, from_}; }

    /// Unoriented normal form: finite endpoints ascending, ∞ last.
    std::array<BoundaryPoint, 2> canonical() const;

    /// Same oriented line, endpoints compared in the chordal metric.
    bool approx_equal(const GeodesicLine& other, double tol) const;
    /// Same set, ignoring orientation.
    bool same_set(const GeodesicLine& other, double tol) const;

    static GeodesicLine imaginary_axis() { return {BoundaryPoint(0.0), BoundaryPoint::infinity()}; }

private:
    BoundaryPoint from_;
    BoundaryPoint to_;
};

/// Element of PSL(2,R) stored as a unimodular matrix with the first nonzero
/// entry of (a, b, c, d) positive.
class Isometry {
public:
    Isometry() = default;  // identity

    /// Renormalizes by 1/sqrt(det). Throws qf::Error if det <= 0.
    static Isometry from_matrix(double a, double b, double c, double d);

    double a() const { return m_[0]; }
    double b() const { return m_[1]; }
    double c() const { return m_[2]; }
    double d() const { return m_[3]; }
    const std::array<double, 4>& entries() const { return m_; }

    double trace() const { return m_[0] + m_[3]; }
    double abs_trace() const;
    double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

    Isometry inverse() const;
    Isometry operator*(const Isometry& g) const;

    HypPoint apply(const HypPoint& p) const;
    BoundaryPoint apply(const BoundaryPoint& p) const;
    GeodesicLine apply(const GeodesicLine& g) const;

    /// Entrywise distance to g, minimized over the sign ambiguity.
    double distance(const Isometry& g) const;
    bool approx_equal(const Isometry& g, double tol) const { return distance(g) <= tol; }
    bool is_identity(double tol = 1e-12) const { return approx_equal(Isometry(), tol); }

    static Isometry identity() { return {}; }

private:
    static Isometry with_sign(std::array<double, 4> entries);
    std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

struct IdentityClass {};
struct Elliptic {
    double angle;  // in (0, 2π), counterclockwise at the fixed point
};
struct Parabolic {};
struct Hyperbolic {
    double length;
};
using Classification = std::variant<IdentityClass, Elliptic, Parabolic, Hyperbolic>;

Isometry compose(const Isometry& f, const Isometry& g);
/// f x f^-1, keeping the trace of x exact (only the traceless part is moved).
Isometry conjugate(const Isometry& f, const Isometry& x);
Classification classify(const Isometry& f, double parabolic_tol = kParabolicTol);
std::string describe(const Classification& c);

bool is_hyperbolic(const Isometry& f, double parabolic_tol = kParabolicTol);
bool is_elliptic(const Isometry& f, double parabolic_tol = kParabolicTol);

/// Throws ClassMismatch unless f is hyperbolic.
double translation_length(const Isometry& f);
/// Throws ClassMismatch unless f is elliptic.
double rotation_angle(const Isometry& f);

Isometry rotation_about(const HypPoint& p, double angle);
/// Hyperbolic with axis g; positive length moves points from g.from() toward g.to().
Isometry translation_along(const GeodesicLine& g, double length);
/// Orientation preserving map sending the imaginary axis (0 → ∞) onto g,
/// with i going to the canonical midpoint of g.
Isometry standard_frame(const GeodesicLine& g);

double dist(const HypPoint& p, const HypPoint& q);
double dist_to_geodesic(const HypPoint& p, const GeodesicLine& g);

/// Oriented from the repelling to the attracting fixed point.
GeodesicLine axis(const Isometry& f);
HypPoint fixed_point(const Isometry& f);

/// Geodesic through p and q, oriented from p toward q.
GeodesicLine line_through(const HypPoint& p, const HypPoint& q);
/// Point at fraction s of the way from p to q.
HypPoint geodesic_point(const HypPoint& p, const HypPoint& q, double s);

/// sinh of the signed distance from p to g; positive on the left of g.
double side_of(const GeodesicLine& g, const HypPoint& p);

HypPoint foot_of_perpendicular(const GeodesicLine& g, const HypPoint& p);
/// Foot on `on` of the common perpendicular with an ultraparallel `other`.
/// Throws qf::Error if the lines meet or are asymptotic.
HypPoint common_perpendicular_foot(const GeodesicLine& on, const GeodesicLine& other);

/// Signed position of p along g, measured from the frame midpoint of g.
double position_along(const GeodesicLine& g, const HypPoint& p);

struct Crossing {
    double distance;     // from the segment start
    bool left_to_right;  // the segment passes from the left of the line to its right
    HypPoint point;
};

/// Transverse crossing of the geodesic segment [p, q] with g, if any.
std::optional<Crossing> segment_crossing(const HypPoint& p, const HypPoint& q, const GeodesicLine& g);

/// Angle at `vertex` swept counterclockwise from the direction of `from` to
/// the direction of `to`, in [0, 2π).
double angle_between(const HypPoint& vertex, const HypPoint& from, const HypPoint& to);

}  // namespace qf::hyp
