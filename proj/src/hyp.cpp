#include "qf/hyp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qf/error.hpp"

namespace qf::hyp {

namespace {

// Position on the boundary circle, ∞ at π.
double chordal_angle(const BoundaryPoint& p) {
    return p.is_infinite() ? kPi : 2.0 * std::atan(p.value());
}

double angle_gap(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return std::min(d, 2.0 * kPi - d);
}

// Direction at i of the geodesic from i to w, via the Cayley transform.
double direction_at_i(Complex w) {
    Complex zeta = (w - Complex(0, 1)) / (w + Complex(0, 1));
    return std::arg(zeta);
}

}  // namespace

HypPoint::HypPoint(double x, double y) : x_(x), y_(y) {
    if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
        throw std::invalid_argument("HypPoint requires finite x and y > 0");
    }
}

bool BoundaryPoint::approx_equal(const BoundaryPoint& other, double tol) const {
    if (infinite_ && other.infinite_) return true;
    return angle_gap(chordal_angle(*this), chordal_angle(other)) <= tol;
}

GeodesicLine::GeodesicLine(BoundaryPoint from, BoundaryPoint to) : from_(from), to_(to) {
    if (from.is_infinite() && to.is_infinite()) {
        throw std::invalid_argument("geodesic endpoints must be distinct");
    }
    if (!from.is_infinite() && !to.is_infinite() && from.value() == to.value()) {
        throw std::invalid_argument("geodesic endpoints must be distinct");
    }
}

std::array<BoundaryPoint, 2> GeodesicLine::canonical() const {
    if (from_.is_infinite()) return {to_, from_};
    if (to_.is_infinite()) return {from_, to_};
    if (from_.value() <= to_.value()) return {from_, to_};
    return {to_, from_};
}

bool GeodesicLine::approx_equal(const GeodesicLine& other, double tol) const {
    return from_.approx_equal(other.from_, tol) && to_.approx_equal(other.to_, tol);
}

bool GeodesicLine::same_set(const GeodesicLine& other, double tol) const {
    return approx_equal(other, tol) || approx_equal(other.reversed(), tol);
}

Isometry Isometry::from_matrix(double a, double b, double c, double d) {
    double det = a * d - b * c;
    if (!(det > 0.0) || !std::isfinite(det)) {
        throw Error("isometry matrix must have positive finite determinant");
    }
    double s = 1.0 / std::sqrt(det);
    return with_sign({a * s, b * s, c * s, d * s});
}

Isometry Isometry::with_sign(std::array<double, 4> entries) {
    Isometry m;
    m.m_ = entries;
    for (double e : m.m_) {
        if (e != 0.0) {
            if (e < 0.0) {
                for (double& x : m.m_) x = -x;
            }
            break;
        }
    }
    return m;
}

double Isometry::abs_trace() const { return std::abs(trace()); }

Isometry Isometry::inverse() const { return with_sign({m_[3], -m_[1], -m_[2], m_[0]}); }

// Products of unimodular factors are unimodular up to round-off; dividing by a
// recomputed determinant would cost digits when entries are large.
Isometry Isometry::operator*(const Isometry& g) const {
    const auto& n = g.m_;
    const double a = m_[0] * n[0] + m_[1] * n[2], b = m_[0] * n[1] + m_[1] * n[3];
    const double c = m_[2] * n[0] + m_[3] * n[2], d = m_[2] * n[1] + m_[3] * n[3];
    const double scale = a * a + b * b + c * c + d * d;
    if (!std::isfinite(scale)) throw Error("isometry product overflowed");
    if (std::abs(a * d - b * c - 1.0) > 1e-6 * std::max(1.0, scale)) return from_matrix(a, b, c, d);
    return with_sign({a, b, c, d});
}

HypPoint Isometry::apply(const HypPoint& p) const {
    Complex z = p.z();
    Complex den = m_[2] * z + m_[3];
    Complex w = (m_[0] * z + m_[1]) / den;
    // Imaginary part from det * Im z / |cz + d|^2 keeps it positive.
    double y = det() * p.y() / std::norm(den);
    return {w.real(), y};
}

BoundaryPoint Isometry::apply(const BoundaryPoint& p) const {
    if (p.is_infinite()) {
        if (m_[2] == 0.0) return BoundaryPoint::infinity();
        return m_[0] / m_[2];
    }
    double den = m_[2] * p.value() + m_[3];
    if (den == 0.0) return BoundaryPoint::infinity();
    return (m_[0] * p.value() + m_[1]) / den;
}

GeodesicLine Isometry::apply(const GeodesicLine& g) const { return {apply(g.from()), apply(g.to())}; }

double Isometry::distance(const Isometry& g) const {
    double plus = 0.0;
    double minus = 0.0;
    for (int k = 0; k < 4; ++k) {
        plus = std::max(plus, std::abs(m_[k] - g.m_[k]));
        minus = std::max(minus, std::abs(m_[k] + g.m_[k]));
    }
    return std::min(plus, minus);
}

Isometry compose(const Isometry& f, const Isometry& g) { return f * g; }

Classification classify(const Isometry& f, double parabolic_tol) {
    if (f.is_identity()) return IdentityClass{};
    double t = f.abs_trace();
    if (t < 2.0 - parabolic_tol) return Elliptic{rotation_angle(f)};
    if (t > 2.0 + parabolic_tol) return Hyperbolic{2.0 * std::acosh(t / 2.0)};
    return Parabolic{};
}

std::string describe(const Classification& c) {
    struct V {
        std::string operator()(const IdentityClass&) const { return "identity"; }
        std::string operator()(const Elliptic& e) const { return "elliptic(" + std::to_string(e.angle) + ")"; }
        std::string operator()(const Parabolic&) const { return "parabolic"; }
        std::string operator()(const Hyperbolic& h) const { return "hyperbolic(" + std::to_string(h.length) + ")"; }
    };
    return std::visit(V{}, c);
}

bool is_hyperbolic(const Isometry& f, double parabolic_tol) { return f.abs_trace() > 2.0 + parabolic_tol; }

bool is_elliptic(const Isometry& f, double parabolic_tol) {
    return f.abs_trace() < 2.0 - parabolic_tol && !f.is_identity();
}

double translation_length(const Isometry& f) {
    if (!is_hyperbolic(f)) {
        throw ClassMismatch("translation length of a non-hyperbolic isometry (|tr| = " +
                            std::to_string(f.abs_trace()) + ")");
    }
    return 2.0 * std::acosh(f.abs_trace() / 2.0);
}

double rotation_angle(const Isometry& f) {
    HypPoint p = fixed_point(f);
    // f'(p) = 1 / (c p + d)^2; its argument is the rotation angle.
    Complex den = f.c() * p.z() + f.d();
    double angle = -2.0 * std::arg(den);
    angle = std::fmod(angle, 2.0 * kPi);
    if (angle < 0.0) angle += 2.0 * kPi;
    return angle;
}

Isometry rotation_about(const HypPoint& p, double angle) {
    double c = std::cos(angle / 2.0);
    double s = std::sin(angle / 2.0);
    Isometry r = Isometry::from_matrix(c, s, -s, c);
    double sy = std::sqrt(p.y());
    Isometry to_p = Isometry::from_matrix(sy, p.x() / sy, 0.0, 1.0 / sy);
    return to_p * r * to_p.inverse();
}

Isometry conjugate(const Isometry& f, const Isometry& x) {
    const double half = 0.5 * x.trace();
    const double n11 = 0.5 * (x.a() - x.d());
    const double n12 = x.b();
    const double n21 = x.c();
    // f N f^-1 with f^-1 = (d, -b; -c, a)
    const double fa = f.a(), fb = f.b(), fc = f.c(), fd = f.d();
    const double p11 = fa * n11 + fb * n21, p12 = fa * n12 - fb * n11;
    const double p21 = fc * n11 + fd * n21, p22 = fc * n12 - fd * n11;
    const double m11 = p11 * fd - p12 * fc;
    const double m12 = -p11 * fb + p12 * fa;
    const double m21 = p21 * fd - p22 * fc;
    // Restore det(N) lost to cancellation so that det = 1 with the trace untouched.
    const double want = half * half - 1.0;
    const double have = m11 * m11 + m12 * m21;
    double s = 1.0;
    if (std::abs(want) > 1e-12 && want * have > 0.0) s = std::sqrt(want / have);
    return Isometry::from_matrix(half + s * m11, s * m12, s * m21, half - s * m11);
}

Isometry standard_frame(const GeodesicLine& g) {
    const auto& u = g.from();
    const auto& v = g.to();
    if (u.is_infinite()) return Isometry::from_matrix(v.value(), -1.0, 1.0, 0.0);
    if (v.is_infinite()) return Isometry::from_matrix(1.0, u.value(), 0.0, 1.0);
    if (v.value() > u.value()) return Isometry::from_matrix(v.value(), u.value(), 1.0, 1.0);
    return Isometry::from_matrix(v.value(), -u.value(), 1.0, -1.0);
}

Isometry translation_along(const GeodesicLine& g, double length) {
    Isometry frame = standard_frame(g);
    double e = std::exp(length / 2.0);
    return frame * Isometry::from_matrix(e, 0.0, 0.0, 1.0 / e) * frame.inverse();
}

double dist(const HypPoint& p, const HypPoint& q) {
    return 2.0 * std::asinh(std::abs(p.z() - q.z()) / (2.0 * std::sqrt(p.y() * q.y())));
}

double dist_to_geodesic(const HypPoint& p, const GeodesicLine& g) {
    return std::asinh(std::abs(side_of(g, p)));
}

double side_of(const GeodesicLine& g, const HypPoint& p) {
    HypPoint w = standard_frame(g).inverse().apply(p);
    return -w.x() / w.y();
}

GeodesicLine axis(const Isometry& f) {
    if (!is_hyperbolic(f)) throw ClassMismatch("axis of a non-hyperbolic isometry");
    double a = f.a(), b = f.b(), c = f.c(), d = f.d();
    BoundaryPoint p1(0.0), p2(0.0);
    if (c == 0.0) {
        p1 = BoundaryPoint(b / (d - a));
        p2 = BoundaryPoint::infinity();
    } else {
        double tr = a + d;
        double disc = std::sqrt(tr * tr - 4.0);
        double e = d - a;
        double q = -0.5 * (e + (e >= 0.0 ? disc : -disc));
        // roots of c z^2 + e z - b = 0
        double r1 = q / c;
        double r2 = (q != 0.0) ? -b / q : (-e / c - r1);
        p1 = BoundaryPoint(r1);
        p2 = BoundaryPoint(r2);
    }
    // Attracting fixed point has |f'| < 1.
    auto derivative_abs = [&](const BoundaryPoint& z) {
        if (z.is_infinite()) {
            // f(z) ~ (a/d) z near ∞ when c = 0: ∞ attracts iff |a| > |d|.
            return std::abs(d / a);
        }
        double den = c * z.value() + d;
        return 1.0 / (den * den);
    };
    if (derivative_abs(p1) < 1.0) return {p2, p1};
    return {p1, p2};
}

HypPoint fixed_point(const Isometry& f) {
    if (!is_elliptic(f)) throw ClassMismatch("fixed point of a non-elliptic isometry");
    double tr = f.trace();
    double root = std::sqrt(std::max(0.0, 4.0 - tr * tr));
    double c = f.c();
    double x = (f.a() - f.d()) / (2.0 * c);
    double y = root / (2.0 * std::abs(c));
    return {x, y};
}

GeodesicLine line_through(const HypPoint& p, const HypPoint& q) {
    double x1 = p.x(), x2 = q.x();
    if (x1 == x2) {
        if (q.y() > p.y()) return {BoundaryPoint(x1), BoundaryPoint::infinity()};
        return {BoundaryPoint::infinity(), BoundaryPoint(x1)};
    }
    // Centre relative to x1; the endpoints multiply to -y1^2 in that frame,
    // which gives the small one without cancellation.
    double dx = x2 - x1;
    double y1 = p.y(), y2 = q.y();
    double c = ((dx * dx + y2 * y2) - y1 * y1) / (2.0 * dx);
    double big = c + std::copysign(std::hypot(c, y1), c);
    double small = -y1 * y1 / big;
    double lo = x1 + std::min(big, small);
    double hi = x1 + std::max(big, small);
    if (x2 > x1) return {BoundaryPoint(lo), BoundaryPoint(hi)};
    return {BoundaryPoint(hi), BoundaryPoint(lo)};
}

HypPoint geodesic_point(const HypPoint& p, const HypPoint& q, double s) {
    GeodesicLine g = line_through(p, q);
    Isometry frame = standard_frame(g);
    Isometry inv = frame.inverse();
    HypPoint wp = inv.apply(p);
    HypPoint wq = inv.apply(q);
    double lp = std::log(wp.y());
    double lq = std::log(wq.y());
    return frame.apply(HypPoint(0.0, std::exp(lp + s * (lq - lp))));
}

HypPoint foot_of_perpendicular(const GeodesicLine& g, const HypPoint& p) {
    Isometry frame = standard_frame(g);
    HypPoint w = frame.inverse().apply(p);
    return frame.apply(HypPoint(0.0, std::abs(w.z())));
}

HypPoint common_perpendicular_foot(const GeodesicLine& on, const GeodesicLine& other) {
    Isometry frame = standard_frame(on);
    GeodesicLine o = frame.inverse().apply(other);
    if (o.from().is_infinite() || o.to().is_infinite()) {
        throw Error("common perpendicular: lines are asymptotic");
    }
    double prod = o.from().value() * o.to().value();
    if (!(prod > 0.0)) throw Error("common perpendicular: lines intersect or are asymptotic");
    return frame.apply(HypPoint(0.0, std::sqrt(prod)));
}

double position_along(const GeodesicLine& g, const HypPoint& p) {
    HypPoint w = standard_frame(g).inverse().apply(p);
    return std::log(std::abs(w.z()));
}

std::optional<Crossing> segment_crossing(const HypPoint& p, const HypPoint& q, const GeodesicLine& g) {
    Isometry frame = standard_frame(g);
    Isometry inv = frame.inverse();
    HypPoint w1 = inv.apply(p);
    HypPoint w2 = inv.apply(q);
    double x1 = w1.x(), x2 = w2.x();
    if (!((x1 < 0.0 && x2 > 0.0) || (x1 > 0.0 && x2 < 0.0))) return std::nullopt;
    double c0 = (std::norm(w1.z()) - std::norm(w2.z())) / (2.0 * (x1 - x2));
    double r2 = (x1 - c0) * (x1 - c0) + w1.y() * w1.y();
    double y = std::sqrt(std::max(r2 - c0 * c0, 0.0));
    if (!(y > 0.0)) return std::nullopt;
    HypPoint hit(0.0, y);
    return Crossing{dist(w1, hit), x1 < 0.0, frame.apply(hit)};
}

double angle_between(const HypPoint& vertex, const HypPoint& from, const HypPoint& to) {
    // Affine map sending vertex to i preserves angles.
    auto normalize = [&](const HypPoint& z) {
        return Complex((z.x() - vertex.x()) / vertex.y(), z.y() / vertex.y());
    };
    double a = direction_at_i(normalize(from));
    double b = direction_at_i(normalize(to));
    double ang = std::fmod(b - a, 2.0 * kPi);
    if (ang < 0.0) ang += 2.0 * kPi;
    return ang;
}

}  // namespace qf::hyp
