#include <cmath>
#include <sstream>

#include "qf/error.hpp"
#include "qf/surface.hpp"

namespace qf::surface {

namespace {

// SL(2,R) lift; the pants trace condition needs the sign that PSL forgets.
struct Lift {
    double a, b, c, d;

    Lift operator*(const Lift& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    double trace() const { return a + d; }
    Lift inverse() const { return {d, -b, -c, a}; }
    Isometry isometry() const { return Isometry::from_matrix(a, b, c, d); }
};

// Slot element centred at i: rotation for a cone point, translation along the
// unit semicircle for a boundary.  Slot 0 translates toward -1 and slot 1
// toward +1, which puts the block on the right of both boundary directions.
Lift standard_element(const SlotSpec& spec, int position) {
    if (spec.kind == SlotKind::Cone) {
        double c = std::cos(spec.value / 2.0);
        double s = std::sin(spec.value / 2.0);
        return {c, s, -s, c};
    }
    double ch = std::cosh(spec.value / 2.0);
    double sh = std::sinh(spec.value / 2.0);
    if (position == 0) sh = -sh;
    return {ch, sh, sh, ch};
}

Lift lift_at_height(const Lift& x, double d) {
    double e = std::exp(d);
    return {x.a, x.b * e, x.c / e, x.d};
}

std::string slot_text(const SlotSpec& s) {
    std::ostringstream os;
    os << (s.kind == SlotKind::Cone ? "cone(" : "boundary(") << s.value << ")";
    return os.str();
}

}  // namespace

BlockHolonomy build_block(const std::array<SlotSpec, 3>& slots) {
    for (const auto& s : slots) {
        if (!(s.value > 0.0) || !std::isfinite(s.value)) {
            throw std::invalid_argument("block slot values must be positive: " + slot_text(s));
        }
        if (s.kind == SlotKind::Cone && !(s.value < hyp::kPi)) {
            throw std::invalid_argument("cone angle must be below pi: " + slot_text(s));
        }
    }
    if (slots[2].kind != SlotKind::Boundary) {
        throw std::invalid_argument("third block slot must be a boundary");
    }

    const Lift x1 = standard_element(slots[0], 0);
    const Lift x2 = standard_element(slots[1], 1);
    const double target = -2.0 * std::cosh(slots[2].value / 2.0);
    auto trace_at = [&](double d) { return (x1 * lift_at_height(x2, d)).trace(); };

    // tr(X1 X2(d)) decreases strictly in d; admissible iff it starts above the target.
    const double start = trace_at(0.0);
    if (!(start > target)) {
        std::ostringstream os;
        os << "no block with slots " << slot_text(slots[0]) << ", " << slot_text(slots[1]) << ", "
           << slot_text(slots[2]) << ": existence bound tr(X1 X2)|d=0 = " << start << " must exceed -2cosh(l/2) = "
           << target;
        throw ExistenceViolation(os.str());
    }
    double lo = 0.0;
    double hi = 1.0;
    while (trace_at(hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3) throw ExistenceViolation("trace equation did not bracket below separation 1e3");
    }
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (trace_at(mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double d = 0.5 * (lo + hi);

    const Lift y1 = x1;
    const Lift y2 = lift_at_height(x2, d);
    const Lift y3 = (y1 * y2).inverse();

    BlockHolonomy out;
    out.generators = {y1.isometry(), y2.isometry(), y3.isometry()};
    out.separation = d;

    // Seam feet: on each boundary axis, the foot of the common perpendicular
    // to the next slot's centre (fixed point or axis).
    for (int k = 0; k < 3; ++k) {
        if (slots[static_cast<std::size_t>(k)].kind != SlotKind::Boundary) continue;
        const Isometry& g = out.generators[static_cast<std::size_t>(k)];
        const Isometry& next = out.generators[static_cast<std::size_t>((k + 1) % 3)];
        hyp::GeodesicLine ax = hyp::axis(g);
        if (slots[static_cast<std::size_t>((k + 1) % 3)].kind == SlotKind::Cone) {
            out.seam_feet[static_cast<std::size_t>(k)] = hyp::foot_of_perpendicular(ax, hyp::fixed_point(next));
        } else {
            out.seam_feet[static_cast<std::size_t>(k)] = hyp::common_perpendicular_foot(ax, hyp::axis(next));
        }
    }
    return out;
}

BlockHolonomy build_cone_pants(double angle1, double angle2, double length) {
    return build_block({SlotSpec{SlotKind::Cone, angle1}, SlotSpec{SlotKind::Cone, angle2},
                        SlotSpec{SlotKind::Boundary, length}});
}

BlockHolonomy build_pants(double length1, double length2, double length3) {
    return build_block({SlotSpec{SlotKind::Boundary, length1}, SlotSpec{SlotKind::Boundary, length2},
                        SlotSpec{SlotKind::Boundary, length3}});
}

}  // namespace qf::surface
