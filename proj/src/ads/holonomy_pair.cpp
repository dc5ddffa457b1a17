#include <cmath>
#include <sstream>

#include "qf/ads.hpp"
#include "qf/error.hpp"

namespace qf::ads {

double GhmcData::relator_residual() const { return std::max(rho_l.relator_residual(), rho_r.relator_residual()); }

double GhmcData::peripheral_residual() const {
    return std::max(rho_l.peripheral_residual(angles), rho_r.peripheral_residual(angles));
}

void GhmcData::validate() const {
    if (!rho_l.decomposition || rho_l.decomposition != rho_r.decomposition) {
        throw Error("holonomy pair must share one decomposition");
    }
    const double rel = relator_residual();
    if (!(rel <= 1e-9)) {
        std::ostringstream os;
        os << "holonomy pair misses the relator by " << rel;
        throw Error(os.str());
    }
    const double per = peripheral_residual();
    if (!(per <= 1e-9)) {
        std::ostringstream os;
        os << "holonomy pair: peripheral rotation angles off by " << per;
        throw Error(os.str());
    }
}

GhmcData from_bending(const BendData& b, unsigned seed) {
    const auto& h = b.h_plus.holonomy();
    GhmcData g{h, h, b.h_plus.angles()};
    if (!b.lambda_plus.empty()) {
        std::vector<surface::CurveClass> support;
        for (const auto& c : b.lambda_plus.components()) support.push_back(c.curve);
        const quake::CocycleContext ctx(h, b.h_plus.angles(), support, seed);
        const auto w = b.lambda_plus.weights();
        g.rho_l = ctx.deform(w, quake::Side::Left);
        g.rho_r = ctx.deform(w, quake::Side::Right);
    }
    g.validate();
    return g;
}

std::pair<ConeSurface, ConeSurface> left_right_metrics(const GhmcData& g) {
    g.validate();
    return {surface::surface_from_holonomy(g.rho_l, g.angles), surface::surface_from_holonomy(g.rho_r, g.angles)};
}

DiagramReport diagram_check(const BendData& b, unsigned seed) {
    DiagramReport r;
    if (b.lambda_plus.empty()) return r;
    const auto [mu_l, mu_r] = left_right_metrics(from_bending(b, seed));
    const quake::EarthquakeOptions opt{false, seed};
    r.left = surface::teich_distance(mu_l, quake::left_earthquake(b.h_plus, b.lambda_plus, opt));
    r.right = surface::teich_distance(mu_r, quake::right_earthquake(b.h_plus, b.lambda_plus, opt));
    r.doubled = surface::teich_distance(mu_r, quake::right_earthquake(mu_l, b.lambda_plus.scaled(2.0), opt));
    return r;
}

std::pair<Isometry, Isometry> pure_rotation_pair(double angle, const HypPoint& centre_l, const HypPoint& centre_r) {
    if (!(angle > 0.0 && angle < 2.0 * hyp::kPi)) throw std::invalid_argument("rotation angle must lie in (0, 2pi)");
    return {hyp::rotation_about(centre_l, angle), hyp::rotation_about(centre_r, angle)};
}

double decompose_rotation_pair(const std::pair<Isometry, Isometry>& pair, double tol) {
    if (!hyp::is_elliptic(pair.first) || !hyp::is_elliptic(pair.second)) {
        throw ClassMismatch("not a rotation pair: a factor is not elliptic");
    }
    const double a = hyp::rotation_angle(pair.first);
    const double b = hyp::rotation_angle(pair.second);
    if (std::abs(a - b) > tol) {
        std::ostringstream os;
        os << "not a rotation pair: angles " << a << " and " << b;
        throw ClassMismatch(os.str());
    }
    return 0.5 * (a + b);
}

}  // namespace qf::ads
