#include "qf/volume.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qf/error.hpp"
#include "qf/log.hpp"

namespace qf::volume {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double cos2(double r) { return std::cos(r) * std::cos(r); }
double cos_sin(double r) { return std::cos(r) * std::sin(r); }

double area_of(const ConeSurface& s) { return surface::gauss_bonnet_area(s.angles(), s.decomposition().genus); }

double pants_length(const ConeSurface& s, const WeightedMulticurve& lambda) {
    if (!lambda.pants_supported()) throw UnsupportedError("numeric Omega volume needs a pants-supported multicurve");
    double L = 0.0;
    for (const auto& c : lambda.components()) L += c.weight * s.fn()[static_cast<std::size_t>(*c.pants_index)].length;
    return L;
}

double omega_at(double area, double length, int n) {
    return area * cos2_integral(n) + length * cos_sin_integral(n);
}

}  // namespace

double bending_length(const ConeSurface& s, const WeightedMulticurve& lambda) {
    double L = 0.0;
    for (const auto& c : lambda.components()) L += c.weight * surface::geodesic_length(s, c.curve);
    return L;
}

double omega_volume_closed(double area, double length) {
    if (area < 0.0 || length < 0.0) throw std::invalid_argument("area and length must be non-negative");
    return std::numbers::pi / 4.0 * area + length / 2.0;
}

double simpson(double (*f)(double), int n) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = kHalfPi / n;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < n; ++i) (i % 2 ? odd : even) += f(i * h);
    return h / 3.0 * (f(0.0) + 4.0 * odd + 2.0 * even + f(kHalfPi));
}

double cos2_integral(int n) { return simpson(cos2, n); }
double cos_sin_integral(int n) { return simpson(cos_sin, n); }

OmegaNumeric omega_volume_numeric(const ConeSurface& s, const WeightedMulticurve& lambda, int resolution) {
    if (resolution < 2) throw std::invalid_argument("quadrature resolution must be at least 2");
    const double A = area_of(s);
    const double L = pants_length(s, lambda);
    OmegaNumeric out{};
    out.area_part = A * cos2_integral(resolution);
    out.bending_part = L * cos_sin_integral(resolution);
    out.volume = out.area_part + out.bending_part;
    out.refinement = std::abs(out.volume - omega_at(A, L, resolution / 2));
    if (out.refinement > 1e-6) {
        std::ostringstream os;
        os << "Omega quadrature at resolution " << resolution << " has not converged (refinement difference "
           << out.refinement << ")";
        out.notices.push_back(os.str());
        log::notice(os.str());
    }
    return out;
}

VolumeIdentity total_volume_identity(double area_plus, double area_minus, double length_plus, double length_minus,
                                     const surface::ConeAngles& angles, int genus) {
    const double A = surface::gauss_bonnet_area(angles, genus);
    for (double a : {area_plus, area_minus}) {
        if (std::abs(a - A) > 1e-8) {
            std::ostringstream os;
            os << "boundary area " << a << " differs from the Gauss-Bonnet area " << A;
            throw Error(os.str());
        }
    }
    VolumeIdentity out{};
    out.lhs = omega_volume_closed(area_plus, length_plus) + omega_volume_closed(area_minus, length_minus);
    const double L = length_plus + length_minus;
    out.rhs = kHalfPi * A + L / 2.0;
    out.residual = std::abs(out.lhs - out.rhs);
    double defect = 0.0;
    for (double t : angles.values()) defect += 2.0 * std::numbers::pi - t;
    const double chi = 2.0 - 2.0 * genus;
    out.rhs_other_sign = kHalfPi * (2.0 * std::numbers::pi * chi + defect) + L / 2.0;
    return out;
}

VolumeReport volume_report(const ConeSurface& s, const WeightedMulticurve& lambda, int resolution) {
    VolumeReport r{};
    r.area = area_of(s);
    r.bending_length = bending_length(s, lambda);
    r.closed = omega_volume_closed(r.area, r.bending_length);
    const auto num = omega_volume_numeric(s, lambda, resolution);
    r.numeric = num.volume;
    r.refinement = num.refinement;
    r.notices = num.notices;
    r.identity = total_volume_identity(r.area, r.area, r.bending_length, r.bending_length, s.angles(),
                                       s.decomposition().genus);
    return r;
}

}  // namespace qf::volume
