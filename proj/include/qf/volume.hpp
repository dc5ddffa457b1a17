#pragma once

// Volumes of the regions Omega_+ and Omega_- of a GHMC manifold bent along a
// weighted multicurve, in closed form and by quadrature.

#include <string>
#include <vector>

#include "qf/earthquake.hpp"

namespace qf::volume {

using quake::WeightedMulticurve;
using surface::ConeSurface;

/// Sum of w_i * length(c_i).
double bending_length(const ConeSurface& s, const WeightedMulticurve& lambda);

/// (pi/4) A + L/2.
double omega_volume_closed(double area, double length);

/// Composite Simpson on [0, pi/2] with n panels (n rounded up to even).
double simpson(double (*f)(double), int n);
/// int_0^{pi/2} cos^2 r dr and int_0^{pi/2} cos r sin r dr.
double cos2_integral(int n);
double cos_sin_integral(int n);

struct OmegaNumeric {
    double volume;
    double area_part;      // A * int cos^2
    double bending_part;   // sum w_i l_i * int cos sin
    double refinement;     // |V(n) - V(n/2)|
    std::vector<std::string> notices;
};

/// Needs lambda on pants curves. Area from Gauss-Bonnet, bending lengths
/// from the FN lengths; the radial integrals by Simpson with `resolution`
/// panels. A refinement difference above 1e-6 raises a notice.
OmegaNumeric omega_volume_numeric(const ConeSurface& s, const WeightedMulticurve& lambda, int resolution);

struct VolumeIdentity {
    double lhs;       // Vol(Omega_+) + Vol(Omega_-) = Vol(M) + Vol(C(M))
    double rhs;       // (pi/2) A + (L_+ + L_-)/2
    double residual;
    double rhs_other_sign;  // (pi/2)(2 pi chi + sum(2 pi - theta)) + L/2
};

/// Throws Error if either area is off the Gauss-Bonnet area by more than 1e-8.
VolumeIdentity total_volume_identity(double area_plus, double area_minus, double length_plus, double length_minus,
                                     const surface::ConeAngles& angles, int genus);

struct VolumeReport {
    double area;
    double bending_length;
    double closed;
    double numeric;
    double refinement;
    VolumeIdentity identity;
    std::vector<std::string> notices;
};

/// Omega_+ of the manifold bent along lambda over s; Omega_- is taken with
/// the same area and bending length.
VolumeReport volume_report(const ConeSurface& s, const WeightedMulticurve& lambda, int resolution);

}  // namespace qf::volume
