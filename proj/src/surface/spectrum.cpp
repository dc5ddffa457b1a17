#include <algorithm>
#include <cmath>
#include <variant>

#include "qf/error.hpp"
#include "qf/surface.hpp"

namespace qf::surface {

std::vector<CurveClass> determining_system(const BlockDecomposition& d) {
    std::vector<CurveClass> out = d.marking.pants;
    out.insert(out.end(), d.marking.transversals.begin(), d.marking.transversals.end());
    out.insert(out.end(), d.marking.products.begin(), d.marking.products.end());
    return out;
}

double geodesic_length(const Holonomy& h, const CurveClass& curve) {
    if (curve.peripheral) throw ClassMismatch("curve " + curve.name + " is peripheral");
    const auto c = hyp::classify(h.image(curve.word));
    if (const auto* hy = std::get_if<hyp::Hyperbolic>(&c)) return hy->length;
    throw ClassMismatch("curve " + curve.name + " " + to_string(curve.word) + " has " + hyp::describe(c) +
                        " holonomy");
}

double geodesic_length(const ConeSurface& s, const CurveClass& curve) { return geodesic_length(s.holonomy(), curve); }

LengthSpectrum length_spectrum(const Holonomy& h, const std::vector<CurveClass>& system) {
    LengthSpectrum out;
    out.reserve(system.size());
    for (const auto& c : system) out.push_back(SpectrumEntry{c.name, c.word, geodesic_length(h, c)});
    return out;
}

LengthSpectrum length_spectrum(const ConeSurface& s, const std::vector<CurveClass>& system) {
    return length_spectrum(s.holonomy(), system);
}

LengthSpectrum length_spectrum(const Holonomy& h) { return length_spectrum(h, determining_system(*h.decomposition)); }

LengthSpectrum length_spectrum(const ConeSurface& s) { return length_spectrum(s.holonomy()); }

double spectrum_distance(const LengthSpectrum& a, const LengthSpectrum& b) {
    if (a.size() != b.size()) throw IncomparableError("length spectra over different curve systems");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].word != b[i].word) {
            throw IncomparableError("length spectra disagree on curve " + std::to_string(i) + ": " +
                                    to_string(a[i].word) + " vs " + to_string(b[i].word));
        }
        worst = std::max(worst, std::abs(a[i].length - b[i].length));
    }
    return worst;
}

namespace {

void require_comparable(const BlockDecomposition& a, const BlockDecomposition& b) {
    if (&a == &b) return;
    const auto& ma = a.marking;
    const auto& mb = b.marking;
    auto words = [](const std::vector<CurveClass>& cs) {
        std::vector<Word> w;
        for (const auto& c : cs) w.push_back(c.word);
        return w;
    };
    if (a.genus != b.genus || a.cone_points != b.cone_points || ma.relator != mb.relator ||
        ma.peripheral != mb.peripheral || words(determining_system(a)) != words(determining_system(b))) {
        throw IncomparableError("surfaces carry different markings");
    }
}

}  // namespace

double teich_distance(const Holonomy& h1, const Holonomy& h2) {
    require_comparable(*h1.decomposition, *h2.decomposition);
    return spectrum_distance(length_spectrum(h1), length_spectrum(h2));
}

double teich_distance(const ConeSurface& s1, const ConeSurface& s2) {
    if (s1.angles().size() != s2.angles().size()) throw IncomparableError("different numbers of cone points");
    for (std::size_t i = 0; i < s1.angles().size(); ++i) {
        if (std::abs(s1.angles()[i] - s2.angles()[i]) > 1e-12) {
            throw IncomparableError("cone angle " + std::to_string(i) + " differs");
        }
    }
    return teich_distance(s1.holonomy(), s2.holonomy());
}

bool equals_in_teich(const ConeSurface& s1, const ConeSurface& s2, double tol) {
    return teich_distance(s1, s2) <= tol;
}

double gauss_bonnet_area(const ConeAngles& angles, int genus) {
    double area = -2.0 * hyp::kPi * (2.0 - 2.0 * genus);
    for (double a : angles.values()) area += 2.0 * hyp::kPi - a;
    if (!(area > 0.0)) {
        throw NoHyperbolicStructure("sum(2pi - theta) - 2pi chi = " + std::to_string(area) + " is not positive");
    }
    return area;
}

}  // namespace qf::surface
