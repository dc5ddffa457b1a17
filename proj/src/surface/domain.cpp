#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "qf/error.hpp"
#include "qf/surface.hpp"

namespace qf::surface {

namespace {

hyp::HypPoint cone_point(const Holonomy& h, int cone) {
    return hyp::fixed_point(h.image(h.decomposition->marking.peripheral[static_cast<std::size_t>(cone)]));
}

void fail(const std::string& what, double residual) {
    throw AssemblyError("fundamental domain: " + what, residual);
}

}  // namespace

FundamentalDomain FundamentalDomain::build(const Holonomy& h, const ConeAngles& angles) {
    const auto& m = h.decomposition->marking;
    const std::size_t n = m.domain_vertices.size();
    if (n < 3) throw Error("fundamental domain needs at least three vertices");

    FundamentalDomain dom;
    for (const auto& v : m.domain_vertices) {
        dom.vertices_.push_back(h.image(v.word).apply(cone_point(h, v.cone)));
        dom.cones_.push_back(v.cone);
    }
    for (const auto& s : m.domain_sides) dom.sides_.push_back(DomainSideGeometry{s.paired, s.pairing, h.image(s.pairing)});
    for (std::size_t k = 0; k < n; ++k) dom.side_index_.push_back(k);

    // Orientation: the third vertex of each corner lies to the left for a
    // counterclockwise polygon.
    double vote = 0.0;
    for (std::size_t k = 0; k < n; ++k) vote += std::copysign(1.0, hyp::side_of(dom.side_line(k), dom.vertices_[(k + 2) % n]));
    if (vote < 0.0) {
        std::reverse(dom.vertices_.begin(), dom.vertices_.end());
        std::reverse(dom.cones_.begin(), dom.cones_.end());
        auto remap = [n](int old) { return static_cast<int>((2 * n - 2 - static_cast<std::size_t>(old)) % n); };
        std::vector<DomainSideGeometry> sides(n, dom.sides_.front());
        for (std::size_t k = 0; k < n; ++k) {
            auto s = dom.sides_[k];
            s.paired = remap(s.paired);
            sides[static_cast<std::size_t>(remap(static_cast<int>(k)))] = s;
        }
        dom.sides_ = std::move(sides);
        for (std::size_t k = 0; k < n; ++k) dom.side_index_[k] = static_cast<std::size_t>(remap(static_cast<int>(k)));
    }

    for (std::size_t k = 0; k < n; ++k) {
        const auto& side = dom.sides_[k];
        const auto p = static_cast<std::size_t>(side.paired);
        const double e1 = hyp::dist(side.pairing_map.apply(dom.vertices_[p]), dom.vertices_[(k + 1) % n]);
        const double e2 = hyp::dist(side.pairing_map.apply(dom.vertices_[(p + 1) % n]), dom.vertices_[k]);
        if (!(std::max(e1, e2) < 1e-7)) {
            std::ostringstream os;
            os << "side pairing " << p << " -> " << k << " misses by " << std::max(e1, e2);
            fail(os.str(), std::max(e1, e2));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k || j == (k + 1) % n) continue;
            const double s = hyp::side_of(dom.side_line(k), dom.vertices_[j]);
            if (!(s > 1e-12)) {
                std::ostringstream os;
                os << "polygon is not strictly convex at side " << k << " (vertex " << j << " offset " << s << ")";
                fail(os.str(), s);
            }
        }
    }

    const auto interior = dom.interior_angles();
    std::vector<double> sums(angles.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) sums[static_cast<std::size_t>(dom.cones_[k])] += interior[k];
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const double err = std::abs(sums[i] - angles[i]);
        if (!(err < 1e-7)) {
            std::ostringstream os;
            os << "angles at cone point " << i << " sum to " << sums[i] << ", expected " << angles[i];
            fail(os.str(), err);
        }
    }
    return dom;
}

hyp::GeodesicLine FundamentalDomain::side_line(std::size_t k) const {
    return hyp::line_through(vertices_[k], vertices_[(k + 1) % vertices_.size()]);
}

double FundamentalDomain::depth(const hyp::HypPoint& p) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < vertices_.size(); ++k) d = std::min(d, hyp::side_of(side_line(k), p));
    return d;
}

bool FundamentalDomain::contains(const hyp::HypPoint& p, double tol) const { return depth(p) >= -tol; }

std::vector<double> FundamentalDomain::interior_angles() const {
    const std::size_t n = vertices_.size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = hyp::angle_between(vertices_[k], vertices_[(k + 1) % n], vertices_[(k + n - 1) % n]);
    }
    return out;
}

double FundamentalDomain::area() const {
    double total = 0.0;
    const auto& v = vertices_;
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        const double a0 = hyp::angle_between(v[0], v[k], v[k + 1]);
        const double a1 = hyp::angle_between(v[k], v[k + 1], v[0]);
        const double a2 = hyp::angle_between(v[k + 1], v[0], v[k]);
        total += hyp::kPi - (a0 + a1 + a2);
    }
    return total;
}

double FundamentalDomain::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices_.size(); ++j) d = std::max(d, hyp::dist(vertices_[i], vertices_[j]));
    }
    return d;
}

hyp::HypPoint FundamentalDomain::interior_point(unsigned seed) const {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    hyp::HypPoint p = vertices_.front();
    double mass = u(rng);
    for (std::size_t k = 1; k < vertices_.size(); ++k) {
        const double w = u(rng);
        p = hyp::geodesic_point(p, vertices_[k], w / (mass + w));
        mass += w;
    }
    return p;
}

hyp::HypPoint FundamentalDomain::side_point(std::size_t k, double s) const {
    return hyp::geodesic_point(vertices_[k], vertices_[(k + 1) % vertices_.size()], s);
}

double singular_margin(const ConeSurface& s, const CurveClass& curve, const MarginOptions& options) {
    if (!curve.simple) throw UnsupportedError("singular margin needs a simple curve: " + curve.name);
    if (curve.peripheral) throw UnsupportedError("singular margin of a peripheral curve: " + curve.name);
    const Holonomy& h = s.holonomy();
    const hyp::GeodesicLine ax = hyp::axis(h.image(curve.word));
    const auto& d = s.decomposition();
    const int ngen = d.generator_count();
    const int max_len = options.max_word_length >= 0 ? options.max_word_length : 2 * (ngen - 1);
    const FundamentalDomain dom = FundamentalDomain::build(h, s.angles());
    const double radius = options.radius_factor * dom.diameter();

    std::vector<hyp::HypPoint> cones;
    for (int i = 0; i < d.cone_points; ++i) cones.push_back(cone_point(h, i));

    // Breadth-first over group elements, deduplicated on rounded matrices;
    // an element is expanded only while some translated cone point stays
    // within the radius of the axis.
    auto key = [](const Isometry& g) {
        std::array<long long, 4> k{};
        for (std::size_t i = 0; i < 4; ++i) k[i] = std::llround(g.entries()[i] * 1e7);
        return k;
    };
    std::set<std::array<long long, 4>> seen{key(Isometry())};
    std::vector<Isometry> layer{Isometry()};
    double margin = std::numeric_limits<double>::infinity();
    for (int len = 0; len <= max_len && !layer.empty(); ++len) {
        std::vector<Isometry> next;
        for (const auto& g : layer) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& c : cones) nearest = std::min(nearest, hyp::dist_to_geodesic(g.apply(c), ax));
            margin = std::min(margin, nearest);
            if (nearest > radius || len == max_len) continue;
            for (int x = 1; x <= ngen; ++x) {
                for (const Isometry& step : {h.images[static_cast<std::size_t>(x - 1)],
                                             h.images[static_cast<std::size_t>(x - 1)].inverse()}) {
                    Isometry gn = g * step;
                    if (seen.insert(key(gn)).second) next.push_back(gn);
                }
            }
        }
        layer = std::move(next);
    }
    return margin;
}

}  // namespace qf::surface
