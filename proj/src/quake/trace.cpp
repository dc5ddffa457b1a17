#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "qf/earthquake.hpp"
#include "qf/error.hpp"

namespace qf::quake {

namespace {

using hyp::GeodesicLine;

// Side k as a geodesic segment, and where a line crosses it.
struct SideHit {
    std::size_t side;
    HypPoint point;
    double position;  // along the line
};

std::vector<SideHit> side_hits(const surface::FundamentalDomain& dom, const GeodesicLine& line) {
    std::vector<SideHit> out;
    const auto& v = dom.vertices();
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto c = hyp::segment_crossing(v[k], v[(k + 1) % v.size()], line);
        if (c) out.push_back(SideHit{k, c->point, hyp::position_along(line, c->point)});
    }
    return out;
}

bool meets(const surface::FundamentalDomain& dom, const GeodesicLine& line) {
    bool left = false, right = false;
    for (const auto& p : dom.vertices()) {
        const double s = hyp::side_of(line, p);
        if (s > 0.0) left = true;
        if (s < 0.0) right = true;
    }
    return left && right;
}

std::array<long long, 4> key(const Isometry& g) {
    std::array<long long, 4> k{};
    for (std::size_t i = 0; i < 4; ++i) k[i] = std::llround(g.entries()[i] * 1e7);
    return k;
}

// A lift of `ax` meeting the domain, pulled back into it: best-first over
// tiles g(D) by their distance to the line.
GeodesicLine lift_into(const surface::FundamentalDomain& dom, const GeodesicLine& ax, const std::string& name) {
    using Item = std::pair<double, Isometry>;
    auto cmp = [](const Item& a, const Item& b) { return a.first > b.first; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> todo(cmp);
    std::set<std::array<long long, 4>> seen;
    auto score = [&](const Isometry& g) {
        const GeodesicLine back = g.inverse().apply(ax);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : dom.vertices()) best = std::min(best, hyp::dist_to_geodesic(p, back));
        return best;
    };
    todo.push({score(Isometry()), Isometry()});
    seen.insert(key(Isometry()));
    for (int expanded = 0; !todo.empty() && expanded < 20000; ++expanded) {
        const Isometry g = todo.top().second;
        todo.pop();
        const GeodesicLine back = g.inverse().apply(ax);
        if (meets(dom, back)) return back;
        for (const auto& s : dom.sides()) {
            const Isometry next = g * s.pairing_map;
            if (seen.insert(key(next)).second) todo.push({score(next), next});
        }
    }
    throw Error("no lift of " + name + " meets the fundamental domain");
}

}  // namespace

TracedCurve trace_curve(const Holonomy& h, const surface::FundamentalDomain& dom, const CurveClass& curve) {
    const Isometry g = h.image(curve.word);
    if (!hyp::is_hyperbolic(g)) {
        throw UnsupportedError("curve " + curve.name + " has " + hyp::describe(hyp::classify(g)) + " holonomy");
    }
    TracedCurve out{curve, hyp::translation_length(g), {}, {}};
    const GeodesicLine start = lift_into(dom, hyp::axis(g), curve.name);

    GeodesicLine line = start;
    std::optional<std::size_t> first_entry;
    double total = 0.0;
    for (int step = 0; step < 200; ++step) {
        const auto hits = side_hits(dom, line);
        if (hits.size() < 2) {
            std::ostringstream os;
            os << "trace of " << curve.name << " lost the domain after " << step << " chords";
            throw Error(os.str());
        }
        const SideHit* in = &hits.front();
        const SideHit* out_hit = &hits.front();
        for (const auto& hh : hits) {
            if (hh.position < in->position) in = &hh;
            if (hh.position > out_hit->position) out_hit = &hh;
        }
        if (step > 0 && in->side == *first_entry && line.approx_equal(start, 1e-7)) break;
        if (step == 0) first_entry = in->side;
        const double len = hyp::dist(in->point, out_hit->point);
        out.chords.push_back(Chord{line, in->point, out_hit->point, in->side, out_hit->side, len});
        total += len;
        const auto& side = dom.sides()[out_hit->side];
        out.traversal = concat(out.traversal, side.pairing);
        line = side.pairing_map.inverse().apply(line);
        if (step == 199) throw Error("trace of " + curve.name + " did not close within 200 chords");
    }

    const double err = std::abs(total - out.length);
    if (!(err < 1e-6 * (1.0 + out.length))) {
        std::ostringstream os;
        os << "trace of " << curve.name << " has length " << total << ", holonomy says " << out.length;
        throw Error(os.str());
    }
    const FreeElimination fg = h.decomposition->free_group();
    if (!fg.conjugate(out.traversal, curve.word)) {
        throw Error("trace of " + curve.name + " closed on " + to_string(out.traversal) + ", not on its class");
    }
    return out;
}

int geometric_intersection(const TracedCurve& a, const TracedCurve& b) {
    int count = 0;
    for (const auto& ca : a.chords) {
        for (const auto& cb : b.chords) {
            const auto hit = hyp::segment_crossing(ca.entry, ca.exit, cb.line);
            if (!hit) continue;
            const double lo = hyp::position_along(cb.line, cb.entry);
            const double hi = hyp::position_along(cb.line, cb.exit);
            const double at = hyp::position_along(cb.line, hit->point);
            if (at > lo && at < hi) ++count;
        }
    }
    return count;
}

}  // namespace qf::quake
