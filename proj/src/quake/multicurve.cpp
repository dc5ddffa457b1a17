#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qf/earthquake.hpp"
#include "qf/error.hpp"
#include "qf/log.hpp"

namespace qf::quake {

namespace {

// Cone points surrounded by a curve of the chain sphere, as the interval
// [first, last] of generators c(first)...c(last), when the word is one.
struct Arc {
    int first;
    int last;
};

std::optional<Arc> chain_arc(const surface::BlockDecomposition& d, const Word& w) {
    const FreeElimination fg = d.free_group();
    const int n = d.cone_points;
    for (int i = 1; i <= n; ++i) {
        for (int j = i; j <= n; ++j) {
            Word arc(static_cast<std::size_t>(j - i + 1));
            std::iota(arc.begin(), arc.end(), i);
            if (fg.conjugate(w, arc, true)) return Arc{i, j};
        }
    }
    return std::nullopt;
}

std::vector<char> arc_members(const Arc& a, int n) {
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (int k = a.first; k <= a.last; ++k) in[static_cast<std::size_t>(k - 1)] = 1;
    return in;
}

// Slope of a torus curve in the basis (b, s), up to sign.
std::optional<std::pair<int, int>> torus_slope(const surface::BlockDecomposition& d, const Word& w) {
    const FreeElimination fg = d.free_group();
    const std::vector<std::pair<Word, std::pair<int, int>>> known = {
        {{2}, {1, 0}}, {{1}, {0, 1}}, {{1, 2}, {1, 1}}, {{1, -2}, {1, -1}}};
    for (const auto& [word, slope] : known) {
        if (fg.conjugate(w, word, true)) return slope;
    }
    return std::nullopt;
}

bool is_peripheral(const surface::BlockDecomposition& d, const Word& w) {
    const FreeElimination fg = d.free_group();
    for (const auto& p : d.marking.peripheral) {
        if (fg.conjugate(w, p, true)) return true;
    }
    return false;
}

}  // namespace

std::optional<CurveClass> find_curve(const surface::BlockDecomposition& d, const std::string& name) {
    const auto& m = d.marking;
    for (const auto* list : {&m.pants, &m.transversals, &m.products}) {
        for (const auto& c : *list) {
            if (c.name == name) return c;
        }
    }
    return std::nullopt;
}

std::optional<int> pants_index_of(const surface::BlockDecomposition& d, const Word& word) {
    const FreeElimination fg = d.free_group();
    for (std::size_t k = 0; k < d.marking.pants.size(); ++k) {
        if (fg.conjugate(word, d.marking.pants[k].word, true)) return static_cast<int>(k);
    }
    return std::nullopt;
}

std::optional<int> table_intersection(const surface::BlockDecomposition& d, const Word& a, const Word& b) {
    if (d.kind == "chain_sphere") {
        const auto x = chain_arc(d, a);
        const auto y = chain_arc(d, b);
        if (!x || !y) return std::nullopt;
        const int n = d.cone_points;
        const auto ix = arc_members(*x, n);
        const auto iy = arc_members(*y, n);
        bool x_in_y = true, y_in_x = true, apart = true, cover = true;
        for (int k = 0; k < n; ++k) {
            const auto u = static_cast<std::size_t>(k);
            if (ix[u] && !iy[u]) x_in_y = false;
            if (iy[u] && !ix[u]) y_in_x = false;
            if (ix[u] && iy[u]) apart = false;
            if (!ix[u] && !iy[u]) cover = false;
        }
        return (x_in_y || y_in_x || apart || cover) ? 0 : 2;
    }
    if (d.kind == "cone_torus") {
        const auto x = torus_slope(d, a);
        const auto y = torus_slope(d, b);
        if (!x || !y) return std::nullopt;
        return std::abs(x->first * y->second - x->second * y->first);
    }
    const auto pa = pants_index_of(d, a);
    const auto pb = pants_index_of(d, b);
    if (pa && pb) return 0;
    return std::nullopt;
}

WeightedMulticurve WeightedMulticurve::make(const surface::BlockDecomposition& d, std::vector<Component> components) {
    const FreeElimination fg = d.free_group();
    WeightedMulticurve out;
    for (auto& c : components) {
        if (!std::isfinite(c.weight) || c.weight < 0.0) {
            throw std::invalid_argument("weight of " + c.curve.name + " must be finite and non-negative");
        }
        if (c.weight < 1e-12) {
            std::ostringstream os;
            os << "dropping component " << c.curve.name << " with weight " << c.weight;
            log::notice(os.str());
            continue;
        }
        if (!c.curve.simple) throw std::invalid_argument("component " + c.curve.name + " is not a simple curve");
        if (c.curve.peripheral || is_peripheral(d, c.curve.word)) {
            throw std::invalid_argument("component " + c.curve.name + " is peripheral");
        }
        for (int x : c.curve.word) {
            if (x == 0 || std::abs(x) > d.generator_count()) {
                throw std::invalid_argument("component " + c.curve.name + " uses an unknown generator");
            }
        }
        if (reduce(fg.to_free(c.curve.word)).empty()) {
            throw std::invalid_argument("component " + c.curve.name + " is trivial");
        }
        c.pants_index = pants_index_of(d, c.curve.word);
        out.components_.push_back(c);
    }
    const auto& cs = out.components_;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            if (fg.conjugate(cs[i].curve.word, cs[j].curve.word, true)) {
                throw std::invalid_argument("components " + cs[i].curve.name + " and " + cs[j].curve.name +
                                            " are isotopic");
            }
            const auto k = table_intersection(d, cs[i].curve.word, cs[j].curve.word);
            if (!k) {
                throw UnsupportedError("no disjointness certificate for " + cs[i].curve.name + " and " +
                                       cs[j].curve.name);
            }
            if (*k != 0) {
                throw std::invalid_argument("components " + cs[i].curve.name + " and " + cs[j].curve.name +
                                            " intersect " + std::to_string(*k) + " times");
            }
        }
    }
    return out;
}

WeightedMulticurve WeightedMulticurve::on_pants(const surface::BlockDecomposition& d,
                                                const std::vector<std::pair<int, double>>& weights) {
    std::vector<Component> cs;
    for (auto [k, w] : weights) {
        if (k < 0 || k >= d.curve_count()) throw std::invalid_argument("pants curve index out of range");
        cs.push_back(Component{d.marking.pants[static_cast<std::size_t>(k)], w, k});
    }
    return make(d, std::move(cs));
}

WeightedMulticurve WeightedMulticurve::single(const surface::BlockDecomposition& d, const std::string& name,
                                              double weight) {
    auto c = find_curve(d, name);
    if (!c) throw std::invalid_argument("unknown curve " + name);
    return make(d, {Component{*c, weight, std::nullopt}});
}

bool WeightedMulticurve::pants_supported() const {
    return std::all_of(components_.begin(), components_.end(), [](const Component& c) { return c.pants_index.has_value(); });
}

WeightedMulticurve WeightedMulticurve::scaled(double k) const {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("scale must be positive");
    WeightedMulticurve out = *this;
    for (auto& c : out.components_) c.weight *= k;
    return out;
}

WeightedMulticurve WeightedMulticurve::with_weights(const std::vector<double>& w) const {
    if (w.size() != components_.size()) throw std::invalid_argument("one weight per component expected");
    WeightedMulticurve out = *this;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw std::invalid_argument("weights must be positive");
        out.components_[i].weight = w[i];
    }
    return out;
}

std::vector<double> WeightedMulticurve::weights() const {
    std::vector<double> out;
    for (const auto& c : components_) out.push_back(c.weight);
    return out;
}

}  // namespace qf::quake
