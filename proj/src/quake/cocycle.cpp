#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qf/earthquake.hpp"
#include "qf/error.hpp"
#include "qf/log.hpp"

namespace qf::quake {

namespace {

constexpr double kTie = 1e-9;
constexpr int kRetries = 8;

std::vector<double> draw_side_params(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed * 7919u + 17u);
    std::uniform_real_distribution<double> u(0.3, 0.7);
    std::vector<double> out(n);
    for (auto& s : out) s = u(rng);
    return out;
}

}  // namespace

Isometry leaf_factor(const CrossingFactor& c, Side side) {
    return hyp::translation_along(c.leaf, side == Side::Right ? -c.weight : c.weight);
}

CocycleContext::CocycleContext(const Holonomy& h, const surface::ConeAngles& angles,
                               const std::vector<CurveClass>& support, unsigned seed)
    : holonomy_(h), domain_(surface::FundamentalDomain::build(h, angles)) {
    for (const auto& c : support) leaves_.push_back(trace_curve(h, domain_, c));
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        for (std::size_t j = i; j < leaves_.size(); ++j) {
            if (geometric_intersection(leaves_[i], leaves_[j]) != 0) {
                throw UnsupportedError(i == j ? "leaf " + support[i].name + " is not simple"
                                              : "leaves " + support[i].name + " and " + support[j].name + " cross");
            }
        }
    }
    basepoint_ = domain_.interior_point(seed);
    side_params_ = draw_side_params(domain_.size(), seed);
}

std::optional<std::vector<CrossingFactor>> CocycleContext::crossings(const HypPoint& x, const HypPoint& y,
                                                                     const std::vector<double>& weights) const {
    if (weights.size() != leaves_.size()) throw std::invalid_argument("one weight per leaf expected");
    std::vector<CrossingFactor> out;
    const double total = hyp::dist(x, y);
    for (std::size_t i = 0; i < leaves_.size(); ++i) {
        if (weights[i] == 0.0) continue;
        for (const auto& c : leaves_[i].chords) {
            if (std::abs(hyp::side_of(c.line, x)) < kTie || std::abs(hyp::side_of(c.line, y)) < kTie) {
                return std::nullopt;
            }
            const auto hit = hyp::segment_crossing(x, y, c.line);
            if (!hit) continue;
            if (hit->distance < kTie || hit->distance > total - kTie) return std::nullopt;
            out.push_back(CrossingFactor{hit->left_to_right ? c.line : c.line.reversed(), weights[i], hit->distance});
        }
    }
    std::sort(out.begin(), out.end(), [](const CrossingFactor& a, const CrossingFactor& b) { return a.at < b.at; });
    for (std::size_t k = 1; k < out.size(); ++k) {
        if (out[k].at - out[k - 1].at < kTie) return std::nullopt;
    }
    return out;
}

Isometry CocycleContext::beta(const HypPoint& x, const HypPoint& y, const std::vector<double>& weights,
                              Side side) const {
    const auto cs = crossings(x, y, weights);
    if (!cs) throw Error("cocycle path meets a leaf degenerately");
    Isometry out;
    for (const auto& c : *cs) out = out * leaf_factor(c, side);
    return out;
}

namespace {

std::optional<std::vector<Isometry>> pairings_at(const CocycleContext& ctx, const HypPoint& x0,
                                                 const std::vector<double>& params,
                                                 const std::vector<double>& weights, Side side) {
    const auto& dom = ctx.domain();
    std::vector<Isometry> out;
    for (std::size_t k = 0; k < dom.size(); ++k) {
        const auto& s = dom.sides()[k];
        const HypPoint m = dom.side_point(k, params[k]);
        const HypPoint back = s.pairing_map.inverse().apply(m);
        const auto to = ctx.crossings(x0, m, weights);
        const auto from = ctx.crossings(back, x0, weights);
        if (!to || !from) return std::nullopt;
        Isometry a, b;
        for (const auto& c : *to) a = a * leaf_factor(c, side);
        for (const auto& c : *from) b = b * leaf_factor(c, side);
        out.push_back(a * s.pairing_map * b);
    }
    return out;
}

}  // namespace

std::vector<Isometry> CocycleContext::deformed_pairings(const std::vector<double>& weights, Side side) const {
    if (auto p = pairings_at(*this, basepoint_, side_params_, weights, side)) return *p;
    for (int attempt = 1; attempt <= kRetries; ++attempt) {
        std::ostringstream os;
        os << "cocycle basepoint meets a leaf degenerately; retry " << attempt;
        log::notice(os.str());
        const unsigned seed = 1000u + static_cast<unsigned>(attempt);
        if (auto p = pairings_at(*this, domain_.interior_point(seed), draw_side_params(domain_.size(), seed), weights,
                                 side)) {
            return *p;
        }
    }
    throw Error("cocycle: every basepoint tried meets a leaf degenerately");
}

Holonomy CocycleContext::deform(const std::vector<double>& weights, Side side) const {
    const auto pairings = deformed_pairings(weights, side);
    const auto& m = holonomy_.decomposition->marking;
    Holonomy out;
    out.decomposition = holonomy_.decomposition;
    for (const auto& word : m.generator_sides) {
        Isometry g;
        for (int x : word) {
            const Isometry& p = pairings[domain_.side_index(std::abs(x) - 1)];
            g = g * (x > 0 ? p : p.inverse());
        }
        out.images.push_back(g);
    }
    return out;
}

}  // namespace qf::quake
