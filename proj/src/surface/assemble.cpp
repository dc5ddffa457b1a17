#include <cmath>
#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>
#include <variant>

#include "qf/error.hpp"
#include "qf/surface.hpp"
#include "surface/internal.hpp"

namespace qf::surface {

namespace {

// Map sending the imaginary axis onto g with i landing on p (p on g).
Isometry frame_at(const hyp::GeodesicLine& g, const hyp::HypPoint& p) {
    const double s = hyp::position_along(g, p);
    const double e = std::exp(s / 2.0);
    return hyp::standard_frame(g) * Isometry::from_matrix(e, 0.0, 0.0, 1.0 / e);
}

}  // namespace

namespace detail {

std::vector<BlockHolonomy> build_blocks(const BlockDecomposition& d, const FNCoordinates& fn,
                                        const ConeAngles& angles) {
    if (static_cast<int>(fn.size()) != d.curve_count()) {
        throw std::invalid_argument("expected " + std::to_string(d.curve_count()) + " FN coordinates, got " +
                                    std::to_string(fn.size()));
    }
    if (static_cast<int>(angles.size()) != d.cone_points) {
        throw std::invalid_argument("expected " + std::to_string(d.cone_points) + " cone angles, got " +
                                    std::to_string(angles.size()));
    }
    for (std::size_t k = 0; k < fn.size(); ++k) {
        if (!(fn[k].length > 0.0) || !std::isfinite(fn[k].length) || !std::isfinite(fn[k].twist)) {
            throw std::invalid_argument("FN coordinate " + std::to_string(k) + " needs a positive length and finite twist");
        }
    }
    std::vector<BlockHolonomy> out;
    out.reserve(d.blocks.size());
    for (const auto& b : d.blocks) {
        std::array<SlotSpec, 3> spec{};
        for (std::size_t i = 0; i < 3; ++i) {
            const Slot& s = b.slots[i];
            const auto idx = static_cast<std::size_t>(s.index);
            spec[i] = s.kind == SlotKind::Cone ? SlotSpec{SlotKind::Cone, angles[idx]}
                                               : SlotSpec{SlotKind::Boundary, fn[idx].length};
        }
        out.push_back(build_block(spec));
    }
    return out;
}

Isometry gluing_map(const BlockHolonomy& block_a, int slot_a, const BlockHolonomy& block_b, int slot_b,
                    double twist) {
    const Isometry& xa = block_a.generators[static_cast<std::size_t>(slot_a)];
    const Isometry& yb = block_b.generators[static_cast<std::size_t>(slot_b)];
    const hyp::GeodesicLine target = hyp::axis(xa.inverse());
    const hyp::GeodesicLine source = hyp::axis(yb);
    const Isometry g0 = frame_at(target, *block_a.seam_feet[static_cast<std::size_t>(slot_a)]) *
                        frame_at(source, *block_b.seam_feet[static_cast<std::size_t>(slot_b)]).inverse();
    return hyp::translation_along(target, twist) * g0;
}

Holonomy glue(const DecompositionPtr& d, const std::vector<BlockHolonomy>& blocks, const FNCoordinates& fn) {
    const auto nblocks = d->blocks.size();
    std::vector<Isometry> maps;
    maps.reserve(d->gluing.size());
    for (const auto& g : d->gluing) {
        maps.push_back(gluing_map(blocks[static_cast<std::size_t>(g.block_a)], g.slot_a,
                                  blocks[static_cast<std::size_t>(g.block_b)], g.slot_b,
                                  fn[static_cast<std::size_t>(g.curve)].twist));
    }

    // Spanning tree from block 0; frame(child) = frame(parent) * G or G^-1.
    std::vector<char> tree_edge(d->gluing.size(), 0);
    auto propagate = [&](const Isometry& root) {
        std::vector<std::optional<Isometry>> frame(nblocks);
        std::fill(tree_edge.begin(), tree_edge.end(), 0);
        frame[0] = root;
        std::queue<int> todo;
        todo.push(0);
        while (!todo.empty()) {
            const int p = todo.front();
            todo.pop();
            for (std::size_t e = 0; e < d->gluing.size(); ++e) {
                const auto& g = d->gluing[e];
                if (g.block_a == g.block_b) continue;
                if (g.block_a == p && !frame[static_cast<std::size_t>(g.block_b)]) {
                    frame[static_cast<std::size_t>(g.block_b)] = *frame[static_cast<std::size_t>(p)] * maps[e];
                    tree_edge[e] = 1;
                    todo.push(g.block_b);
                } else if (g.block_b == p && !frame[static_cast<std::size_t>(g.block_a)]) {
                    frame[static_cast<std::size_t>(g.block_a)] =
                        *frame[static_cast<std::size_t>(p)] * maps[e].inverse();
                    tree_edge[e] = 1;
                    todo.push(g.block_a);
                }
            }
        }
        std::vector<Isometry> out;
        for (const auto& f : frame) {
            if (!f) throw AssemblyError("block graph is disconnected", std::numeric_limits<double>::infinity());
            out.push_back(*f);
        }
        return out;
    };

    // Re-root so that the developed blocks sit around i: the matrices then
    // stay as small as the geometry allows.
    std::vector<Isometry> frame = propagate(Isometry());
    if (nblocks > 1) {
        std::vector<hyp::HypPoint> anchors;
        for (const auto& f : frame) anchors.push_back(f.apply(hyp::HypPoint::i()));
        std::size_t bi = 0, bj = 0;
        double far = -1.0;
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            for (std::size_t j = i + 1; j < anchors.size(); ++j) {
                const double dd = hyp::dist(anchors[i], anchors[j]);
                if (dd > far) {
                    far = dd;
                    bi = i;
                    bj = j;
                }
            }
        }
        const hyp::HypPoint q = hyp::geodesic_point(anchors[bi], anchors[bj], 0.5);
        frame = propagate(Isometry::from_matrix(1.0, -q.x(), 0.0, q.y()));
    }

    Holonomy h;
    h.decomposition = d;
    for (const auto& gd : d->marking.generators) {
        if (gd.kind == GeneratorDef::Kind::BlockSlot) {
            const Isometry& x = blocks[static_cast<std::size_t>(gd.block)].generators[static_cast<std::size_t>(gd.slot)];
            h.images.push_back(hyp::conjugate(frame[static_cast<std::size_t>(gd.block)], x));
        } else {
            const auto e = static_cast<std::size_t>(gd.gluing);
            if (tree_edge[e]) throw AssemblyError("stable letter assigned to a tree gluing", 0.0);
            const auto& g = d->gluing[e];
            h.images.push_back(frame[static_cast<std::size_t>(g.block_a)] * maps[e] *
                               frame[static_cast<std::size_t>(g.block_b)].inverse());
        }
    }
    return h;
}

}  // namespace detail

double Holonomy::relator_residual() const {
    return image(decomposition->marking.relator).distance(Isometry());
}

double Holonomy::peripheral_residual(const ConeAngles& angles) const {
    double worst = 0.0;
    const auto& per = decomposition->marking.peripheral;
    for (std::size_t i = 0; i < per.size(); ++i) {
        const auto c = hyp::classify(image(per[i]));
        if (const auto* e = std::get_if<hyp::Elliptic>(&c)) {
            worst = std::max(worst, std::abs(e->angle - angles[i]));
        } else {
            return std::numeric_limits<double>::infinity();
        }
    }
    return worst;
}

Holonomy assemble_holonomy(const DecompositionPtr& decomposition, const FNCoordinates& fn, const ConeAngles& angles) {
    if (!decomposition) throw std::invalid_argument("missing decomposition");
    return detail::glue(decomposition, detail::build_blocks(*decomposition, fn, angles), fn);
}

ConeSurface ConeSurface::assemble(DecompositionPtr decomposition, FNCoordinates fn, ConeAngles angles) {
    Holonomy h = assemble_holonomy(decomposition, fn, angles);
    const double rel = h.relator_residual();
    if (!(rel <= 1e-9)) {
        std::ostringstream os;
        os << "relator residual " << rel << " exceeds 1e-9";
        throw AssemblyError(os.str(), rel);
    }
    const double per = h.peripheral_residual(angles);
    if (!(per <= 1e-9)) {
        std::ostringstream os;
        os << "peripheral angle residual " << per << " exceeds 1e-9";
        throw AssemblyError(os.str(), per);
    }
    return ConeSurface(std::move(angles), std::move(fn), std::move(h));
}

}  // namespace qf::surface
