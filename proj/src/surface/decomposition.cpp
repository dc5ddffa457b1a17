#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "qf/error.hpp"
#include "qf/surface.hpp"

namespace qf::surface {

ConeAngles::ConeAngles(std::vector<double> angles) : angles_(std::move(angles)) {
    for (std::size_t i = 0; i < angles_.size(); ++i) {
        double a = angles_[i];
        if (!(a > 0.0 && a < hyp::kPi)) {
            throw std::invalid_argument("cone angle " + std::to_string(i) + " = " + std::to_string(a) +
                                        " is outside (0, pi)");
        }
    }
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error("invalid decomposition: " + what);
}

}  // namespace

void BlockDecomposition::validate() const {
    require(genus >= 0 && cone_points >= 0, "negative genus or cone count");
    require(6 * genus - 6 + 2 * cone_points > 0, "6g - 6 + 2n must be positive");
    const int expected_blocks = 2 * genus - 2 + cone_points;
    const int expected_curves = 3 * genus - 3 + cone_points;
    require(static_cast<int>(blocks.size()) == expected_blocks,
            "expected " + std::to_string(expected_blocks) + " blocks");
    require(static_cast<int>(gluing.size()) == expected_curves,
            "expected " + std::to_string(expected_curves) + " gluings");

    std::vector<int> cone_seen(static_cast<std::size_t>(cone_points), 0);
    std::vector<int> curve_seen(static_cast<std::size_t>(expected_curves), 0);
    for (const auto& b : blocks) {
        require(b.slots[2].kind == SlotKind::Boundary, "third slot of every block must be a boundary");
        for (const auto& s : b.slots) {
            if (s.kind == SlotKind::Cone) {
                require(s.index >= 0 && s.index < cone_points, "cone index out of range");
                ++cone_seen[static_cast<std::size_t>(s.index)];
            } else {
                require(s.index >= 0 && s.index < expected_curves, "curve index out of range");
                ++curve_seen[static_cast<std::size_t>(s.index)];
            }
        }
    }
    for (int c : cone_seen) require(c == 1, "every cone point must occupy exactly one slot");
    for (int c : curve_seen) require(c == 2, "every pants curve must bound exactly two slots");

    std::vector<int> glued(static_cast<std::size_t>(expected_curves), 0);
    for (const auto& g : gluing) {
        require(g.curve >= 0 && g.curve < expected_curves, "gluing curve out of range");
        ++glued[static_cast<std::size_t>(g.curve)];
        for (auto [blk, slot] : {std::pair{g.block_a, g.slot_a}, std::pair{g.block_b, g.slot_b}}) {
            require(blk >= 0 && blk < static_cast<int>(blocks.size()) && slot >= 0 && slot < 3,
                    "gluing references a missing slot");
            const Slot& s = blocks[static_cast<std::size_t>(blk)].slots[static_cast<std::size_t>(slot)];
            require(s.kind == SlotKind::Boundary && s.index == g.curve, "gluing slot does not carry its curve");
        }
        require(!(g.block_a == g.block_b && g.slot_a == g.slot_b), "gluing must pair two distinct slots");
    }
    for (int c : glued) require(c == 1, "every curve must be glued exactly once");

    // Block graph connected.
    std::vector<char> seen(blocks.size(), 0);
    std::queue<int> todo;
    todo.push(0);
    seen[0] = 1;
    while (!todo.empty()) {
        int b = todo.front();
        todo.pop();
        for (const auto& g : gluing) {
            for (auto [x, y] : {std::pair{g.block_a, g.block_b}, std::pair{g.block_b, g.block_a}}) {
                if (x == b && !seen[static_cast<std::size_t>(y)]) {
                    seen[static_cast<std::size_t>(y)] = 1;
                    todo.push(y);
                }
            }
        }
    }
    require(std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; }), "block graph is disconnected");

    const auto& m = marking;
    const int ngen = generator_count();
    for (const auto& gd : m.generators) {
        if (gd.kind == GeneratorDef::Kind::BlockSlot) {
            require(gd.block >= 0 && gd.block < static_cast<int>(blocks.size()) && gd.slot >= 0 && gd.slot < 3,
                    "generator references a missing slot");
        } else {
            require(gd.gluing >= 0 && gd.gluing < static_cast<int>(gluing.size()),
                    "stable generator references a missing gluing");
        }
    }
    auto word_ok = [&](const Word& w) {
        return std::all_of(w.begin(), w.end(), [&](int x) { return x != 0 && std::abs(x) <= ngen; });
    };
    require(word_ok(m.relator) && !m.relator.empty(), "relator letters out of range");
    require(static_cast<int>(m.peripheral.size()) == cone_points, "one peripheral word per cone point");
    for (const auto& w : m.peripheral) require(word_ok(w), "peripheral word letters out of range");
    require(static_cast<int>(m.pants.size()) == expected_curves, "one pants word per curve");
    require(m.transversals.size() == m.pants.size() && m.products.size() == m.pants.size(),
            "one transversal and one product word per pants curve");
    for (const auto* list : {&m.pants, &m.transversals, &m.products}) {
        for (const auto& c : *list) require(word_ok(c.word) && !c.word.empty(), "curve word out of range: " + c.name);
    }
    require(m.domain_vertices.size() == m.domain_sides.size(), "domain needs one side per vertex");
    const auto nsides = static_cast<int>(m.domain_sides.size());
    for (int k = 0; k < nsides; ++k) {
        const auto& s = m.domain_sides[static_cast<std::size_t>(k)];
        require(s.paired >= 0 && s.paired < nsides && s.paired != k, "domain side pairing out of range");
        const auto& back = m.domain_sides[static_cast<std::size_t>(s.paired)];
        require(back.paired == k, "domain side pairing is not an involution");
        require(word_ok(s.pairing), "domain pairing letters out of range");
        require(reduce(concat(s.pairing, back.pairing)).empty(), "paired sides must carry inverse words");
    }
    for (const auto& v : m.domain_vertices) {
        require(v.cone >= 0 && v.cone < cone_points && word_ok(v.word), "domain vertex out of range");
    }
    const FreeElimination fg = free_group();
    require(static_cast<int>(m.generator_sides.size()) == ngen, "one side-pairing word per generator");
    for (int g = 0; g < ngen; ++g) {
        Word expanded;
        for (int x : m.generator_sides[static_cast<std::size_t>(g)]) {
            require(x != 0 && std::abs(x) <= nsides, "side letter out of range");
            const Word& w = m.domain_sides[static_cast<std::size_t>(std::abs(x) - 1)].pairing;
            const Word piece = x > 0 ? w : inverse(w);
            expanded.insert(expanded.end(), piece.begin(), piece.end());
        }
        require(fg.equal(expanded, Word{g + 1}), "side-pairing word of generator " + std::to_string(g + 1) + " is wrong");
    }
}

FreeElimination BlockDecomposition::free_group() const {
    return FreeElimination(generator_count(), marking.relator);
}

BlockDecomposition BlockDecomposition::chain_sphere(int n) {
    if (n < 4) throw std::invalid_argument("chain sphere needs at least four cone points");
    BlockDecomposition d;
    d.kind = "chain_sphere";
    d.genus = 0;
    d.cone_points = n;
    const int nblocks = n - 2;
    const int ncurves = n - 3;

    auto cone = [](int i) { return Slot{SlotKind::Cone, i}; };
    auto bd = [](int k) { return Slot{SlotKind::Boundary, k}; };
    d.blocks.push_back(Block{{cone(0), cone(1), bd(0)}});
    for (int k = 1; k <= n - 4; ++k) d.blocks.push_back(Block{{bd(k - 1), cone(k + 1), bd(k)}});
    d.blocks.push_back(Block{{cone(n - 2), cone(n - 1), bd(ncurves - 1)}});

    for (int k = 0; k < ncurves - 1; ++k) d.gluing.push_back(Gluing{k, k, 2, k + 1, 0});
    d.gluing.push_back(Gluing{ncurves - 1, nblocks - 2, 2, nblocks - 1, 2});

    auto& m = d.marking;
    using K = GeneratorDef::Kind;
    m.generators.push_back({K::BlockSlot, 0, 0, -1, "c1"});
    m.generators.push_back({K::BlockSlot, 0, 1, -1, "c2"});
    for (int k = 1; k <= n - 4; ++k) m.generators.push_back({K::BlockSlot, k, 1, -1, "c" + std::to_string(k + 2)});
    m.generators.push_back({K::BlockSlot, nblocks - 1, 0, -1, "c" + std::to_string(n - 1)});
    m.generators.push_back({K::BlockSlot, nblocks - 1, 1, -1, "c" + std::to_string(n)});

    m.relator.resize(static_cast<std::size_t>(n));
    std::iota(m.relator.begin(), m.relator.end(), 1);
    for (int i = 1; i <= n; ++i) m.peripheral.push_back(Word{i});

    for (int k = 0; k < ncurves; ++k) {
        Word gamma(static_cast<std::size_t>(k + 2));
        std::iota(gamma.begin(), gamma.end(), 1);
        Word delta{k + 2, k + 3};
        const std::string id = std::to_string(k);
        m.pants.push_back(CurveClass{"pants" + id, gamma, true, std::nullopt});
        m.transversals.push_back(CurveClass{"transversal" + id, delta, true, std::nullopt});
        m.products.push_back(CurveClass{"product" + id, concat(delta, gamma), false, std::nullopt});
        m.transversal_intersections.push_back(2);
    }

    // Cut along the arcs P1-P2-...-Pn joining consecutive cone points:
    // vertices P1..Pn then Q(n-1)..Q2 with Qk = (c1...c(k-1)) Pk.
    for (int k = 1; k <= n; ++k) m.domain_vertices.push_back(DomainVertex{k - 1, {}});
    for (int k = n - 1; k >= 2; --k) {
        Word w(static_cast<std::size_t>(k - 1));
        std::iota(w.begin(), w.end(), 1);
        m.domain_vertices.push_back(DomainVertex{k - 1, w});
    }
    const int nsides = 2 * n - 2;
    m.domain_sides.resize(static_cast<std::size_t>(nsides));
    for (int k = 1; k <= n - 1; ++k) {
        Word s(static_cast<std::size_t>(k));
        std::iota(s.begin(), s.end(), 1);
        const int p_side = k - 1;
        const int q_side = 2 * n - 2 - k;
        m.domain_sides[static_cast<std::size_t>(q_side)] = DomainSide{p_side, s};
        m.domain_sides[static_cast<std::size_t>(p_side)] = DomainSide{q_side, inverse(s)};
    }
    // c1 = s1, ck = s(k-1)^-1 sk, cn = s(n-1)^-1 where sk is the pairing of side 2n-2-k.
    auto q_letter = [n](int k) { return 2 * n - 2 - k + 1; };
    m.generator_sides.push_back({q_letter(1)});
    for (int k = 2; k <= n - 1; ++k) m.generator_sides.push_back({-q_letter(k - 1), q_letter(k)});
    m.generator_sides.push_back({-q_letter(n - 1)});
    d.validate();
    return d;
}

BlockDecomposition BlockDecomposition::cone_torus() {
    BlockDecomposition d;
    d.kind = "cone_torus";
    d.genus = 1;
    d.cone_points = 1;
    d.blocks.push_back(Block{{Slot{SlotKind::Cone, 0}, Slot{SlotKind::Boundary, 0}, Slot{SlotKind::Boundary, 0}}});
    d.gluing.push_back(Gluing{0, 0, 2, 0, 1});

    auto& m = d.marking;
    using K = GeneratorDef::Kind;
    // s: stable letter with s B s^-1 = C^-1; B, A: block slots.
    m.generators.push_back({K::Stable, -1, -1, 0, "s"});
    m.generators.push_back({K::BlockSlot, 0, 1, -1, "b"});
    m.generators.push_back({K::BlockSlot, 0, 0, -1, "a"});
    m.relator = {1, 2, -1, -2, -3};
    m.peripheral = {Word{3}};
    m.pants.push_back(CurveClass{"pants0", {2}, true, std::nullopt});
    m.transversals.push_back(CurveClass{"transversal0", {1}, true, std::nullopt});
    m.products.push_back(CurveClass{"product0", {1, 2}, true, std::nullopt});
    m.transversal_intersections.push_back(1);

    // Quadrilateral P, s^-1 P, s^-1 b^-1 P, b^-1 P.
    m.domain_vertices = {{0, {}}, {0, {-1}}, {0, {-1, -2}}, {0, {-2}}};
    m.domain_sides = {{2, {2}}, {3, {-1}}, {0, {-2}}, {1, {1}}};
    m.generator_sides = {{4}, {1}, {4, 1, -4, -1}};
    d.validate();
    return d;
}

}  // namespace qf::surface
