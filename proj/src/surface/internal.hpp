#pragma once

#include <vector>

#include "qf/surface.hpp"

namespace qf::surface::detail {

std::vector<BlockHolonomy> build_blocks(const BlockDecomposition& d, const FNCoordinates& fn,
                                        const ConeAngles& angles);

/// Map G with G Y_b G^-1 = X_a^-1, seam feet matched, then slid by the twist.
Isometry gluing_map(const BlockHolonomy& block_a, int slot_a, const BlockHolonomy& block_b, int slot_b,
                    double twist);

/// Glue prebuilt blocks; only the twists of `fn` are read.
Holonomy glue(const DecompositionPtr& d, const std::vector<BlockHolonomy>& blocks, const FNCoordinates& fn);

}  // namespace qf::surface::detail
