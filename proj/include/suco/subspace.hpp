#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "suco/core.hpp"

namespace suco {

enum class SubspaceMode : std::uint32_t {
    Contiguous = 0,  ///< subspace i takes the block of dimensions [s*i, s*(i+1))
    Shuffled = 1,    ///< a seeded permutation of 0..d-1 is block-split the same way
};

enum class Half {
    First,
    Second,
    Whole,
};

/// Disjoint partition of the d dimension indices into num_subspaces groups,
/// each split into two halves at floor(s_i / 2). Subspaces 0..N_s-2 hold
/// exactly floor(d / N_s) dimensions; the last picks up the remainder.
/// Immutable after creation.
struct SubspaceLayout {
    std::uint32_t d = 0;
    std::uint32_t num_subspaces = 0;
    std::uint64_t seed = 0;
    SubspaceMode mode = SubspaceMode::Contiguous;
    /// Per subspace: the dimension indices it selects, in projection order.
    std::vector<std::vector<std::uint32_t>> subspaces;
    /// Per subspace: count of dimensions in the first half.
    std::vector<std::uint32_t> half_split;

    std::uint32_t subspace_dim(std::uint32_t i) const {
        return static_cast<std::uint32_t>(subspaces[i].size());
    }
    std::uint32_t half_dim(std::uint32_t i, Half half) const {
        const auto s = subspace_dim(i);
        switch (half) {
            case Half::First: return half_split[i];
            case Half::Second: return s - half_split[i];
            default: return s;
        }
    }

    friend bool operator==(const SubspaceLayout&, const SubspaceLayout&) = default;
};

/// Builds the layout for (d, num_subspaces). Contiguous mode assigns plain
/// blocks; shuffled mode first applies a seed-deterministic uniform
/// permutation of the dimension indices, then the same block split.
/// Identical inputs produce bit-identical layouts.
/// Throws ConfigError when floor(d / num_subspaces) < 2 (a half would be
/// empty) or num_subspaces < 2.
SubspaceLayout sample_subspaces(std::uint32_t d, std::uint32_t num_subspaces,
                                SubspaceMode mode, std::uint64_t seed);

/// Components of `point` at the selected subspace's (half's) dimension
/// indices, in layout order. Throws ContractError on a bad subspace index or
/// a point whose length differs from the layout's d.
std::vector<float> project(std::span<const float> point, const SubspaceLayout& layout,
                           std::uint32_t subspace_index, Half half);

/// Gather variant writing into caller storage sized half_dim(i, half).
void project_into(std::span<const float> point, const SubspaceLayout& layout,
                  std::uint32_t subspace_index, Half half, std::span<float> out);

/// Squared distance between `point` and `query_sub` restricted to one
/// subspace (or half), where `query_sub` is already projected. Avoids
/// materializing per-point projections.
double sq_euclidean_projected(std::span<const float> point, const SubspaceLayout& layout,
                              std::uint32_t subspace_index, Half half,
                              std::span<const float> query_sub);

/// When the selected half's dimension indices form one consecutive run,
/// returns the first index; hot loops then use a plain slice kernel instead
/// of a gather.
std::optional<std::uint32_t> consecutive_start(const SubspaceLayout& layout,
                                               std::uint32_t subspace_index, Half half);

}  // namespace suco
