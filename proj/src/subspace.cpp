#include "suco/subspace.hpp"

#include <numeric>
#include <string>

#include "suco/rng.hpp"

namespace suco {

SubspaceLayout sample_subspaces(std::uint32_t d, std::uint32_t num_subspaces,
                                SubspaceMode mode, std::uint64_t seed) {
    if (num_subspaces < 2) {
        throw ConfigError("sample_subspaces: need at least 2 subspaces, got " +
                          std::to_string(num_subspaces));
    }
    const std::uint32_t s = d / num_subspaces;
    if (s < 2) {
        throw ConfigError("sample_subspaces: floor(d/num_subspaces) = " + std::to_string(s) +
                          " leaves a subspace half empty (d=" + std::to_string(d) +
                          ", num_subspaces=" + std::to_string(num_subspaces) + ")");
    }

    std::vector<std::uint32_t> dims(d);
    std::iota(dims.begin(), dims.end(), 0U);
    if (mode == SubspaceMode::Shuffled) {
        std::mt19937_64 rng(seed);
        deterministic_shuffle(dims, rng);
    }

    SubspaceLayout layout;
    layout.d = d;
    layout.num_subspaces = num_subspaces;
    layout.seed = seed;
    layout.mode = mode;
    layout.subspaces.resize(num_subspaces);
    layout.half_split.resize(num_subspaces);
    for (std::uint32_t i = 0; i < num_subspaces; ++i) {
        const std::uint32_t begin = s * i;
        const std::uint32_t end = (i + 1 == num_subspaces) ? d : s * (i + 1);
        layout.subspaces[i].assign(dims.begin() + begin, dims.begin() + end);
        layout.half_split[i] = static_cast<std::uint32_t>(layout.subspaces[i].size()) / 2;
    }
    return layout;
}

namespace {

std::pair<std::size_t, std::size_t> half_range(const SubspaceLayout& layout,
                                               std::uint32_t subspace_index, Half half) {
    const auto& dims = layout.subspaces[subspace_index];
    const std::size_t split = layout.half_split[subspace_index];
    switch (half) {
        case Half::First: return {0, split};
        case Half::Second: return {split, dims.size()};
        default: return {0, dims.size()};
    }
}

void check_projection_args(std::span<const float> point, const SubspaceLayout& layout,
                           std::uint32_t subspace_index) {
    if (subspace_index >= layout.num_subspaces) {
        throw ContractError("project: subspace index " + std::to_string(subspace_index) +
                            " out of range [0, " + std::to_string(layout.num_subspaces) + ")");
    }
    if (point.size() != layout.d) {
        throw ContractError("project: point has " + std::to_string(point.size()) +
                            " components, layout expects " + std::to_string(layout.d));
    }
}

}  // namespace

std::vector<float> project(std::span<const float> point, const SubspaceLayout& layout,
                           std::uint32_t subspace_index, Half half) {
    check_projection_args(point, layout, subspace_index);
    const auto [lo, hi] = half_range(layout, subspace_index, half);
    const auto& dims = layout.subspaces[subspace_index];
    std::vector<float> out(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) out[k - lo] = point[dims[k]];
    return out;
}

void project_into(std::span<const float> point, const SubspaceLayout& layout,
                  std::uint32_t subspace_index, Half half, std::span<float> out) {
    check_projection_args(point, layout, subspace_index);
    const auto [lo, hi] = half_range(layout, subspace_index, half);
    if (out.size() != hi - lo) {
        throw ContractError("project_into: output span has wrong length");
    }
    const auto& dims = layout.subspaces[subspace_index];
    for (std::size_t k = lo; k < hi; ++k) out[k - lo] = point[dims[k]];
}

std::optional<std::uint32_t> consecutive_start(const SubspaceLayout& layout,
                                               std::uint32_t subspace_index, Half half) {
    const auto [lo, hi] = half_range(layout, subspace_index, half);
    const auto& dims = layout.subspaces[subspace_index];
    if (lo == hi) return std::nullopt;
    for (std::size_t k = lo + 1; k < hi; ++k) {
        if (dims[k] != dims[k - 1] + 1) return std::nullopt;
    }
    return dims[lo];
}

double sq_euclidean_projected(std::span<const float> point, const SubspaceLayout& layout,
                              std::uint32_t subspace_index, Half half,
                              std::span<const float> query_sub) {
    check_projection_args(point, layout, subspace_index);
    const auto [lo, hi] = half_range(layout, subspace_index, half);
    if (query_sub.size() != hi - lo) {
        throw ContractError("sq_euclidean_projected: projected query has wrong length");
    }
    const auto& dims = layout.subspaces[subspace_index];
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        const double diff = static_cast<double>(point[dims[k]]) -
                            static_cast<double>(query_sub[k - lo]);
        acc += diff * diff;
    }
    return acc;
}

}  // namespace suco
