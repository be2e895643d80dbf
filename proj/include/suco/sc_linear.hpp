#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "suco/core.hpp"
#include "suco/subspace.hpp"

namespace suco {

/// Per-point collision tally: scores[i] is the number of subspaces in which
/// point i is one of the alpha*n nearest neighbors of the query, so every
/// entry lies in [0, N_s].
struct ScScores {
    std::vector<std::uint32_t> scores;
};

/// Query-time knobs shared by the linear baseline and the indexed search.
/// alpha is the per-subspace collision ratio, beta the fraction of the
/// dataset re-ranked with exact distances, k the result count.
struct CollisionParams {
    double alpha = 0.05;
    double beta = 0.005;
    std::uint32_t k = 50;

    /// Throws ConfigError unless 0 < alpha <= 1, 0 < beta <= 1, and
    /// 1 <= k <= n. The candidate pool is max(k, ceil(beta*n)), so k never
    /// exceeds the number of candidates.
    void validate(std::uint64_t n) const;
};

/// Number of per-subspace collisions: max(1, floor(alpha*n)), with the
/// product snapped to the nearest integer when within 1e-6 so ratios that
/// are exact in decimal stay exact despite binary rounding.
std::uint64_t collision_count(double alpha, std::uint64_t n);

/// Size of the re-rank candidate pool: max(k, ceil(beta*n)), snapped the
/// same way as collision_count.
std::uint64_t candidate_count(double beta, std::uint64_t n, std::uint64_t k);

/// For each subspace, finds the collision_count(alpha, n) points with the
/// smallest projected squared distance to the query (ties by lower point id)
/// and increments their scores.
ScScores compute_sc_scores(const Dataset& dataset, const SubspaceLayout& layout,
                           std::span<const float> query, double alpha);

/// The index-free baseline: collision counting over all subspaces, then the
/// candidate_count(beta, n, k) best-scoring points (score descending, id
/// ascending) are re-ranked by full-space Euclidean distance. Returns the
/// top-k, ties by id. With beta = 1 this degenerates to exhaustive search.
QueryResult sc_linear_query(const Dataset& dataset, const SubspaceLayout& layout,
                            std::span<const float> query, const CollisionParams& params);

}  // namespace suco
