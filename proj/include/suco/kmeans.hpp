#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "suco/core.hpp"

namespace suco {

using ClusterId = std::uint32_t;

/// Centroids and per-point assignments produced by one k-means run over a
/// half-subspace. Assignments are nearest-centroid consistent with the
/// returned centroids (ties to the lower cluster id).
struct KMeansModel {
    std::uint32_t k = 0;
    std::uint32_t dim = 0;
    std::vector<float> centroids;        ///< k x dim, row-major
    std::vector<ClusterId> assignments;  ///< length n, each < k
    /// Cluster ids that emptied at some iteration and were reseeded; such a
    /// cluster may legitimately end with zero members.
    std::vector<ClusterId> repaired;

    std::span<const float> centroid(std::uint32_t c) const {
        return {centroids.data() + static_cast<std::size_t>(c) * dim, dim};
    }
};

/// Per-run diagnostics; wcss[i] is the within-cluster sum of squares
/// measured at the assignment step of Lloyd iteration i.
struct KMeansStats {
    std::vector<double> wcss;
};

/// Seeded k-means++ initialization followed by exactly `iterations` Lloyd
/// rounds, then a final assignment pass against the final centroids.
/// Deterministic for a given (points, k, iterations, seed) regardless of the
/// thread budget: assignments are embarrassingly parallel over fixed-size
/// chunks and centroid updates reduce serially in point order.
///
/// A cluster that empties during an update is reseeded to the point farthest
/// (squared) from its current centroid, ties to the lowest point id.
///
/// Throws ConfigError when n < k, k < 1, or iterations < 1.
KMeansModel kmeans(const float* points, std::uint64_t n, std::uint32_t dim, std::uint32_t k,
                   std::uint32_t iterations, std::uint64_t seed, unsigned threads = 1,
                   KMeansStats* stats = nullptr);

}  // namespace suco
