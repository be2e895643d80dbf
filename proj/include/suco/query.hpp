#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "suco/core.hpp"
#include "suco/index.hpp"
#include "suco/sc_linear.hpp"
#include "suco/subspace.hpp"

namespace suco {

/// Distances from a projected query half to one half's k_half centroids,
/// plus the permutation of [0, k_half) that sorts them ascending (ties by
/// centroid id). Distances are true Euclidean: sums of per-half values drive
/// the cell traversal order, and sums of square roots order differently
/// than sums of squares.
struct CentroidDistances {
    std::vector<double> dists;
    std::vector<std::uint32_t> order;
};

/// Computes CentroidDistances for one half. `centroids` is k_half x dim
/// row-major with dim = half_query.size(); throws ContractError when the
/// sizes disagree.
CentroidDistances centroid_distances(std::span<const float> half_query,
                                     std::span<const float> centroids, std::uint32_t k_half);

/// One traversal step: the IMI cell retrieved (centroid ids, not ranks), the
/// cumulative point count including this cell, and the cell's sum-distance
/// dists1[c1] + dists2[c2].
struct RetrievedCell {
    std::uint32_t c1;
    std::uint32_t c2;
    std::uint64_t cumulative;
    double sum_dist;

    friend bool operator==(const RetrievedCell&, const RetrievedCell&) = default;
};

/// Cells in retrieval order: sum_dist is non-decreasing and cumulative
/// grows by each cell's size.
struct RetrievedClusters {
    std::vector<RetrievedCell> cells;

    friend bool operator==(const RetrievedClusters&, const RetrievedClusters&) = default;
};

/// Best-first IMI cell traversal without a priority queue. Retrieves cells
/// in non-decreasing dists1[c1] + dists2[c2] order (ties: smaller first-half
/// rank, then smaller second-half rank) until the cumulative point count
/// reaches collision_count(alpha, n). Keeps one cursor per first-half rank
/// (+infinity once a row is exhausted or not yet activated); a row's first
/// retrieval activates the next row, and the next cell is found by an argmin
/// scan over the activated prefix.
RetrievedClusters dynamic_activation(double alpha, std::uint64_t n, const CentroidDistances& cd1,
                                     const CentroidDistances& cd2, const Imi& imi);

/// Priority-queue baseline with the same contract and, by sharing the
/// (sum, rank1, rank2) total order, the exact same output sequence as
/// dynamic_activation. Seeds the heap at rank cell (0, 0) and pushes rank
/// neighbors (i+1, j) and (i, j+1) with de-duplication.
RetrievedClusters multi_sequence(double alpha, std::uint64_t n, const CentroidDistances& cd1,
                                 const CentroidDistances& cd2, const Imi& imi);

enum class TraversalKind {
    DynamicActivation,
    MultiSequence,
};

/// Reusable per-query buffers; queries running on different threads must use
/// different scratch objects.
struct QueryScratch {
    std::vector<std::uint32_t> scores;
    std::vector<PointId> touched;
    std::vector<float> half_query;
};

/// Exact distances over the candidate ids only: top-k ascending by
/// full-space Euclidean distance, ties by id. Candidates must be unique,
/// valid ids with k <= |candidates|; throws ContractError otherwise.
QueryResult rerank(const Dataset& dataset, std::span<const float> query,
                   std::span<const PointId> candidates, std::uint32_t k);

/// Full indexed k-ANN query. Per subspace: project the query into both
/// halves, compute centroid distances, traverse the IMI, and give every
/// point in every retrieved cell one collision. The candidate_count(beta, n,
/// k) best-scoring points (score descending, id ascending; points in no
/// retrieved cell score 0) are then re-ranked exactly.
/// Throws IncompatibilityError when the dataset does not match the index,
/// ConfigError on invalid params, ContractError on a bad query length.
QueryResult knn_query(const SucoIndex& index, const Dataset& dataset,
                      std::span<const float> query, const CollisionParams& params,
                      TraversalKind traversal = TraversalKind::DynamicActivation,
                      QueryScratch* scratch = nullptr);

}  // namespace suco
