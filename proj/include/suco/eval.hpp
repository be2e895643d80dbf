#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "suco/core.hpp"
#include "suco/subspace.hpp"

namespace suco {

/// Exact nearest neighbors for a query set: entries[q] holds the k closest
/// base ids with true Euclidean distances, ascending, ties by id.
struct GroundTruth {
    std::uint32_t k = 0;
    std::vector<std::vector<Neighbor>> entries;
};

/// Mean SC-score per exact-NN rank over a query set: mean_scores[r] is the
/// average score of each query's (r+1)-th nearest point, in [0, N_s].
struct ScoreRankProfile {
    std::vector<double> mean_scores;
};

/// Exhaustive top-k scan; the oracle every approximate result is measured
/// against, so it shares no selection code with the query paths. Throws
/// ContractError when k < 1, k > n, or the query length is wrong.
QueryResult exact_knn(const Dataset& dataset, std::span<const float> query, std::uint32_t k);

/// |result ids ∩ exact top-k ids| / k. `truth` is one query's ground-truth
/// row with at least k entries; the result must carry at most k.
double recall(const QueryResult& result, std::span<const Neighbor> truth, std::uint32_t k);

/// Mean over ranks of (result_dist - true_dist) / true_dist for the first k
/// entries of both lists. Ranks whose true distance is 0 are dropped; if
/// every rank is dropped the value is 0 when the result distances are all 0
/// there, +infinity otherwise.
double mre(const QueryResult& result, std::span<const Neighbor> truth, std::uint32_t k);

/// For each query: rank all points by exact full-space distance (ties by
/// id), look up each rank's collision score, and average per rank over the
/// queries. Scores accumulate in integers, so the result is thread-count
/// independent.
ScoreRankProfile score_rank_profile(const Dataset& dataset, const SubspaceLayout& layout,
                                    const Dataset& queries, double alpha, unsigned threads = 0);

/// exact_knn over every query row, parallel across queries.
GroundTruth compute_ground_truth(const Dataset& base, const Dataset& queries, std::uint32_t k,
                                 unsigned threads = 0);

/// Persists a ground truth as an ivecs file of ids plus an fvecs file of
/// distances (one record per query; distances narrow to f32).
void save_ground_truth(const GroundTruth& truth, const std::string& ids_path,
                       const std::string& dists_path);

/// Reads the pair written by save_ground_truth, validating that the files
/// agree on shape and that every row is ascending with valid ids.
GroundTruth load_ground_truth(const std::string& ids_path, const std::string& dists_path);

/// Loads the ground truth from `cache_dir` when a pair keyed by
/// (base hash, queries hash, k) exists and is readable; otherwise computes,
/// stores, and returns it. Creates the directory as needed.
GroundTruth cached_ground_truth(const Dataset& base, const Dataset& queries, std::uint32_t k,
                                const std::string& cache_dir, unsigned threads = 0);

}  // namespace suco
