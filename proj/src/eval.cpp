#include "suco/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "suco/io.hpp"
#include "suco/parallel.hpp"
#include "suco/sc_linear.hpp"

namespace suco {

namespace {

// (distance, id) ascending; distances may be squared or true as long as
// both operands agree, since the square root is order-preserving.
bool closer(const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.id < b.id;
}

}  // namespace

QueryResult exact_knn(const Dataset& dataset, std::span<const float> query, std::uint32_t k) {
    const std::uint64_t n = dataset.size();
    const std::uint32_t d = dataset.dim();
    if (query.size() != d) {
        throw ContractError("query length " + std::to_string(query.size()) +
                            " does not match dataset d = " + std::to_string(d));
    }
    if (k < 1 || k > n) {
        throw ContractError("k must be in [1, n]; got k = " + std::to_string(k) + ", n = " +
                            std::to_string(n));
    }

    // Bounded max-heap over squared distances: the worst kept neighbor sits
    // on top and is evicted whenever a closer point appears.
    std::priority_queue<Neighbor, std::vector<Neighbor>, decltype(&closer)> worst(&closer);
    for (std::uint64_t i = 0; i < n; ++i) {
        const Neighbor cand{static_cast<PointId>(i),
                            detail::sq_euclidean_raw(dataset.data() + i * d, query.data(), d)};
        if (worst.size() < k) {
            worst.push(cand);
        } else if (closer(cand, worst.top())) {
            worst.pop();
            worst.push(cand);
        }
    }

    QueryResult out;
    out.entries.resize(worst.size());
    for (std::size_t i = worst.size(); i-- > 0;) {
        out.entries[i] = worst.top();
        worst.pop();
    }
    for (Neighbor& nb : out.entries) nb.distance = std::sqrt(nb.distance);
    return out;
}

double recall(const QueryResult& result, std::span<const Neighbor> truth, std::uint32_t k) {
    if (k < 1) throw ContractError("recall: k must be >= 1");
    if (truth.size() < k) throw ContractError("recall: ground truth has fewer than k entries");
    if (result.entries.size() > k) {
        throw ContractError("recall: result holds more than k entries");
    }
    std::vector<PointId> truth_ids(k);
    for (std::uint32_t r = 0; r < k; ++r) truth_ids[r] = truth[r].id;
    std::sort(truth_ids.begin(), truth_ids.end());

    std::uint32_t hits = 0;
    for (const Neighbor& nb : result.entries) {
        if (std::binary_search(truth_ids.begin(), truth_ids.end(), nb.id)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

double mre(const QueryResult& result, std::span<const Neighbor> truth, std::uint32_t k) {
    if (k < 1) throw ContractError("mre: k must be >= 1");
    if (truth.size() < k || result.entries.size() < k) {
        throw ContractError("mre: both lists must hold at least k entries");
    }
    double sum = 0.0;
    std::uint32_t included = 0;
    bool zero_ranks_clean = true;
    for (std::uint32_t r = 0; r < k; ++r) {
        const double true_dist = truth[r].distance;
        if (true_dist == 0.0) {
            if (result.entries[r].distance != 0.0) zero_ranks_clean = false;
            continue;
        }
        sum += (result.entries[r].distance - true_dist) / true_dist;
        ++included;
    }
    if (included > 0) return sum / included;
    return zero_ranks_clean ? 0.0 : std::numeric_limits<double>::infinity();
}

ScoreRankProfile score_rank_profile(const Dataset& dataset, const SubspaceLayout& layout,
                                    const Dataset& queries, double alpha, unsigned threads) {
    const std::uint64_t n = dataset.size();
    const std::uint64_t nq = queries.size();
    if (queries.dim() != dataset.dim()) {
        throw ContractError("query set dimensionality does not match the dataset");
    }

    // Integer partial sums per chunk, combined in chunk order.
    constexpr std::size_t kQueriesPerChunk = 4;
    const std::size_t chunks = chunk_count(nq, kQueriesPerChunk);
    std::vector<std::vector<std::uint64_t>> partial(chunks);
    parallel_chunks(nq, threads, kQueriesPerChunk,
                    [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
        auto& sums = partial[chunk];
        sums.assign(n, 0);
        std::vector<double> dists(n);
        std::vector<PointId> order(n);
        for (std::size_t qi = lo; qi < hi; ++qi) {
            const auto q = queries.row(qi);
            const ScScores tally = compute_sc_scores(dataset, layout, q, alpha);
            for (std::uint64_t i = 0; i < n; ++i) {
                dists[i] = detail::sq_euclidean_raw(dataset.data() + i * dataset.dim(), q.data(),
                                                    dataset.dim());
            }
            std::iota(order.begin(), order.end(), PointId{0});
            std::sort(order.begin(), order.end(), [&](PointId a, PointId b) {
                if (dists[a] != dists[b]) return dists[a] < dists[b];
                return a < b;
            });
            for (std::uint64_t r = 0; r < n; ++r) sums[r] += tally.scores[order[r]];
        }
    });

    ScoreRankProfile profile;
    profile.mean_scores.assign(n, 0.0);
    std::vector<std::uint64_t> total(n, 0);
    for (const auto& sums : partial) {
        for (std::uint64_t r = 0; r < n; ++r) total[r] += sums[r];
    }
    for (std::uint64_t r = 0; r < n; ++r) {
        profile.mean_scores[r] = static_cast<double>(total[r]) / static_cast<double>(nq);
    }
    return profile;
}

GroundTruth compute_ground_truth(const Dataset& base, const Dataset& queries, std::uint32_t k,
                                 unsigned threads) {
    if (queries.dim() != base.dim()) {
        throw ContractError("query set dimensionality does not match the dataset");
    }
    GroundTruth truth;
    truth.k = k;
    truth.entries.resize(queries.size());
    parallel_chunks(queries.size(), threads, 1, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t qi = lo; qi < hi; ++qi) {
            truth.entries[qi] = exact_knn(base, queries.row(qi), k).entries;
        }
    });
    return truth;
}

void save_ground_truth(const GroundTruth& truth, const std::string& ids_path,
                       const std::string& dists_path) {
    const std::uint64_t nq = truth.entries.size();
    if (nq == 0 || truth.k == 0) throw ContractError("cannot save an empty ground truth");

    std::vector<std::int32_t> ids;
    std::vector<float> dists;
    ids.reserve(nq * truth.k);
    dists.reserve(nq * truth.k);
    for (const auto& row : truth.entries) {
        if (row.size() != truth.k) {
            throw ContractError("ground-truth row does not hold exactly k entries");
        }
        for (const Neighbor& nb : row) {
            if (nb.id > static_cast<PointId>(std::numeric_limits<std::int32_t>::max())) {
                throw ContractError("point id does not fit the ivecs signed format");
            }
            ids.push_back(static_cast<std::int32_t>(nb.id));
            dists.push_back(static_cast<float>(nb.distance));
        }
    }
    write_ivecs_raw(ids_path, nq, truth.k, ids);
    write_vecs(dists_path, VecsKind::F32, nq, truth.k, dists);
}

GroundTruth load_ground_truth(const std::string& ids_path, const std::string& dists_path) {
    const IntMatrix ids = read_ivecs_raw(ids_path);
    const Dataset dists = read_vecs(dists_path, VecsKind::F32);
    if (ids.n != dists.size() || ids.d != dists.dim()) {
        throw FormatError("ground-truth id and distance files disagree on shape");
    }

    GroundTruth truth;
    truth.k = ids.d;
    truth.entries.resize(ids.n);
    for (std::uint64_t qi = 0; qi < ids.n; ++qi) {
        auto& row = truth.entries[qi];
        row.resize(ids.d);
        for (std::uint32_t r = 0; r < ids.d; ++r) {
            const std::int32_t id = ids.values[qi * ids.d + r];
            if (id < 0) {
                throw FormatError(ids_path + ": negative point id in record " +
                                  std::to_string(qi));
            }
            row[r] = {static_cast<PointId>(id),
                      static_cast<double>(dists.row(qi)[r])};
            if (r > 0 && closer(row[r], row[r - 1])) {
                throw FormatError(ids_path + ": record " + std::to_string(qi) +
                                  " is not ascending by (distance, id)");
            }
        }
    }
    return truth;
}

GroundTruth cached_ground_truth(const Dataset& base, const Dataset& queries, std::uint32_t k,
                                const std::string& cache_dir, unsigned threads) {
    std::uint64_t key = base.content_hash();
    const std::uint64_t qh = queries.content_hash();
    key = fnv1a(&qh, sizeof(qh), key);
    const std::uint32_t kk = k;
    key = fnv1a(&kk, sizeof(kk), key);

    namespace fs = std::filesystem;
    const fs::path dir(cache_dir);
    const std::string stem = "gt-" + hash_hex(key) + "-k" + std::to_string(k);
    const fs::path ids_path = dir / (stem + ".ivecs");
    const fs::path dists_path = dir / (stem + ".fvecs");

    if (fs::exists(ids_path) && fs::exists(dists_path)) {
        try {
            GroundTruth cached = load_ground_truth(ids_path.string(), dists_path.string());
            if (cached.k == k && cached.entries.size() == queries.size()) return cached;
        } catch (const FormatError&) {
            // unreadable cache entry; fall through and rebuild it
        }
    }
    GroundTruth truth = compute_ground_truth(base, queries, k, threads);
    fs::create_directories(dir);
    save_ground_truth(truth, ids_path.string(), dists_path.string());
    return truth;
}

}  // namespace suco
