#include "suco/query.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>

namespace suco {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_traversal_args(double alpha, std::uint64_t n, const CentroidDistances& cd1,
                          const CentroidDistances& cd2, const Imi& imi) {
    if (!(alpha > 0.0) || alpha > 1.0) throw ContractError("alpha must be in (0, 1]");
    if (imi.k_half < 1) throw ContractError("imi has no cells");
    const std::size_t k = imi.k_half;
    if (cd1.dists.size() != k || cd1.order.size() != k || cd2.dists.size() != k ||
        cd2.order.size() != k) {
        throw ContractError("centroid distance arrays do not match the imi's k_half");
    }
    if (imi.size() != n) {
        throw ContractError("imi holds " + std::to_string(imi.size()) + " ids but n = " +
                            std::to_string(n));
    }
}

// Distances permuted into rank order (ascending).
std::vector<double> ranked(const CentroidDistances& cd) {
    std::vector<double> r(cd.order.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = cd.dists[cd.order[i]];
    return r;
}

}  // namespace

CentroidDistances centroid_distances(std::span<const float> half_query,
                                     std::span<const float> centroids, std::uint32_t k_half) {
    if (k_half < 1) throw ContractError("k_half must be >= 1");
    if (half_query.empty()) throw ContractError("query half is empty");
    const std::size_t dim = half_query.size();
    if (centroids.size() != static_cast<std::size_t>(k_half) * dim) {
        throw ContractError("centroid matrix does not match k_half x half dim");
    }

    CentroidDistances cd;
    cd.dists.resize(k_half);
    for (std::uint32_t c = 0; c < k_half; ++c) {
        cd.dists[c] =
            std::sqrt(detail::sq_euclidean_raw(centroids.data() + c * dim, half_query.data(), dim));
    }
    cd.order.resize(k_half);
    std::iota(cd.order.begin(), cd.order.end(), 0U);
    std::sort(cd.order.begin(), cd.order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (cd.dists[a] != cd.dists[b]) return cd.dists[a] < cd.dists[b];
        return a < b;
    });
    return cd;
}

RetrievedClusters dynamic_activation(double alpha, std::uint64_t n, const CentroidDistances& cd1,
                                     const CentroidDistances& cd2, const Imi& imi) {
    check_traversal_args(alpha, n, cd1, cd2, imi);
    const std::uint32_t k = imi.k_half;
    const std::uint64_t target = collision_count(alpha, n);
    const std::vector<double> d1r = ranked(cd1);
    const std::vector<double> d2r = ranked(cd2);

    // Row i is first-half rank i; its cursor walks the second-half ranks.
    // Rows activate one at a time: a row's first retrieval (cursor 0) wakes
    // the row after it, and +infinity marks rows not yet active or spent.
    std::vector<std::uint32_t> active_idx(k, 0);
    std::vector<double> active_dists(k, kInf);
    active_dists[0] = d1r[0] + d2r[0];
    std::uint32_t activated = 1;

    RetrievedClusters out;
    std::uint64_t cumulative = 0;
#ifndef NDEBUG
    double prev_sum = -kInf;
#endif
    while (cumulative < target) {
        std::uint32_t pos = 0;
        double best = active_dists[0];
        for (std::uint32_t i = 1; i < activated; ++i) {
            if (active_dists[i] < best) {
                best = active_dists[i];
                pos = i;
            }
        }
        if (best == kInf) break;  // unreachable while the imi partitions all n points
        const std::uint32_t j = active_idx[pos];
#ifndef NDEBUG
        assert(best >= prev_sum && "sum-distances must be non-decreasing");
        assert(best == d1r[pos] + d2r[j] && "cursor distance out of sync");
        prev_sum = best;
#endif
        const std::uint32_t c1 = cd1.order[pos];
        const std::uint32_t c2 = cd2.order[j];
        cumulative += imi.cell(c1, c2).size();
        out.cells.push_back({c1, c2, cumulative, best});

        if (j == 0 && activated < k) {
            assert(pos + 1 == activated && "rows must activate in rank order");
            active_dists[activated] = d1r[activated] + d2r[0];
            ++activated;
        }
        if (j + 1 == k) {
            active_dists[pos] = kInf;
        } else {
            active_idx[pos] = j + 1;
            active_dists[pos] = d1r[pos] + d2r[j + 1];
        }
    }
    return out;
}

RetrievedClusters multi_sequence(double alpha, std::uint64_t n, const CentroidDistances& cd1,
                                 const CentroidDistances& cd2, const Imi& imi) {
    check_traversal_args(alpha, n, cd1, cd2, imi);
    const std::uint32_t k = imi.k_half;
    const std::uint64_t target = collision_count(alpha, n);
    const std::vector<double> d1r = ranked(cd1);
    const std::vector<double> d2r = ranked(cd2);

    using Entry = std::tuple<double, std::uint32_t, std::uint32_t>;  // (sum, rank1, rank2)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> frontier;
    std::vector<bool> pushed(static_cast<std::size_t>(k) * k, false);
    frontier.emplace(d1r[0] + d2r[0], 0U, 0U);
    pushed[0] = true;

    RetrievedClusters out;
    std::uint64_t cumulative = 0;
    while (cumulative < target && !frontier.empty()) {
        const auto [sum, i, j] = frontier.top();
        frontier.pop();
        const std::uint32_t c1 = cd1.order[i];
        const std::uint32_t c2 = cd2.order[j];
        cumulative += imi.cell(c1, c2).size();
        out.cells.push_back({c1, c2, cumulative, sum});

        if (i + 1 < k && !pushed[static_cast<std::size_t>(i + 1) * k + j]) {
            frontier.emplace(d1r[i + 1] + d2r[j], i + 1, j);
            pushed[static_cast<std::size_t>(i + 1) * k + j] = true;
        }
        if (j + 1 < k && !pushed[static_cast<std::size_t>(i) * k + j + 1]) {
            frontier.emplace(d1r[i] + d2r[j + 1], i, j + 1);
            pushed[static_cast<std::size_t>(i) * k + j + 1] = true;
        }
    }
    return out;
}

QueryResult rerank(const Dataset& dataset, std::span<const float> query,
                   std::span<const PointId> candidates, std::uint32_t k) {
    if (query.size() != dataset.dim()) {
        throw ContractError("query length " + std::to_string(query.size()) +
                            " does not match dataset d = " + std::to_string(dataset.dim()));
    }
    if (k < 1) throw ContractError("k must be >= 1");
    if (candidates.size() < k) {
        throw ContractError("k = " + std::to_string(k) + " exceeds the " +
                            std::to_string(candidates.size()) + " candidates");
    }

    const std::uint64_t n = dataset.size();
    const std::uint32_t d = dataset.dim();
    // distance carries the squared value until the final top-k is fixed;
    // the square root is order-preserving, so ties resolve identically
    std::vector<Neighbor> scored;
    scored.reserve(candidates.size());
    for (const PointId id : candidates) {
        if (id >= n) throw ContractError("candidate id " + std::to_string(id) + " out of range");
        scored.push_back(
            {id, detail::sq_euclidean_raw(dataset.data() + static_cast<std::uint64_t>(id) * d,
                                          query.data(), d)});
    }
    const auto closer = [](const Neighbor& a, const Neighbor& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.id < b.id;
    };
    if (k < scored.size()) {
        std::nth_element(scored.begin(), scored.begin() + k, scored.end(), closer);
        scored.resize(k);
    }
    std::sort(scored.begin(), scored.end(), closer);
    for (Neighbor& nb : scored) nb.distance = std::sqrt(nb.distance);

    QueryResult out;
    out.entries = std::move(scored);
    return out;
}

QueryResult knn_query(const SucoIndex& index, const Dataset& dataset,
                      std::span<const float> query, const CollisionParams& params,
                      TraversalKind traversal, QueryScratch* scratch) {
    check_compatible(index, dataset);
    if (query.size() != dataset.dim()) {
        throw ContractError("query length " + std::to_string(query.size()) +
                            " does not match dataset d = " + std::to_string(dataset.dim()));
    }
    const std::uint64_t n = dataset.size();
    params.validate(n);

    QueryScratch local;
    QueryScratch& s = scratch ? *scratch : local;
    if (s.scores.size() != n) {
        s.scores.assign(n, 0);
    } else {
        for (const PointId id : s.touched) s.scores[id] = 0;
    }
    s.touched.clear();

    const SubspaceLayout& layout = index.layout;
    for (std::uint32_t si = 0; si < layout.num_subspaces; ++si) {
        const SubspaceCodebook& codebook = index.subspaces[si];
        s.half_query.resize(layout.half_dim(si, Half::First));
        project_into(query, layout, si, Half::First, s.half_query);
        const CentroidDistances cd1 =
            centroid_distances(s.half_query, codebook.centroids_first, index.params.k_half);
        s.half_query.resize(layout.half_dim(si, Half::Second));
        project_into(query, layout, si, Half::Second, s.half_query);
        const CentroidDistances cd2 =
            centroid_distances(s.half_query, codebook.centroids_second, index.params.k_half);

        const RetrievedClusters retrieved =
            traversal == TraversalKind::DynamicActivation
                ? dynamic_activation(params.alpha, n, cd1, cd2, codebook.imi)
                : multi_sequence(params.alpha, n, cd1, cd2, codebook.imi);
        for (const RetrievedCell& cell : retrieved.cells) {
            for (const PointId id : codebook.imi.cell(cell.c1, cell.c2)) {
                if (s.scores[id]++ == 0) s.touched.push_back(id);
            }
        }
    }

    const std::uint64_t m = candidate_count(params.beta, n, params.k);
    std::vector<PointId> candidates(s.touched.begin(), s.touched.end());
    if (candidates.size() >= m) {
        const auto better = [&](PointId a, PointId b) {
            if (s.scores[a] != s.scores[b]) return s.scores[a] > s.scores[b];
            return a < b;
        };
        if (m < candidates.size()) {
            std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(m),
                             candidates.end(), better);
            candidates.resize(m);
        }
    } else {
        // every scored point is in; the lowest-id zero-score points fill the
        // pool, matching a top-m cut over all n points
        for (PointId id = 0; candidates.size() < m && id < n; ++id) {
            if (s.scores[id] == 0) candidates.push_back(id);
        }
    }
    return rerank(dataset, query, candidates, params.k);
}

}  // namespace suco
