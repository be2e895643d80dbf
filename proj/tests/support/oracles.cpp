#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

#include "suco/rng.hpp"

namespace suco::testsupport {

double scalar_sq_euclidean(std::span<const float> a, std::span<const float> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += diff * diff;
    }
    return acc;
}

ScScores naive_sc_scores(const Dataset& dataset, const SubspaceLayout& layout,
                         std::span<const float> query, double alpha) {
    const std::uint64_t n = dataset.size();
    ScScores out;
    out.scores.assign(n, 0);
    const std::uint64_t c = collision_count(alpha, n);

    for (std::uint32_t si = 0; si < layout.num_subspaces; ++si) {
        const std::vector<float> q = project(query, layout, si, Half::Whole);
        std::vector<std::pair<double, PointId>> ranked(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::vector<float> p = project(dataset.row(i), layout, si, Half::Whole);
            ranked[i] = {scalar_sq_euclidean(p, q), static_cast<PointId>(i)};
        }
        std::sort(ranked.begin(), ranked.end());
        for (std::uint64_t r = 0; r < c; ++r) ++out.scores[ranked[r].second];
    }
    return out;
}

QueryResult naive_rerank(const Dataset& dataset, std::span<const float> query,
                         std::span<const PointId> candidates, std::uint32_t k) {
    std::vector<std::pair<double, PointId>> ranked;
    ranked.reserve(candidates.size());
    for (const PointId id : candidates) {
        ranked.emplace_back(scalar_sq_euclidean(dataset.row(id), query), id);
    }
    std::sort(ranked.begin(), ranked.end());
    QueryResult out;
    for (std::uint32_t r = 0; r < k; ++r) {
        out.entries.push_back({ranked[r].second, std::sqrt(ranked[r].first)});
    }
    return out;
}

QueryResult naive_knn(const Dataset& dataset, std::span<const float> query, std::uint32_t k) {
    std::vector<PointId> all(dataset.size());
    std::iota(all.begin(), all.end(), PointId{0});
    return naive_rerank(dataset, query, all, k);
}

RetrievedClusters exhaustive_traversal(double alpha, std::uint64_t n, const CentroidDistances& cd1,
                                       const CentroidDistances& cd2, const Imi& imi) {
    const std::uint32_t k = imi.k_half;
    const std::uint64_t target = collision_count(alpha, n);

    // (sum, rank1, rank2) for every cell of the grid
    std::vector<std::tuple<double, std::uint32_t, std::uint32_t>> cells;
    cells.reserve(static_cast<std::size_t>(k) * k);
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t j = 0; j < k; ++j) {
            cells.emplace_back(cd1.dists[cd1.order[i]] + cd2.dists[cd2.order[j]], i, j);
        }
    }
    std::sort(cells.begin(), cells.end());

    RetrievedClusters out;
    std::uint64_t cumulative = 0;
    for (const auto& [sum, i, j] : cells) {
        const std::uint32_t c1 = cd1.order[i];
        const std::uint32_t c2 = cd2.order[j];
        cumulative += imi.cell(c1, c2).size();
        out.cells.push_back({c1, c2, cumulative, sum});
        if (cumulative >= target) break;
    }
    return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const auto n = static_cast<double>(x.size());

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;

    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    return cov / std::sqrt(vx * vy);
}

CentroidDistances random_centroid_distances(std::uint32_t k_half, std::mt19937_64& rng,
                                            bool quantize) {
    CentroidDistances cd;
    cd.dists.resize(k_half);
    for (double& d : cd.dists) {
        d = quantize ? 0.1 * static_cast<double>(uniform_below(rng, 10)) : uniform_unit(rng);
    }
    cd.order.resize(k_half);
    std::iota(cd.order.begin(), cd.order.end(), 0U);
    std::sort(cd.order.begin(), cd.order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (cd.dists[a] != cd.dists[b]) return cd.dists[a] < cd.dists[b];
        return a < b;
    });
    return cd;
}

Imi random_imi(std::uint32_t k_half, std::uint64_t n, std::mt19937_64& rng) {
    std::vector<ClusterId> first(n), second(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        first[i] = static_cast<ClusterId>(uniform_below(rng, k_half));
        second[i] = static_cast<ClusterId>(uniform_below(rng, k_half));
    }
    return build_imi(first, second, k_half);
}

}  // namespace suco::testsupport
