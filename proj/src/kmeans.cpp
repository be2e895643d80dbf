#include "suco/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "suco/parallel.hpp"
#include "suco/rng.hpp"

namespace suco {

namespace {

constexpr std::size_t kAssignChunk = 4096;

// Nearest centroid by squared distance, ties to the lower cluster id.
ClusterId nearest_centroid(const float* point, const std::vector<float>& centroids,
                           std::uint32_t k, std::uint32_t dim, double* best_out = nullptr) {
    ClusterId best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::uint32_t c = 0; c < k; ++c) {
        const double dist =
            detail::sq_euclidean_raw(point, centroids.data() + static_cast<std::size_t>(c) * dim, dim);
        if (dist < best_dist) {
            best_dist = dist;
            best = c;
        }
    }
    if (best_out) *best_out = best_dist;
    return best;
}

// Assigns every point to its nearest centroid and returns the WCSS under
// those assignments. Per-chunk partials are combined in chunk order, so the
// value does not depend on the worker count.
double assign_points(const float* points, std::uint64_t n, std::uint32_t dim,
                     const std::vector<float>& centroids, std::uint32_t k,
                     std::vector<ClusterId>& assignments, unsigned threads) {
    std::vector<double> partial(chunk_count(n, kAssignChunk), 0.0);
    parallel_chunks(n, threads, kAssignChunk, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            double dist = 0.0;
            assignments[i] = nearest_centroid(points + i * dim, centroids, k, dim, &dist);
            acc += dist;
        }
        partial[chunk] = acc;
    });
    double wcss = 0.0;
    for (const double p : partial) wcss += p;
    return wcss;
}

// k-means++ seeding: first centroid uniform, each further centroid drawn with
// probability proportional to the squared distance to the nearest chosen one.
std::vector<float> kmeanspp_init(const float* points, std::uint64_t n, std::uint32_t dim,
                                 std::uint32_t k, std::mt19937_64& rng) {
    std::vector<float> centroids(static_cast<std::size_t>(k) * dim);
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    std::vector<bool> chosen(n, false);

    auto place = [&](std::uint32_t c, std::uint64_t point_id) {
        const float* src = points + point_id * dim;
        std::copy(src, src + dim, centroids.begin() + static_cast<std::size_t>(c) * dim);
        chosen[point_id] = true;
        for (std::uint64_t i = 0; i < n; ++i) {
            const double dist = detail::sq_euclidean_raw(points + i * dim, src, dim);
            if (dist < min_dist[i]) min_dist[i] = dist;
        }
    };

    place(0, uniform_below(rng, n));
    for (std::uint32_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) total += min_dist[i];
        std::uint64_t pick = n;  // sentinel
        if (total > 0.0) {
            const double target = uniform_unit(rng) * total;
            double cum = 0.0;
            for (std::uint64_t i = 0; i < n; ++i) {
                cum += min_dist[i];
                if (cum > target) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                // float round-off overran the prefix walk; take the last
                // point with positive weight
                for (std::uint64_t i = n; i-- > 0;) {
                    if (min_dist[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        }
        if (pick == n) {
            // all remaining points coincide with chosen centroids; lowest
            // unchosen id keeps the draw deterministic
            for (std::uint64_t i = 0; i < n; ++i) {
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) pick = 0;
        }
        place(c, pick);
    }
    return centroids;
}

}  // namespace

KMeansModel kmeans(const float* points, std::uint64_t n, std::uint32_t dim, std::uint32_t k,
                   std::uint32_t iterations, std::uint64_t seed, unsigned threads,
                   KMeansStats* stats) {
    if (k < 1) throw ConfigError("kmeans: k must be >= 1");
    if (iterations < 1) throw ConfigError("kmeans: iterations must be >= 1");
    if (n < k) {
        throw ConfigError("kmeans: n = " + std::to_string(n) + " is smaller than k = " +
                          std::to_string(k));
    }

    KMeansModel model;
    model.k = k;
    model.dim = dim;
    model.assignments.assign(n, 0);

    std::mt19937_64 rng(seed);
    model.centroids = kmeanspp_init(points, n, dim, k, rng);
    if (stats) stats->wcss.clear();

    std::vector<double> sums(static_cast<std::size_t>(k) * dim);
    std::vector<std::uint64_t> counts(k);
#ifndef NDEBUG
    double prev_wcss = std::numeric_limits<double>::infinity();
#endif

    for (std::uint32_t iter = 0; iter < iterations; ++iter) {
        const double wcss = assign_points(points, n, dim, model.centroids, k, model.assignments, threads);
        if (stats) stats->wcss.push_back(wcss);
#ifndef NDEBUG
        assert(wcss <= prev_wcss * (1.0 + 1e-12) + 1e-9 && "WCSS must not increase");
        prev_wcss = wcss;
#endif

        // Update step: serial accumulation in point order keeps the result
        // independent of the thread budget.
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::uint64_t i = 0; i < n; ++i) {
            const ClusterId c = model.assignments[i];
            double* dst = sums.data() + static_cast<std::size_t>(c) * dim;
            const float* src = points + i * dim;
            for (std::uint32_t j = 0; j < dim; ++j) dst[j] += src[j];
            ++counts[c];
        }
        for (std::uint32_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            float* dst = model.centroids.data() + static_cast<std::size_t>(c) * dim;
            const double* src = sums.data() + static_cast<std::size_t>(c) * dim;
            const double inv = 1.0 / static_cast<double>(counts[c]);
            for (std::uint32_t j = 0; j < dim; ++j) dst[j] = static_cast<float>(src[j] * inv);
        }

        // Empty-cluster repair: reseed to the point farthest (squared) from
        // the stale centroid, ties to the lowest point id.
        for (std::uint32_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            const float* stale = model.centroids.data() + static_cast<std::size_t>(c) * dim;
            std::uint64_t farthest = 0;
            double farthest_dist = -1.0;
            for (std::uint64_t i = 0; i < n; ++i) {
                const double dist = detail::sq_euclidean_raw(points + i * dim, stale, dim);
                if (dist > farthest_dist) {
                    farthest_dist = dist;
                    farthest = i;
                }
            }
            const float* src = points + farthest * dim;
            std::copy(src, src + dim,
                      model.centroids.begin() + static_cast<std::size_t>(c) * dim);
            model.repaired.push_back(c);
        }
    }

    // Final pass so assignments are consistent with the returned centroids.
    assign_points(points, n, dim, model.centroids, k, model.assignments, threads);
    return model;
}

}  // namespace suco
