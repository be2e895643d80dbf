#include "suco/sc_linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "suco/query.hpp"

namespace suco {

namespace {

// alpha*n or beta*n computed in binary floating point can land a hair off an
// exact integer (0.05 * 10000 -> 500.0000000000000277); snap within 1e-6
// before rounding so decimal-exact ratios stay exact.
double snapped_product(double ratio, std::uint64_t n) {
    const double product = ratio * static_cast<double>(n);
    const double nearest = std::round(product);
    return std::abs(product - nearest) <= 1e-6 ? nearest : product;
}

}  // namespace

void CollisionParams::validate(std::uint64_t n) const {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw ConfigError("alpha must be in (0, 1], got " + std::to_string(alpha));
    }
    if (!(beta > 0.0) || beta > 1.0) {
        throw ConfigError("beta must be in (0, 1], got " + std::to_string(beta));
    }
    if (k < 1 || k > n) {
        throw ConfigError("k must be in [1, n]; got k = " + std::to_string(k) +
                          " with n = " + std::to_string(n));
    }
}

std::uint64_t collision_count(double alpha, std::uint64_t n) {
    const auto c = static_cast<std::uint64_t>(std::floor(snapped_product(alpha, n)));
    return std::max<std::uint64_t>(1, c);
}

std::uint64_t candidate_count(double beta, std::uint64_t n, std::uint64_t k) {
    const auto c = static_cast<std::uint64_t>(std::ceil(snapped_product(beta, n)));
    return std::max(k, c);
}

ScScores compute_sc_scores(const Dataset& dataset, const SubspaceLayout& layout,
                           std::span<const float> query, double alpha) {
    if (layout.d != dataset.dim()) {
        throw ContractError("layout is for d = " + std::to_string(layout.d) +
                            " but dataset has d = " + std::to_string(dataset.dim()));
    }
    if (query.size() != dataset.dim()) {
        throw ContractError("query length " + std::to_string(query.size()) +
                            " does not match dataset d = " + std::to_string(dataset.dim()));
    }
    const std::uint64_t n = dataset.size();
    if (n > std::numeric_limits<PointId>::max()) {
        throw ContractError("dataset exceeds 32-bit point-id capacity");
    }

    ScScores out;
    out.scores.assign(n, 0);
    const std::uint64_t c = collision_count(alpha, n);

    std::vector<double> dists(n);
    std::vector<PointId> order(n);
    std::vector<float> qsub;
    for (std::uint32_t si = 0; si < layout.num_subspaces; ++si) {
        const std::uint32_t s = layout.subspace_dim(si);
        qsub.resize(s);
        project_into(query, layout, si, Half::Whole, qsub);

        if (const auto start = consecutive_start(layout, si, Half::Whole)) {
            const float* base = dataset.data() + *start;
            const std::uint32_t d = dataset.dim();
            for (std::uint64_t i = 0; i < n; ++i) {
                dists[i] = detail::sq_euclidean_raw(base + i * d, qsub.data(), s);
            }
        } else {
            for (std::uint64_t i = 0; i < n; ++i) {
                dists[i] = sq_euclidean_projected(dataset.row(i), layout, si, Half::Whole, qsub);
            }
        }

        std::iota(order.begin(), order.end(), PointId{0});
        const auto closer = [&](PointId a, PointId b) {
            if (dists[a] != dists[b]) return dists[a] < dists[b];
            return a < b;
        };
        if (c < n) {
            std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(c),
                             order.end(), closer);
        }
        for (std::uint64_t j = 0; j < c; ++j) ++out.scores[order[j]];
    }
    return out;
}

QueryResult sc_linear_query(const Dataset& dataset, const SubspaceLayout& layout,
                            std::span<const float> query, const CollisionParams& params) {
    params.validate(dataset.size());
    const ScScores tally = compute_sc_scores(dataset, layout, query, params.alpha);

    const std::uint64_t n = dataset.size();
    const std::uint64_t m = candidate_count(params.beta, n, params.k);
    std::vector<PointId> order(n);
    std::iota(order.begin(), order.end(), PointId{0});
    const auto better = [&](PointId a, PointId b) {
        if (tally.scores[a] != tally.scores[b]) return tally.scores[a] > tally.scores[b];
        return a < b;
    };
    if (m < n) {
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m),
                         order.end(), better);
        order.resize(m);
    }
    return rerank(dataset, query, order, params.k);
}

}  // namespace suco
