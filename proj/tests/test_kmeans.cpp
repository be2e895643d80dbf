#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "suco/core.hpp"
#include "suco/kmeans.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace suco;

namespace {

double model_wcss(const float* points, std::uint64_t n, std::uint32_t dim,
                  const KMeansModel& model) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::span<const float> p{points + i * dim, dim};
        sum += testsupport::scalar_sq_euclidean(p, model.centroid(model.assignments[i]));
    }
    return sum;
}

void check_assignments_consistent(const float* points, std::uint64_t n, std::uint32_t dim,
                                  const KMeansModel& model) {
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::span<const float> p{points + i * dim, dim};
        double best = testsupport::scalar_sq_euclidean(p, model.centroid(0));
        ClusterId best_c = 0;
        for (ClusterId c = 1; c < model.k; ++c) {
            const double dist = testsupport::scalar_sq_euclidean(p, model.centroid(c));
            if (dist < best) {
                best = dist;
                best_c = c;
            }
        }
        // Ties go to the lower cluster id, which the scan above also picks.
        REQUIRE(model.assignments[i] == best_c);
    }
}

}  // namespace

TEST_CASE("kmeans recovers well-separated clusters") {
    const Dataset data = testsupport::clustered(600, 4, 3, 11, 0.0, 100.0, 0.5, false);
    const KMeansModel model = kmeans(data.data(), data.size(), data.dim(), 3, 10, 1);

    REQUIRE(model.k == 3);
    REQUIRE(model.assignments.size() == 600);
    check_assignments_consistent(data.data(), data.size(), data.dim(), model);

    // With tiny in-cluster spread relative to center spacing, WCSS must land
    // near n * dim * sigma^2 and far below the one-cluster baseline.
    const double wcss = model_wcss(data.data(), data.size(), data.dim(), model);
    CHECK(wcss < 600 * 4 * 0.5 * 0.5 * 2.0);
}

TEST_CASE("wcss never increases across iterations") {
    const Dataset data = testsupport::uniform(800, 8, 23);
    KMeansStats stats;
    kmeans(data.data(), data.size(), data.dim(), 16, 12, 7, 1, &stats);
    REQUIRE(stats.wcss.size() == 12);
    for (std::size_t i = 1; i < stats.wcss.size(); ++i) {
        CHECK(stats.wcss[i] <= stats.wcss[i - 1] + 1e-9);
    }
}

TEST_CASE("kmeans is deterministic and thread-count independent") {
    const Dataset data = testsupport::uniform(1000, 6, 31);
    const KMeansModel one = kmeans(data.data(), data.size(), data.dim(), 20, 8, 5, 1);
    const KMeansModel four = kmeans(data.data(), data.size(), data.dim(), 20, 8, 5, 4);
    const KMeansModel hw = kmeans(data.data(), data.size(), data.dim(), 20, 8, 5, 0);

    CHECK(one.centroids == four.centroids);
    CHECK(one.assignments == four.assignments);
    CHECK(one.centroids == hw.centroids);
    CHECK(one.assignments == hw.assignments);

    const KMeansModel other_seed = kmeans(data.data(), data.size(), data.dim(), 20, 8, 6, 1);
    CHECK(one.centroids != other_seed.centroids);
}

TEST_CASE("final assignments always match final centroids") {
    const Dataset data = testsupport::uniform(500, 3, 47);
    for (const std::uint32_t iters : {1u, 2u, 5u}) {
        const KMeansModel model = kmeans(data.data(), data.size(), data.dim(), 7, iters, 3);
        check_assignments_consistent(data.data(), data.size(), data.dim(), model);
    }
}

TEST_CASE("duplicate-heavy data forces empty-cluster repair without crashing") {
    // 64 points but only 2 distinct locations: most of the 8 clusters must
    // empty and be reseeded.
    std::vector<float> values;
    values.reserve(64 * 2);
    for (int i = 0; i < 64; ++i) {
        const float v = (i % 2 == 0) ? 0.0f : 50.0f;
        values.push_back(v);
        values.push_back(v);
    }
    const KMeansModel model = kmeans(values.data(), 64, 2, 8, 5, 13);
    REQUIRE(model.assignments.size() == 64);
    CHECK(!model.repaired.empty());
    for (const ClusterId c : model.assignments) CHECK(c < 8);

    // The two genuine locations must sit in different clusters.
    CHECK(model.assignments[0] != model.assignments[1]);
}

TEST_CASE("k equal to n assigns every point its own centroid location") {
    const Dataset data = testsupport::uniform(12, 2, 3);
    const KMeansModel model = kmeans(data.data(), data.size(), data.dim(), 12, 3, 9);
    std::set<ClusterId> used(model.assignments.begin(), model.assignments.end());
    CHECK(used.size() == 12);
    const double wcss = model_wcss(data.data(), data.size(), data.dim(), model);
    CHECK(wcss == doctest::Approx(0.0));
}

TEST_CASE("kmeans validates its configuration") {
    const Dataset data = testsupport::uniform(10, 2, 3);
    CHECK_THROWS_AS(kmeans(data.data(), data.size(), data.dim(), 0, 5, 1), ConfigError);
    CHECK_THROWS_AS(kmeans(data.data(), data.size(), data.dim(), 3, 0, 1), ConfigError);
    CHECK_THROWS_AS(kmeans(data.data(), data.size(), data.dim(), 11, 5, 1), ConfigError);
}
