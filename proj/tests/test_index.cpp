#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <set>
#include <vector>

#include "doctest.h"
#include "suco/index.hpp"
#include "suco/rng.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace suco;

namespace {

// Every point id must appear in exactly one cell, ascending within it.
void check_imi_partition(const Imi& imi, std::uint64_t n) {
    REQUIRE(imi.offsets.size() ==
            static_cast<std::uint64_t>(imi.k_half) * imi.k_half + 1);
    REQUIRE(imi.offsets.front() == 0);
    REQUIRE(imi.offsets.back() == n);
    REQUIRE(imi.ids.size() == n);
    std::vector<bool> seen(n, false);
    for (std::uint32_t c1 = 0; c1 < imi.k_half; ++c1) {
        for (std::uint32_t c2 = 0; c2 < imi.k_half; ++c2) {
            const auto cell = imi.cell(c1, c2);
            for (std::size_t j = 0; j < cell.size(); ++j) {
                REQUIRE(cell[j] < n);
                REQUIRE_FALSE(seen[cell[j]]);
                seen[cell[j]] = true;
                if (j > 0) REQUIRE(cell[j - 1] < cell[j]);
            }
        }
    }
}

std::filesystem::path temp_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("build_imi places ids by their assignment pair") {
    // 4 points, k_half = 2: assignments chosen to hit three distinct cells.
    const std::vector<ClusterId> first{0, 1, 0, 1};
    const std::vector<ClusterId> second{0, 1, 0, 0};
    const Imi imi = build_imi(first, second, 2);

    check_imi_partition(imi, 4);
    CHECK(std::vector<PointId>(imi.cell(0, 0).begin(), imi.cell(0, 0).end()) ==
          std::vector<PointId>{0, 2});
    CHECK(imi.cell(0, 1).empty());
    CHECK(std::vector<PointId>(imi.cell(1, 0).begin(), imi.cell(1, 0).end()) ==
          std::vector<PointId>{3});
    CHECK(std::vector<PointId>(imi.cell(1, 1).begin(), imi.cell(1, 1).end()) ==
          std::vector<PointId>{1});
}

TEST_CASE("build_imi validates its inputs") {
    const std::vector<ClusterId> a{0, 1};
    const std::vector<ClusterId> b{0};
    CHECK_THROWS_AS(build_imi(a, b, 2), ContractError);
    const std::vector<ClusterId> out_of_range{0, 2};
    CHECK_THROWS_AS(build_imi(a, out_of_range, 2), ContractError);
}

TEST_CASE("random assignments form a valid partition") {
    std::mt19937_64 rng(15);
    for (const std::uint32_t k_half : {1u, 2u, 7u, 32u}) {
        const Imi imi = testsupport::random_imi(k_half, 200, rng);
        check_imi_partition(imi, 200);
    }
}

TEST_CASE("built index has coherent shapes and valid partitions") {
    const Dataset data = testsupport::clustered(500, 32, 8, 3, 0.0, 100.0, 5.0, false);
    IndexParams params;
    params.num_subspaces = 4;
    params.k_half = 10;
    params.iterations = 5;
    params.seed = 77;
    const SucoIndex index = build_index(data, params, 0);

    CHECK(index.n == 500);
    CHECK(index.layout.d == 32);
    REQUIRE(index.subspaces.size() == 4);
    std::uint64_t total_ids = 0;
    for (std::uint32_t si = 0; si < 4; ++si) {
        const auto& sub = index.subspaces[si];
        const std::uint32_t d1 = index.layout.half_dim(si, Half::First);
        const std::uint32_t d2 = index.layout.half_dim(si, Half::Second);
        CHECK(sub.centroids_first.size() == static_cast<std::size_t>(10) * d1);
        CHECK(sub.centroids_second.size() == static_cast<std::size_t>(10) * d2);
        check_imi_partition(sub.imi, 500);
        total_ids += sub.imi.size();
    }
    // Id storage is exactly n per subspace: the index never duplicates the
    // dataset.
    CHECK(total_ids == 500ULL * 4);
}

TEST_CASE("build_index is deterministic and thread-count independent") {
    const Dataset data = testsupport::uniform(300, 16, 41);
    IndexParams params;
    params.num_subspaces = 4;
    params.k_half = 8;
    params.iterations = 4;
    params.seed = 5;
    const SucoIndex one = build_index(data, params, 1);
    const SucoIndex many = build_index(data, params, 8);
    CHECK(one == many);

    params.seed = 6;
    const SucoIndex reseeded = build_index(data, params, 1);
    CHECK(one.subspaces != reseeded.subspaces);
}

TEST_CASE("serialization round-trips exactly") {
    const Dataset data = testsupport::clustered(200, 16, 4, 9, 0.0, 50.0, 3.0, false);
    IndexParams params;
    params.num_subspaces = 2;
    params.k_half = 6;
    params.iterations = 3;
    params.seed = 123;
    params.mode = SubspaceMode::Shuffled;
    const SucoIndex index = build_index(data, params, 0);

    const std::vector<unsigned char> bytes = serialize_index(index);
    const SucoIndex back = deserialize_index(bytes);
    CHECK(back == index);

    // Identical builds serialize identically.
    const SucoIndex again = build_index(data, params, 3);
    CHECK(serialize_index(again) == bytes);
}

TEST_CASE("save and load round-trip through a file") {
    const Dataset data = testsupport::uniform(100, 8, 4);
    IndexParams params;
    params.num_subspaces = 2;
    params.k_half = 4;
    params.iterations = 2;
    const SucoIndex index = build_index(data, params, 0);

    const auto path = temp_path("suco_index_roundtrip.bin");
    save_index(index, path.string());
    const SucoIndex back = load_index(path.string());
    CHECK(back == index);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_index((path.parent_path() / "definitely_missing.bin").string()),
                    CorruptIndexError);
}

TEST_CASE("corrupted bytes are rejected with section-specific errors") {
    const Dataset data = testsupport::uniform(60, 8, 8);
    IndexParams params;
    params.num_subspaces = 2;
    params.k_half = 3;
    params.iterations = 2;
    const SucoIndex index = build_index(data, params, 0);
    const std::vector<unsigned char> good = serialize_index(index);

    SUBCASE("bad magic") {
        auto bad = good;
        bad[0] = 'X';
        CHECK_THROWS_WITH_AS(deserialize_index(bad), doctest::Contains("magic"),
                             CorruptIndexError);
    }
    SUBCASE("unsupported version") {
        auto bad = good;
        bad[4] = 0xFF;
        CHECK_THROWS_WITH_AS(deserialize_index(bad), doctest::Contains("version"),
                             CorruptIndexError);
    }
    SUBCASE("truncation at every prefix length") {
        for (const double frac : {0.1, 0.3, 0.6, 0.9, 0.99}) {
            const auto len = static_cast<std::size_t>(static_cast<double>(good.size()) * frac);
            const std::vector<unsigned char> cut(good.begin(),
                                                 good.begin() + static_cast<long>(len));
            CHECK_THROWS_AS(deserialize_index(cut), CorruptIndexError);
        }
    }
    SUBCASE("trailing garbage") {
        auto bad = good;
        bad.push_back(0);
        CHECK_THROWS_WITH_AS(deserialize_index(bad), doctest::Contains("trailing"),
                             CorruptIndexError);
    }
    SUBCASE("non-finite centroid") {
        auto bad = good;
        // Find the first centroid float and stamp an infinity over it. The
        // header is 4 (magic) + 4 (version) + 8 + 4*4 + 8 + 4 = 44 bytes,
        // then 2 subspaces * (count + 4 dims) * 4 bytes of dimension lists.
        const std::size_t dims_bytes = 2 * (1 + 4) * 4;
        const std::size_t first_centroid = 44 + dims_bytes;
        bad[first_centroid + 0] = 0x00;
        bad[first_centroid + 1] = 0x00;
        bad[first_centroid + 2] = 0x80;
        bad[first_centroid + 3] = 0x7F;
        CHECK_THROWS_WITH_AS(deserialize_index(bad), doctest::Contains("centroid"),
                             CorruptIndexError);
    }
    SUBCASE("empty buffer") {
        CHECK_THROWS_AS(deserialize_index(std::vector<unsigned char>{}), CorruptIndexError);
    }
}

TEST_CASE("check_compatible enforces the dataset signature") {
    const Dataset data = testsupport::uniform(50, 8, 2);
    IndexParams params;
    params.num_subspaces = 2;
    params.k_half = 4;
    params.iterations = 2;
    const SucoIndex index = build_index(data, params, 0);

    CHECK_NOTHROW(check_compatible(index, data));
    const Dataset wrong_n = testsupport::uniform(49, 8, 2);
    CHECK_THROWS_AS(check_compatible(index, wrong_n), IncompatibilityError);
    const Dataset wrong_d = testsupport::uniform(50, 10, 2);
    CHECK_THROWS_AS(check_compatible(index, wrong_d), IncompatibilityError);
}

TEST_CASE("build_index validates configuration") {
    const Dataset data = testsupport::uniform(20, 8, 1);
    IndexParams params;
    params.num_subspaces = 2;
    params.k_half = 21;  // more clusters than points
    params.iterations = 2;
    CHECK_THROWS_AS(build_index(data, params, 1), ConfigError);
    params.k_half = 0;
    CHECK_THROWS_AS(build_index(data, params, 1), ConfigError);
    params.k_half = 4;
    params.iterations = 0;
    CHECK_THROWS_AS(build_index(data, params, 1), ConfigError);
    params.iterations = 1;
    params.num_subspaces = 5;  // floor(8 / 5) = 1 < 2 per subspace
    CHECK_THROWS_AS(build_index(data, params, 1), ConfigError);
}
