#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "suco/core.hpp"
#include "suco/kmeans.hpp"
#include "suco/subspace.hpp"

namespace suco {

/// Inverted multi-index over one subspace: a k_half x k_half grid of cells,
/// cell (c1, c2) holding the ids of points whose first-half nearest centroid
/// is c1 and second-half nearest centroid is c2. Stored CSR-style: offsets
/// has k_half^2 + 1 non-decreasing entries into the length-n id array, and
/// every point id appears in exactly one cell, ascending within its cell.
struct Imi {
    std::uint32_t k_half = 0;
    std::vector<std::uint64_t> offsets;
    std::vector<PointId> ids;

    std::uint64_t cell_index(std::uint32_t c1, std::uint32_t c2) const {
        return static_cast<std::uint64_t>(c1) * k_half + c2;
    }
    std::span<const PointId> cell(std::uint32_t c1, std::uint32_t c2) const {
        const auto idx = cell_index(c1, c2);
        return {ids.data() + offsets[idx], ids.data() + offsets[idx + 1]};
    }
    std::uint64_t size() const { return ids.size(); }

    friend bool operator==(const Imi&, const Imi&) = default;
};

/// Builds the cell partition from the two per-half assignment arrays
/// (counting sort, so ids stay ascending within each cell). Throws
/// ContractError on length mismatch or an assignment >= k_half.
Imi build_imi(std::span<const ClusterId> first, std::span<const ClusterId> second,
              std::uint32_t k_half);

/// Per-subspace query-time state: the two half codebooks (centroids only;
/// point assignments live in the IMI cells) and the inverted multi-index.
struct SubspaceCodebook {
    std::vector<float> centroids_first;   ///< k_half x first-half dim, row-major
    std::vector<float> centroids_second;  ///< k_half x second-half dim, row-major
    Imi imi;

    friend bool operator==(const SubspaceCodebook&, const SubspaceCodebook&) = default;
};

/// Build-time parameters, persisted in the index header.
struct IndexParams {
    std::uint32_t num_subspaces = 8;
    std::uint32_t k_half = 50;  ///< clusters per half; k_half^2 cells per subspace
    std::uint32_t iterations = 10;
    std::uint64_t seed = 42;
    SubspaceMode mode = SubspaceMode::Contiguous;

    friend bool operator==(const IndexParams&, const IndexParams&) = default;
};

/// Immutable search index: the subspace layout plus one codebook per
/// subspace. Holds no copy of the dataset (re-ranking reads the caller's),
/// so id storage totals exactly n * num_subspaces entries. Safe for
/// unrestricted concurrent query reads.
struct SucoIndex {
    SubspaceLayout layout;
    IndexParams params;
    std::uint64_t n = 0;  ///< size of the dataset the index was built from
    std::vector<SubspaceCodebook> subspaces;

    friend bool operator==(const SucoIndex&, const SucoIndex&) = default;
};

/// Builds the index: samples the layout, then for every subspace projects
/// the points into the two halves, clusters each half with k-means
/// (per-half seed = derive_seed(params.seed, 2*i + half)), and assembles the
/// IMI from the two assignment arrays. The 2 * num_subspaces clustering jobs
/// run in parallel under `threads` (0 = hardware); output is identical for
/// any thread budget.
/// Throws ConfigError when n < k_half, k_half < 1, iterations < 1, or the
/// layout preconditions fail; ContractError when n exceeds the 32-bit id
/// range.
SucoIndex build_index(const Dataset& dataset, const IndexParams& params, unsigned threads = 0);

/// Serialized form of the index. Little-endian throughout: magic "SUCO",
/// format version u32, header (n u64, d u32, N_s u32, k_half u32,
/// iterations u32, seed u64, mode u32), the per-subspace dimension lists
/// (count u32 then that many u32 dims), then per subspace: first-half
/// centroids f32, second-half centroids f32, IMI offsets u64, IMI ids u32.
/// Identical indexes serialize to identical bytes.
std::vector<unsigned char> serialize_index(const SucoIndex& index);

/// Inverse of serialize_index; deserialize(serialize(x)) == x field-by-field.
/// Throws CorruptIndexError naming the failing section on bad magic,
/// unsupported version, truncation, or an invariant-violating body.
SucoIndex deserialize_index(std::span<const unsigned char> bytes);

/// serialize_index to a file. Throws Error when the path is not writable.
void save_index(const SucoIndex& index, const std::string& path);

/// deserialize_index from a file; throws CorruptIndexError when the file
/// cannot be opened or read.
SucoIndex load_index(const std::string& path);

/// Throws IncompatibilityError unless the dataset's (n, d) match the index.
void check_compatible(const SucoIndex& index, const Dataset& dataset);

}  // namespace suco
