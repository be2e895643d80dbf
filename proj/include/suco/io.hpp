#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "suco/core.hpp"

namespace suco {

/// Element type of a .fvecs / .bvecs / .ivecs file. Every record is
/// [dim: 4-byte little-endian signed int][dim elements]; all records in one
/// file share the same dim.
enum class VecsKind {
    F32,  ///< fvecs, 4-byte floats
    U8,   ///< bvecs, 1-byte unsigned
    I32,  ///< ivecs, 4-byte signed ints
};

/// Loads a vecs file into a float Dataset: fvecs bit-exact, bvecs widened
/// losslessly, ivecs widened with every value required to fit a float
/// exactly (|v| <= 2^24). At most `limit` records are read when given;
/// otherwise the file must contain whole records only.
/// Throws FormatError on open failure, an empty file, a record with an
/// inconsistent or invalid dim (the message names the 0-based record), a
/// truncated record (the message names the byte offset), or a non-finite
/// value.
Dataset read_vecs(const std::string& path, VecsKind kind,
                  std::optional<std::uint64_t> limit = std::nullopt);

/// Writes n x d float values as a vecs file; inverse of read_vecs. For U8
/// every value must be an integer in [0, 255], for I32 an integer with
/// |v| <= 2^24 (ContractError otherwise). Throws Error when the path is not
/// writable.
void write_vecs(const std::string& path, VecsKind kind, std::uint64_t n, std::uint32_t d,
                std::span<const float> values);

/// Raw i32 record matrix, for data that must not pass through float
/// (ground-truth neighbor ids).
struct IntMatrix {
    std::uint64_t n = 0;
    std::uint32_t d = 0;
    std::vector<std::int32_t> values;
};

/// Bit-exact ivecs reader; same framing and error contract as read_vecs.
IntMatrix read_ivecs_raw(const std::string& path,
                         std::optional<std::uint64_t> limit = std::nullopt);

/// Bit-exact ivecs writer; inverse of read_ivecs_raw.
void write_ivecs_raw(const std::string& path, std::uint64_t n, std::uint32_t d,
                     std::span<const std::int32_t> values);

/// Result of removing `count` seed-selected points from a dataset to serve
/// as queries. Both parts keep ascending original-id order; the remap
/// vectors give each row's original id.
struct HoldOutSplit {
    Dataset base;
    std::optional<Dataset> queries;  ///< empty only when count = 0
    std::vector<PointId> base_original_ids;
    std::vector<PointId> query_original_ids;
};

/// Seed-deterministic selection without replacement of `count` points as a
/// query set, removed from the base. Throws ConfigError when count >= n (at
/// least one base point must remain).
HoldOutSplit hold_out_queries(const Dataset& dataset, std::uint64_t count, std::uint64_t seed);

}  // namespace suco
