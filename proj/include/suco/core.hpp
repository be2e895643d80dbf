#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "suco/error.hpp"

namespace suco {

using PointId = std::uint32_t;

/// Immutable in-memory collection of n points in d dimensions, stored as a
/// row-major float matrix. Point ids are 0..n-1 and stable for the lifetime
/// of the dataset. Safe for unrestricted concurrent reads.
class Dataset {
public:
    Dataset(std::uint64_t n, std::uint32_t d, std::vector<float> values);

    std::uint64_t size() const { return n_; }
    std::uint32_t dim() const { return d_; }

    std::span<const float> row(std::uint64_t i) const {
        return {data_.data() + i * d_, d_};
    }
    const float* data() const { return data_.data(); }

    /// FNV-1a over the raw matrix bytes plus (n, d); identifies a dataset in
    /// reports and ground-truth cache file names.
    std::uint64_t content_hash() const;

private:
    std::uint64_t n_;
    std::uint32_t d_;
    std::vector<float> data_;
};

/// One k-NN answer entry: point id plus full-space Euclidean distance.
struct Neighbor {
    PointId id;
    double distance;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Result of a k-NN query: entries sorted ascending by distance, ties broken
/// ascending by point id, no duplicates, at most k entries.
struct QueryResult {
    std::vector<Neighbor> entries;
};

/// Squared Euclidean distance, accumulated in 64-bit floats. Squared
/// distances are the comparison currency everywhere inside the library;
/// square roots are taken only for user-facing results and metrics.
double sq_euclidean(std::span<const float> a, std::span<const float> b);

/// Euclidean distance (square root of sq_euclidean).
double euclidean(std::span<const float> a, std::span<const float> b);

namespace detail {

/// Unchecked squared-distance kernel over raw pointers, unrolled into four
/// independent accumulators. Matches the plain scalar loop within 1e-6
/// relative error (summation order differs).
inline double sq_euclidean_raw(const float* a, const float* b, std::size_t len) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        const double d0 = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        const double d1 = static_cast<double>(a[i + 1]) - static_cast<double>(b[i + 1]);
        const double d2 = static_cast<double>(a[i + 2]) - static_cast<double>(b[i + 2]);
        const double d3 = static_cast<double>(a[i + 3]) - static_cast<double>(b[i + 3]);
        acc0 += d0 * d0;
        acc1 += d1 * d1;
        acc2 += d2 * d2;
        acc3 += d3 * d3;
    }
    for (; i < len; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc0 += d * d;
    }
    return (acc0 + acc1) + (acc2 + acc3);
}

}  // namespace detail

/// FNV-1a 64-bit over a byte range.
std::uint64_t fnv1a(const void* bytes, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Lowercase hex rendering of a 64-bit hash.
std::string hash_hex(std::uint64_t h);

}  // namespace suco
