#include "suco/core.hpp"

#include <cmath>
#include <cstring>

namespace suco {

Dataset::Dataset(std::uint64_t n, std::uint32_t d, std::vector<float> values)
    : n_(n), d_(d), data_(std::move(values)) {
    if (n_ < 1 || d_ < 1) {
        throw ContractError("dataset requires n >= 1 and d >= 1");
    }
    if (data_.size() != n_ * static_cast<std::uint64_t>(d_)) {
        throw ContractError("dataset buffer size does not match n * d");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i])) {
            throw ContractError("dataset component " + std::to_string(i) + " is not finite");
        }
    }
}

std::uint64_t Dataset::content_hash() const {
    std::uint64_t h = fnv1a(data_.data(), data_.size() * sizeof(float));
    h = fnv1a(&n_, sizeof(n_), h);
    h = fnv1a(&d_, sizeof(d_), h);
    return h;
}

double sq_euclidean(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size()) {
        throw ContractError("sq_euclidean: length mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
    }
    return detail::sq_euclidean_raw(a.data(), b.data(), a.size());
}

double euclidean(std::span<const float> a, std::span<const float> b) {
    return std::sqrt(sq_euclidean(a, b));
}

std::uint64_t fnv1a(const void* bytes, std::size_t len, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace suco
