#include "suco/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>

#include "suco/rng.hpp"

namespace suco {

namespace {

constexpr std::int32_t kMaxDim = 1 << 20;
constexpr double kMaxExactInt = 16777216.0;  // 2^24, the float integer limit

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file: " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw FormatError("failed reading file: " + path);
    return buf;
}

std::uint32_t load_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
    buf.push_back(static_cast<unsigned char>(v));
    buf.push_back(static_cast<unsigned char>(v >> 8));
    buf.push_back(static_cast<unsigned char>(v >> 16));
    buf.push_back(static_cast<unsigned char>(v >> 24));
}

std::size_t element_size(VecsKind kind) {
    switch (kind) {
        case VecsKind::U8: return 1;
        default: return 4;
    }
}

// Walks the record framing shared by all three formats and hands each
// record's element bytes to `consume(record_index, element_bytes)`.
// Returns the number of records read and sets d.
template <typename Consume>
std::uint64_t parse_records(const std::string& path, const std::vector<unsigned char>& buf,
                            std::size_t elem_size, std::optional<std::uint64_t> limit,
                            std::uint32_t& d, Consume&& consume) {
    if (buf.empty()) throw FormatError("empty file: " + path);
    std::size_t pos = 0;
    std::uint64_t record = 0;
    d = 0;
    while (pos < buf.size() && (!limit || record < *limit)) {
        if (buf.size() - pos < 4) {
            throw FormatError(path + ": truncated record header at byte offset " +
                              std::to_string(pos) + " (record " + std::to_string(record) + ")");
        }
        const auto dim = static_cast<std::int32_t>(load_u32(buf.data() + pos));
        if (dim <= 0 || dim > kMaxDim) {
            throw FormatError(path + ": record " + std::to_string(record) +
                              " declares invalid dimension " + std::to_string(dim));
        }
        if (record == 0) {
            d = static_cast<std::uint32_t>(dim);
        } else if (static_cast<std::uint32_t>(dim) != d) {
            throw FormatError(path + ": record " + std::to_string(record) + " has dimension " +
                              std::to_string(dim) + ", expected " + std::to_string(d));
        }
        pos += 4;
        const std::size_t body = static_cast<std::size_t>(dim) * elem_size;
        if (buf.size() - pos < body) {
            throw FormatError(path + ": truncated record body at byte offset " +
                              std::to_string(pos) + " (record " + std::to_string(record) + ")");
        }
        consume(record, buf.data() + pos);
        pos += body;
        ++record;
    }
    if (record == 0) {
        throw FormatError(path + ": no records within the read limit");
    }
    return record;
}

void write_file(const std::string& path, const std::vector<unsigned char>& buf) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open file for writing: " + path);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw Error("failed writing file: " + path);
}

}  // namespace

Dataset read_vecs(const std::string& path, VecsKind kind, std::optional<std::uint64_t> limit) {
    const std::vector<unsigned char> buf = read_file(path);
    std::vector<float> values;
    std::uint32_t d = 0;
    const std::uint64_t n =
        parse_records(path, buf, element_size(kind), limit, d,
                      [&](std::uint64_t record, const unsigned char* p) {
            for (std::uint32_t j = 0; j < d; ++j) {
                float v = 0.0f;
                switch (kind) {
                    case VecsKind::F32:
                        v = std::bit_cast<float>(load_u32(p + 4 * static_cast<std::size_t>(j)));
                        if (!std::isfinite(v)) {
                            throw FormatError(path + ": non-finite value in record " +
                                              std::to_string(record));
                        }
                        break;
                    case VecsKind::U8:
                        v = static_cast<float>(p[j]);
                        break;
                    case VecsKind::I32: {
                        const auto i = static_cast<std::int32_t>(
                            load_u32(p + 4 * static_cast<std::size_t>(j)));
                        if (i > static_cast<std::int32_t>(kMaxExactInt) ||
                            i < -static_cast<std::int32_t>(kMaxExactInt)) {
                            throw FormatError(path + ": record " + std::to_string(record) +
                                              " holds " + std::to_string(i) +
                                              ", too large to load into floats exactly");
                        }
                        v = static_cast<float>(i);
                        break;
                    }
                }
                values.push_back(v);
            }
        });
    return Dataset(n, d, std::move(values));
}

void write_vecs(const std::string& path, VecsKind kind, std::uint64_t n, std::uint32_t d,
                std::span<const float> values) {
    if (n < 1 || d < 1) throw ContractError("write_vecs: n and d must be >= 1");
    if (d > static_cast<std::uint32_t>(kMaxDim)) {
        throw ContractError("write_vecs: d exceeds the format's dimension guard");
    }
    if (values.size() != n * static_cast<std::uint64_t>(d)) {
        throw ContractError("write_vecs: value buffer does not hold n x d elements");
    }

    std::vector<unsigned char> buf;
    buf.reserve(n * (4 + d * element_size(kind)));
    for (std::uint64_t i = 0; i < n; ++i) {
        store_u32(buf, d);
        for (std::uint32_t j = 0; j < d; ++j) {
            const float v = values[i * d + j];
            switch (kind) {
                case VecsKind::F32:
                    store_u32(buf, std::bit_cast<std::uint32_t>(v));
                    break;
                case VecsKind::U8: {
                    if (!(v >= 0.0f && v <= 255.0f) || v != std::floor(v)) {
                        throw ContractError("write_vecs: value " + std::to_string(v) +
                                            " is not an integer in [0, 255]");
                    }
                    buf.push_back(static_cast<unsigned char>(v));
                    break;
                }
                case VecsKind::I32: {
                    if (std::abs(static_cast<double>(v)) > kMaxExactInt || v != std::floor(v)) {
                        throw ContractError("write_vecs: value " + std::to_string(v) +
                                            " is not an exactly representable integer");
                    }
                    store_u32(buf, static_cast<std::uint32_t>(static_cast<std::int32_t>(v)));
                    break;
                }
            }
        }
    }
    write_file(path, buf);
}

IntMatrix read_ivecs_raw(const std::string& path, std::optional<std::uint64_t> limit) {
    const std::vector<unsigned char> buf = read_file(path);
    IntMatrix m;
    m.n = parse_records(path, buf, 4, limit, m.d, [&](std::uint64_t, const unsigned char* p) {
        for (std::uint32_t j = 0; j < m.d; ++j) {
            m.values.push_back(
                static_cast<std::int32_t>(load_u32(p + 4 * static_cast<std::size_t>(j))));
        }
    });
    return m;
}

void write_ivecs_raw(const std::string& path, std::uint64_t n, std::uint32_t d,
                     std::span<const std::int32_t> values) {
    if (n < 1 || d < 1) throw ContractError("write_ivecs_raw: n and d must be >= 1");
    if (d > static_cast<std::uint32_t>(kMaxDim)) {
        throw ContractError("write_ivecs_raw: d exceeds the format's dimension guard");
    }
    if (values.size() != n * static_cast<std::uint64_t>(d)) {
        throw ContractError("write_ivecs_raw: value buffer does not hold n x d elements");
    }
    std::vector<unsigned char> buf;
    buf.reserve(n * (4 + d * 4ULL));
    for (std::uint64_t i = 0; i < n; ++i) {
        store_u32(buf, d);
        for (std::uint32_t j = 0; j < d; ++j) {
            store_u32(buf, static_cast<std::uint32_t>(values[i * d + j]));
        }
    }
    write_file(path, buf);
}

HoldOutSplit hold_out_queries(const Dataset& dataset, std::uint64_t count, std::uint64_t seed) {
    const std::uint64_t n = dataset.size();
    if (count >= n) {
        throw ConfigError("cannot hold out " + std::to_string(count) + " of " + std::to_string(n) +
                          " points; at least one base point must remain");
    }
    const std::uint32_t d = dataset.dim();

    // Partial Fisher-Yates: the first `count` slots are the held-out ids.
    std::vector<PointId> ids(n);
    for (std::uint64_t i = 0; i < n; ++i) ids[i] = static_cast<PointId>(i);
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t j = i + uniform_below(rng, n - i);
        std::swap(ids[i], ids[j]);
    }

    std::vector<PointId> query_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count));
    std::vector<PointId> base_ids(ids.begin() + static_cast<std::ptrdiff_t>(count), ids.end());
    std::sort(query_ids.begin(), query_ids.end());
    std::sort(base_ids.begin(), base_ids.end());

    std::vector<float> base_values;
    base_values.reserve(base_ids.size() * d);
    for (const PointId id : base_ids) {
        const auto row = dataset.row(id);
        base_values.insert(base_values.end(), row.begin(), row.end());
    }
    HoldOutSplit split{Dataset(base_ids.size(), d, std::move(base_values)), std::nullopt,
                       std::move(base_ids), std::move(query_ids)};
    if (count > 0) {
        std::vector<float> query_values;
        query_values.reserve(split.query_original_ids.size() * d);
        for (const PointId id : split.query_original_ids) {
            const auto row = dataset.row(id);
            query_values.insert(query_values.end(), row.begin(), row.end());
        }
        split.queries.emplace(count, d, std::move(query_values));
    }
    return split;
}

}  // namespace suco
