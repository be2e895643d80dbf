#include "suco/index.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <utility>

#include "suco/parallel.hpp"
#include "suco/rng.hpp"

namespace suco {

namespace {

constexpr char kMagic[4] = {'S', 'U', 'C', 'O'};
constexpr std::uint32_t kFormatVersion = 1;

struct ByteWriter {
    std::vector<unsigned char> buf;

    void u32(std::uint32_t v) {
        buf.push_back(static_cast<unsigned char>(v));
        buf.push_back(static_cast<unsigned char>(v >> 8));
        buf.push_back(static_cast<unsigned char>(v >> 16));
        buf.push_back(static_cast<unsigned char>(v >> 24));
    }
    void u64(std::uint64_t v) {
        u32(static_cast<std::uint32_t>(v));
        u32(static_cast<std::uint32_t>(v >> 32));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
};

struct ByteReader {
    std::span<const unsigned char> buf;
    std::size_t pos = 0;

    void need(std::size_t count, const char* section) {
        if (buf.size() - pos < count) {
            throw CorruptIndexError("index file truncated in section '" + std::string(section) +
                                    "' at byte offset " + std::to_string(pos));
        }
    }
    std::uint32_t u32(const char* section) {
        need(4, section);
        const std::uint32_t v = static_cast<std::uint32_t>(buf[pos]) |
                                (static_cast<std::uint32_t>(buf[pos + 1]) << 8) |
                                (static_cast<std::uint32_t>(buf[pos + 2]) << 16) |
                                (static_cast<std::uint32_t>(buf[pos + 3]) << 24);
        pos += 4;
        return v;
    }
    std::uint64_t u64(const char* section) {
        const std::uint64_t lo = u32(section);
        const std::uint64_t hi = u32(section);
        return lo | (hi << 32);
    }
    float f32(const char* section) { return std::bit_cast<float>(u32(section)); }
};

void corrupt(const std::string& section, const std::string& detail) {
    throw CorruptIndexError("index section '" + section + "': " + detail);
}

}  // namespace

Imi build_imi(std::span<const ClusterId> first, std::span<const ClusterId> second,
              std::uint32_t k_half) {
    if (first.size() != second.size()) {
        throw ContractError("assignment arrays differ in length: " + std::to_string(first.size()) +
                            " vs " + std::to_string(second.size()));
    }
    if (k_half < 1) throw ContractError("build_imi: k_half must be >= 1");
    const std::uint64_t n = first.size();
    const std::uint64_t cells = static_cast<std::uint64_t>(k_half) * k_half;

    Imi imi;
    imi.k_half = k_half;
    imi.offsets.assign(cells + 1, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (first[i] >= k_half || second[i] >= k_half) {
            throw ContractError("assignment out of range at point " + std::to_string(i));
        }
        ++imi.offsets[imi.cell_index(first[i], second[i]) + 1];
    }
    for (std::uint64_t c = 1; c <= cells; ++c) imi.offsets[c] += imi.offsets[c - 1];

    imi.ids.resize(n);
    std::vector<std::uint64_t> cursor(imi.offsets.begin(), imi.offsets.end() - 1);
    for (std::uint64_t i = 0; i < n; ++i) {
        imi.ids[cursor[imi.cell_index(first[i], second[i])]++] = static_cast<PointId>(i);
    }
    return imi;
}

SucoIndex build_index(const Dataset& dataset, const IndexParams& params, unsigned threads) {
    const std::uint64_t n = dataset.size();
    if (params.k_half < 1) throw ConfigError("k_half must be >= 1");
    if (params.iterations < 1) throw ConfigError("iterations must be >= 1");
    if (n < params.k_half) {
        throw ConfigError("dataset has n = " + std::to_string(n) +
                          " points, fewer than k_half = " + std::to_string(params.k_half));
    }
    if (n > std::numeric_limits<PointId>::max()) {
        throw ContractError("dataset exceeds 32-bit point-id capacity");
    }

    SucoIndex index;
    index.layout = sample_subspaces(dataset.dim(), params.num_subspaces, params.mode, params.seed);
    index.params = params;
    index.n = n;
    index.subspaces.resize(params.num_subspaces);

    // One clustering job per (subspace, half); each is single-threaded and
    // independently seeded, so the result is the same for any thread budget.
    const std::uint32_t ns = params.num_subspaces;
    std::vector<std::vector<ClusterId>> assignments(static_cast<std::size_t>(2) * ns);
    parallel_chunks(static_cast<std::size_t>(2) * ns, threads, 1,
                    [&](std::size_t job, std::size_t, std::size_t) {
        const auto si = static_cast<std::uint32_t>(job / 2);
        const Half half = (job % 2 == 0) ? Half::First : Half::Second;
        const std::uint32_t h = index.layout.half_dim(si, half);

        std::vector<float> projected(n * h);
        for (std::uint64_t i = 0; i < n; ++i) {
            project_into(dataset.row(i), index.layout, si, half, {projected.data() + i * h, h});
        }
        KMeansModel model = kmeans(projected.data(), n, h, params.k_half, params.iterations,
                                   derive_seed(params.seed, job), 1);
        auto& codebook = index.subspaces[si];
        auto& centroids =
            (half == Half::First) ? codebook.centroids_first : codebook.centroids_second;
        centroids = std::move(model.centroids);
        assignments[job] = std::move(model.assignments);
    });

    for (std::uint32_t si = 0; si < ns; ++si) {
        index.subspaces[si].imi = build_imi(assignments[2 * static_cast<std::size_t>(si)],
                                            assignments[2 * static_cast<std::size_t>(si) + 1],
                                            params.k_half);
    }
    return index;
}

std::vector<unsigned char> serialize_index(const SucoIndex& index) {
    ByteWriter w;
    w.buf.insert(w.buf.end(), kMagic, kMagic + 4);
    w.u32(kFormatVersion);
    w.u64(index.n);
    w.u32(index.layout.d);
    w.u32(index.params.num_subspaces);
    w.u32(index.params.k_half);
    w.u32(index.params.iterations);
    w.u64(index.params.seed);
    w.u32(static_cast<std::uint32_t>(index.params.mode));

    for (const auto& dims : index.layout.subspaces) {
        w.u32(static_cast<std::uint32_t>(dims.size()));
        for (const std::uint32_t dim : dims) w.u32(dim);
    }
    for (const auto& codebook : index.subspaces) {
        for (const float v : codebook.centroids_first) w.f32(v);
        for (const float v : codebook.centroids_second) w.f32(v);
        for (const std::uint64_t off : codebook.imi.offsets) w.u64(off);
        for (const PointId id : codebook.imi.ids) w.u32(id);
    }
    return w.buf;
}

void save_index(const SucoIndex& index, const std::string& path) {
    const std::vector<unsigned char> buf = serialize_index(index);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open index file for writing: " + path);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw Error("failed writing index file: " + path);
}

SucoIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptIndexError("cannot open index file: " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad()) throw CorruptIndexError("failed reading index file: " + path);
    return deserialize_index(buf);
}

SucoIndex deserialize_index(std::span<const unsigned char> bytes) {
    ByteReader r{bytes};

    r.need(4, "magic");
    if (!std::equal(kMagic, kMagic + 4, bytes.begin())) corrupt("magic", "bad magic bytes");
    r.pos = 4;
    const std::uint32_t version = r.u32("version");
    if (version != kFormatVersion) {
        corrupt("version", "unsupported format version " + std::to_string(version));
    }

    SucoIndex index;
    index.n = r.u64("header");
    const std::uint32_t d = r.u32("header");
    const std::uint32_t ns = r.u32("header");
    index.params.num_subspaces = ns;
    index.params.k_half = r.u32("header");
    index.params.iterations = r.u32("header");
    index.params.seed = r.u64("header");
    const std::uint32_t mode = r.u32("header");
    if (index.n < 1) corrupt("header", "n must be >= 1");
    if (index.n > std::numeric_limits<PointId>::max()) {
        corrupt("header", "n exceeds 32-bit point-id capacity");
    }
    if (d < 1) corrupt("header", "d must be >= 1");
    if (ns < 2) corrupt("header", "subspace count must be >= 2");
    if (index.params.k_half < 1) corrupt("header", "k_half must be >= 1");
    if (index.params.iterations < 1) corrupt("header", "iterations must be >= 1");
    if (index.n < index.params.k_half) corrupt("header", "n smaller than k_half");
    if (mode > 1) corrupt("header", "unknown subspace mode " + std::to_string(mode));
    index.params.mode = static_cast<SubspaceMode>(mode);

    index.layout.d = d;
    index.layout.num_subspaces = ns;
    index.layout.seed = index.params.seed;
    index.layout.mode = index.params.mode;
    index.layout.subspaces.resize(ns);
    index.layout.half_split.resize(ns);
    std::vector<bool> dim_seen(d, false);
    for (std::uint32_t si = 0; si < ns; ++si) {
        const std::uint32_t count = r.u32("layout");
        if (count < 2) corrupt("layout", "subspace " + std::to_string(si) + " has < 2 dimensions");
        auto& dims = index.layout.subspaces[si];
        dims.resize(count);
        for (std::uint32_t j = 0; j < count; ++j) {
            const std::uint32_t dim = r.u32("layout");
            if (dim >= d) corrupt("layout", "dimension index " + std::to_string(dim) + " >= d");
            if (dim_seen[dim]) corrupt("layout", "dimension " + std::to_string(dim) + " repeated");
            dim_seen[dim] = true;
            dims[j] = dim;
        }
        index.layout.half_split[si] = count / 2;
    }
    for (std::uint32_t dim = 0; dim < d; ++dim) {
        if (!dim_seen[dim]) corrupt("layout", "dimension " + std::to_string(dim) + " missing");
    }

    const std::uint32_t k_half = index.params.k_half;
    const std::uint64_t cells = static_cast<std::uint64_t>(k_half) * k_half;
    index.subspaces.resize(ns);
    std::vector<bool> id_seen;
    for (std::uint32_t si = 0; si < ns; ++si) {
        auto& codebook = index.subspaces[si];
        const std::uint32_t h1 = index.layout.half_dim(si, Half::First);
        const std::uint32_t h2 = index.layout.half_dim(si, Half::Second);
        codebook.centroids_first.resize(static_cast<std::size_t>(k_half) * h1);
        for (float& v : codebook.centroids_first) {
            v = r.f32("centroids");
            if (!std::isfinite(v)) corrupt("centroids", "non-finite centroid value");
        }
        codebook.centroids_second.resize(static_cast<std::size_t>(k_half) * h2);
        for (float& v : codebook.centroids_second) {
            v = r.f32("centroids");
            if (!std::isfinite(v)) corrupt("centroids", "non-finite centroid value");
        }

        auto& imi = codebook.imi;
        imi.k_half = k_half;
        imi.offsets.resize(cells + 1);
        for (std::uint64_t c = 0; c <= cells; ++c) {
            imi.offsets[c] = r.u64("imi offsets");
            if (c == 0 && imi.offsets[0] != 0) corrupt("imi offsets", "first offset must be 0");
            if (c > 0 && imi.offsets[c] < imi.offsets[c - 1]) {
                corrupt("imi offsets", "offsets decrease at cell " + std::to_string(c - 1));
            }
        }
        if (imi.offsets[cells] != index.n) corrupt("imi offsets", "offsets do not cover n points");

        imi.ids.resize(index.n);
        id_seen.assign(index.n, false);
        for (std::uint64_t i = 0; i < index.n; ++i) {
            const std::uint32_t id = r.u32("imi ids");
            if (id >= index.n) corrupt("imi ids", "point id " + std::to_string(id) + " >= n");
            if (id_seen[id]) corrupt("imi ids", "point id " + std::to_string(id) + " repeated");
            id_seen[id] = true;
            imi.ids[i] = id;
        }
    }
    if (r.pos != bytes.size()) {
        corrupt("trailer", std::to_string(bytes.size() - r.pos) + " trailing bytes");
    }
    return index;
}

void check_compatible(const SucoIndex& index, const Dataset& dataset) {
    if (index.n != dataset.size()) {
        throw IncompatibilityError("index was built from n = " + std::to_string(index.n) +
                                   " points but dataset has n = " +
                                   std::to_string(dataset.size()));
    }
    if (index.layout.d != dataset.dim()) {
        throw IncompatibilityError("index was built for d = " + std::to_string(index.layout.d) +
                                   " but dataset has d = " + std::to_string(dataset.dim()));
    }
}

}  // namespace suco
