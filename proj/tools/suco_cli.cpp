#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "suco/core.hpp"
#include "suco/eval.hpp"
#include "suco/index.hpp"
#include "suco/io.hpp"
#include "suco/parallel.hpp"
#include "suco/query.hpp"
#include "suco/sc_linear.hpp"
#include "suco/subspace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    double ms() const { return seconds() * 1000.0; }
};

suco::VecsKind parse_kind(const std::string& kind, const std::string& path) {
    if (kind == "fvecs") return suco::VecsKind::F32;
    if (kind == "bvecs") return suco::VecsKind::U8;
    if (kind == "ivecs") return suco::VecsKind::I32;
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".fvecs") return suco::VecsKind::F32;
    if (ext == ".bvecs") return suco::VecsKind::U8;
    if (ext == ".ivecs") return suco::VecsKind::I32;
    throw suco::ConfigError("cannot infer the vector format of '" + path +
                            "' from its extension; pass --kind");
}

suco::Dataset load_data(const std::string& path, const std::string& kind, std::uint64_t limit) {
    return suco::read_vecs(path, parse_kind(kind, path),
                           limit == 0 ? std::nullopt : std::optional<std::uint64_t>(limit));
}

suco::SubspaceMode parse_mode(const std::string& mode) {
    return mode == "shuffled" ? suco::SubspaceMode::Shuffled : suco::SubspaceMode::Contiguous;
}

std::string dataset_label(const std::string& path) { return fs::path(path).filename().string(); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

std::string csv_number(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw suco::Error("cannot open file for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw suco::Error("failed writing file: " + path);
}

struct Batch {
    std::vector<suco::QueryResult> results;
    std::vector<double> per_query_ms;
    double wall_seconds = 0.0;

    double mean_latency_ms() const {
        double sum = 0.0;
        for (const double v : per_query_ms) sum += v;
        return per_query_ms.empty() ? 0.0 : sum / static_cast<double>(per_query_ms.size());
    }
    double qps() const {
        return wall_seconds > 0.0 ? static_cast<double>(results.size()) / wall_seconds : 0.0;
    }
};

Batch run_suco_batch(const suco::SucoIndex& index, const suco::Dataset& base,
                     const suco::Dataset& queries, const suco::CollisionParams& params,
                     suco::TraversalKind traversal, unsigned threads) {
    Batch batch;
    const std::uint64_t nq = queries.size();
    batch.results.resize(nq);
    batch.per_query_ms.resize(nq);
    Timer wall;
    suco::parallel_chunks(nq, threads, 1, [&](std::size_t, std::size_t lo, std::size_t hi) {
        thread_local suco::QueryScratch scratch;
        for (std::size_t qi = lo; qi < hi; ++qi) {
            Timer t;
            batch.results[qi] =
                suco::knn_query(index, base, queries.row(qi), params, traversal, &scratch);
            batch.per_query_ms[qi] = t.ms();
        }
    });
    batch.wall_seconds = wall.seconds();
    return batch;
}

Batch run_sclinear_batch(const suco::Dataset& base, const suco::SubspaceLayout& layout,
                         const suco::Dataset& queries, const suco::CollisionParams& params,
                         unsigned threads) {
    Batch batch;
    const std::uint64_t nq = queries.size();
    batch.results.resize(nq);
    batch.per_query_ms.resize(nq);
    Timer wall;
    suco::parallel_chunks(nq, threads, 1, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t qi = lo; qi < hi; ++qi) {
            Timer t;
            batch.results[qi] = suco::sc_linear_query(base, layout, queries.row(qi), params);
            batch.per_query_ms[qi] = t.ms();
        }
    });
    batch.wall_seconds = wall.seconds();
    return batch;
}

struct Metrics {
    double mean_recall = 0.0;
    double mean_mre = 0.0;
};

Metrics compute_metrics(const std::vector<suco::QueryResult>& results,
                        const suco::GroundTruth& truth, std::uint32_t k) {
    if (truth.entries.size() != results.size()) {
        throw suco::ConfigError("ground truth covers " + std::to_string(truth.entries.size()) +
                                " queries but " + std::to_string(results.size()) + " were run");
    }
    if (truth.k < k) {
        throw suco::ConfigError("ground truth depth " + std::to_string(truth.k) +
                                " is smaller than k = " + std::to_string(k));
    }
    Metrics m;
    for (std::size_t qi = 0; qi < results.size(); ++qi) {
        m.mean_recall += suco::recall(results[qi], truth.entries[qi], k);
        m.mean_mre += suco::mre(results[qi], truth.entries[qi], k);
    }
    m.mean_recall /= static_cast<double>(results.size());
    m.mean_mre /= static_cast<double>(results.size());
    return m;
}

void save_results(const std::string& prefix, const std::vector<suco::QueryResult>& results) {
    const std::uint64_t nq = results.size();
    const auto k = static_cast<std::uint32_t>(results.front().entries.size());
    std::vector<std::int32_t> ids;
    std::vector<float> dists;
    ids.reserve(nq * k);
    dists.reserve(nq * k);
    for (const auto& r : results) {
        if (r.entries.size() != k) {
            throw suco::Error("results are ragged; cannot write fixed-width records");
        }
        for (const auto& nb : r.entries) {
            ids.push_back(static_cast<std::int32_t>(nb.id));
            dists.push_back(static_cast<float>(nb.distance));
        }
    }
    suco::write_ivecs_raw(prefix + ".ivecs", nq, k, ids);
    suco::write_vecs(prefix + ".fvecs", suco::VecsKind::F32, nq, k, dists);
}

suco::GroundTruth load_truth(const std::string& prefix) {
    return suco::load_ground_truth(prefix + ".ivecs", prefix + ".fvecs");
}

// ---------------------------------------------------------------- build ---

struct BuildOpts {
    std::string dataset;
    std::string kind = "auto";
    std::string out;
    std::uint32_t subspaces = 8;
    std::uint32_t khalf = 50;
    std::uint32_t iters = 10;
    std::uint64_t seed = 42;
    std::string mode = "contiguous";
    std::uint64_t limit = 0;
    unsigned threads = 0;
};

int run_build(const BuildOpts& o) {
    const suco::Dataset data = load_data(o.dataset, o.kind, o.limit);
    const suco::IndexParams params{o.subspaces, o.khalf, o.iters, o.seed, parse_mode(o.mode)};
    Timer t;
    const suco::SucoIndex index = suco::build_index(data, params, o.threads);
    const double build_seconds = t.seconds();
    suco::save_index(index, o.out);

    json report{{"command", "build"},
                {"dataset", dataset_label(o.dataset)},
                {"dataset_hash", suco::hash_hex(data.content_hash())},
                {"n", data.size()},
                {"d", data.dim()},
                {"num_subspaces", params.num_subspaces},
                {"k_half", params.k_half},
                {"iterations", params.iterations},
                {"seed", params.seed},
                {"mode", o.mode},
                {"build_seconds", build_seconds},
                {"index_bytes", fs::file_size(o.out)},
                {"index_path", o.out}};
    std::cout << report.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- query ---

struct QueryOpts {
    std::string index;
    std::string dataset;
    std::string kind = "auto";
    std::string queries;
    std::string query_kind = "auto";
    double alpha = 0.05;
    double beta = 0.005;
    std::uint32_t k = 50;
    std::string traversal = "da";
    std::string truth;
    std::string out;
    unsigned threads = 0;
};

int run_query(const QueryOpts& o) {
    const suco::SucoIndex index = suco::load_index(o.index);
    const suco::Dataset base = load_data(o.dataset, o.kind, 0);
    const suco::Dataset queries = load_data(o.queries, o.query_kind, 0);
    suco::check_compatible(index, base);

    const suco::CollisionParams params{o.alpha, o.beta, o.k};
    params.validate(base.size());
    const auto traversal = o.traversal == "ms" ? suco::TraversalKind::MultiSequence
                                               : suco::TraversalKind::DynamicActivation;
    const Batch batch = run_suco_batch(index, base, queries, params, traversal, o.threads);
    if (!o.out.empty()) save_results(o.out, batch.results);

    json report{{"command", "query"},
                {"dataset", dataset_label(o.dataset)},
                {"dataset_hash", suco::hash_hex(base.content_hash())},
                {"queries", queries.size()},
                {"alpha", o.alpha},
                {"beta", o.beta},
                {"k", o.k},
                {"traversal", o.traversal},
                {"threads", suco::effective_threads(o.threads)},
                {"mean_latency_ms", batch.mean_latency_ms()},
                {"qps", batch.qps()}};
    if (!o.truth.empty()) {
        const Metrics m = compute_metrics(batch.results, load_truth(o.truth), o.k);
        report["recall"] = m.mean_recall;
        report["mre"] = number_or_null(m.mean_mre);
    }
    std::cout << report.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------- groundtruth ---

struct TruthOpts {
    std::string dataset;
    std::string kind = "auto";
    std::string queries;
    std::string query_kind = "auto";
    std::uint32_t k = 100;
    std::string out;
    unsigned threads = 0;
};

int run_groundtruth(const TruthOpts& o) {
    const suco::Dataset base = load_data(o.dataset, o.kind, 0);
    const suco::Dataset queries = load_data(o.queries, o.query_kind, 0);
    if (o.k < 1 || o.k > base.size()) {
        throw suco::ConfigError("ground-truth depth k must be in [1, n]");
    }
    Timer t;
    const suco::GroundTruth truth = suco::compute_ground_truth(base, queries, o.k, o.threads);
    suco::save_ground_truth(truth, o.out + ".ivecs", o.out + ".fvecs");

    json report{{"command", "groundtruth"},
                {"dataset", dataset_label(o.dataset)},
                {"dataset_hash", suco::hash_hex(base.content_hash())},
                {"queries", queries.size()},
                {"k", o.k},
                {"seconds", t.seconds()},
                {"ids_path", o.out + ".ivecs"},
                {"dists_path", o.out + ".fvecs"}};
    std::cout << report.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- bench ---

struct BenchOpts {
    std::string dataset;
    std::string kind = "auto";
    std::string queries;
    std::string query_kind = "auto";
    std::string truth;
    std::vector<double> alphas{0.05};
    std::vector<double> betas{0.005};
    std::uint32_t k = 50;
    std::uint32_t subspaces = 8;
    std::uint32_t khalf = 50;
    std::uint32_t iters = 10;
    std::uint64_t seed = 42;
    std::string mode = "contiguous";
    bool compare_traversal = false;
    bool include_sclinear = false;
    std::string csv = "bench.csv";
    std::string json_path = "bench.json";
    unsigned threads = 0;
};

json make_row(const BenchOpts& o, const suco::Dataset& base, const std::string& algorithm,
              const std::string& traversal, double alpha, double beta, double build_seconds,
              std::uint64_t index_bytes, const Batch& batch, const Metrics& m) {
    return json{{"schema_version", kSchemaVersion},
                {"dataset", dataset_label(o.dataset)},
                {"dataset_hash", suco::hash_hex(base.content_hash())},
                {"n", base.size()},
                {"d", base.dim()},
                {"algorithm", algorithm},
                {"traversal", traversal},
                {"num_subspaces", o.subspaces},
                {"k_half", o.khalf},
                {"iterations", o.iters},
                {"seed", o.seed},
                {"mode", o.mode},
                {"alpha", alpha},
                {"beta", beta},
                {"k", o.k},
                {"threads", suco::effective_threads(o.threads)},
                {"build_seconds", build_seconds},
                {"index_bytes", index_bytes},
                {"mean_latency_ms", batch.mean_latency_ms()},
                {"qps", batch.qps()},
                {"recall", m.mean_recall},
                {"mre", number_or_null(m.mean_mre)}};
}

void append_csv(std::ostringstream& csv, const json& row) {
    csv << row["schema_version"] << ',' << row["dataset"].get<std::string>() << ','
        << row["dataset_hash"].get<std::string>() << ',' << row["n"] << ',' << row["d"] << ','
        << row["algorithm"].get<std::string>() << ',' << row["traversal"].get<std::string>() << ','
        << row["num_subspaces"] << ',' << row["k_half"] << ',' << row["iterations"] << ','
        << row["seed"] << ',' << row["mode"].get<std::string>() << ','
        << csv_number(row["alpha"].get<double>()) << ',' << csv_number(row["beta"].get<double>())
        << ',' << row["k"] << ',' << row["threads"] << ','
        << csv_number(row["build_seconds"].get<double>()) << ',' << row["index_bytes"] << ','
        << csv_number(row["mean_latency_ms"].get<double>()) << ','
        << csv_number(row["qps"].get<double>()) << ',' << csv_number(row["recall"].get<double>())
        << ',' << (row["mre"].is_null() ? "inf" : csv_number(row["mre"].get<double>())) << '\n';
}

int run_bench(const BenchOpts& o) {
    const suco::Dataset base = load_data(o.dataset, o.kind, 0);
    const suco::Dataset queries = load_data(o.queries, o.query_kind, 0);

    suco::GroundTruth truth;
    if (!o.truth.empty()) {
        truth = load_truth(o.truth);
    } else {
        truth = suco::compute_ground_truth(base, queries, std::max(o.k, 100U), o.threads);
    }

    const suco::IndexParams params{o.subspaces, o.khalf, o.iters, o.seed, parse_mode(o.mode)};
    Timer build_timer;
    const suco::SucoIndex index = suco::build_index(base, params, o.threads);
    const double build_seconds = build_timer.seconds();
    const std::uint64_t index_bytes = suco::serialize_index(index).size();

    std::ostringstream csv;
    csv << "schema_version,dataset,dataset_hash,n,d,algorithm,traversal,num_subspaces,k_half,"
           "iterations,seed,mode,alpha,beta,k,threads,build_seconds,index_bytes,mean_latency_ms,"
           "qps,recall,mre\n";
    json rows = json::array();
    json comparisons = json::array();

    for (const double alpha : o.alphas) {
        for (const double beta : o.betas) {
            const suco::CollisionParams cp{alpha, beta, o.k};
            cp.validate(base.size());

            const Batch da = run_suco_batch(index, base, queries, cp,
                                            suco::TraversalKind::DynamicActivation, o.threads);
            const Metrics m_da = compute_metrics(da.results, truth, o.k);
            rows.push_back(make_row(o, base, "suco", "dynamic-activation", alpha, beta,
                                    build_seconds, index_bytes, da, m_da));
            append_csv(csv, rows.back());

            if (o.compare_traversal) {
                const Batch ms = run_suco_batch(index, base, queries, cp,
                                                suco::TraversalKind::MultiSequence, o.threads);
                const Metrics m_ms = compute_metrics(ms.results, truth, o.k);
                rows.push_back(make_row(o, base, "suco", "multi-sequence", alpha, beta,
                                        build_seconds, index_bytes, ms, m_ms));
                append_csv(csv, rows.back());

                for (std::size_t qi = 0; qi < queries.size(); ++qi) {
                    if (!(da.results[qi].entries == ms.results[qi].entries)) {
                        throw suco::Error(
                            "traversal mismatch: dynamic activation and multi-sequence returned "
                            "different results for query " + std::to_string(qi));
                    }
                }
                comparisons.push_back(
                    {{"alpha", alpha},
                     {"beta", beta},
                     {"identical_results", true},
                     {"da_mean_latency_ms", da.mean_latency_ms()},
                     {"ms_mean_latency_ms", ms.mean_latency_ms()},
                     {"ms_over_da_latency", ms.mean_latency_ms() / da.mean_latency_ms()}});
            }
            if (o.include_sclinear) {
                const Batch lin = run_sclinear_batch(base, index.layout, queries, cp, o.threads);
                const Metrics m_lin = compute_metrics(lin.results, truth, o.k);
                rows.push_back(
                    make_row(o, base, "sc-linear", "none", alpha, beta, 0.0, 0, lin, m_lin));
                append_csv(csv, rows.back());
            }
        }
    }

    json report{{"schema_version", kSchemaVersion},
                {"command", "bench"},
                {"dataset", dataset_label(o.dataset)},
                {"dataset_hash", suco::hash_hex(base.content_hash())},
                {"rows", rows}};
    if (!comparisons.empty()) report["traversal_comparisons"] = comparisons;

    write_text(o.csv, csv.str());
    write_text(o.json_path, report.dump(2) + "\n");
    std::cout << report.dump(2) << "\n";
    return 0;
}

// -------------------------------------------------------------- scscore ---

struct ScScoreOpts {
    std::string dataset;
    std::string kind = "auto";
    std::string queries;
    std::string query_kind = "auto";
    std::uint32_t subspaces = 8;
    double alpha = 0.1;
    std::uint64_t seed = 42;
    std::string mode = "contiguous";
    std::string out = "scscore.csv";
    std::uint32_t sample = 0;
    unsigned threads = 0;
};

int run_scscore(const ScScoreOpts& o) {
    const suco::Dataset base = load_data(o.dataset, o.kind, 0);
    const suco::Dataset queries = load_data(o.queries, o.query_kind, 0);
    const suco::SubspaceLayout layout =
        suco::sample_subspaces(base.dim(), o.subspaces, parse_mode(o.mode), o.seed);
    const suco::ScoreRankProfile profile =
        suco::score_rank_profile(base, layout, queries, o.alpha, o.threads);

    const std::uint64_t n = profile.mean_scores.size();
    std::vector<std::uint64_t> ranks;
    if (o.sample == 0 || o.sample >= n) {
        ranks.resize(n);
        for (std::uint64_t r = 0; r < n; ++r) ranks[r] = r + 1;
    } else {
        // log-spaced sample of ranks, always including 1 and n
        for (std::uint32_t t = 0; t < o.sample; ++t) {
            const double frac = static_cast<double>(t) / static_cast<double>(o.sample - 1);
            const auto rank = static_cast<std::uint64_t>(
                std::llround(std::exp(frac * std::log(static_cast<double>(n)))));
            if (ranks.empty() || rank > ranks.back()) ranks.push_back(rank);
        }
    }

    std::ostringstream csv;
    csv << "rank,mean_score\n";
    for (const std::uint64_t r : ranks) {
        csv << r << ',' << csv_number(profile.mean_scores[r - 1]) << '\n';
    }
    write_text(o.out, csv.str());

    json report{{"command", "scscore"},
                {"dataset", dataset_label(o.dataset)},
                {"dataset_hash", suco::hash_hex(base.content_hash())},
                {"queries", queries.size()},
                {"num_subspaces", o.subspaces},
                {"alpha", o.alpha},
                {"mode", o.mode},
                {"rows", ranks.size()},
                {"mean_score_rank_1", profile.mean_scores.front()},
                {"mean_score_rank_n", profile.mean_scores.back()},
                {"csv_path", o.out}};
    std::cout << report.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------- sclinear ---

struct ScLinearOpts {
    std::string dataset;
    std::string kind = "auto";
    std::string queries;
    std::string query_kind = "auto";
    double alpha = 0.05;
    double beta = 0.005;
    std::uint32_t k = 50;
    std::uint32_t subspaces = 8;
    std::uint64_t seed = 42;
    std::string mode = "contiguous";
    std::string truth;
    std::string out;
    std::string index;
    unsigned threads = 0;
};

int run_sclinear(const ScLinearOpts& o) {
    const suco::Dataset base = load_data(o.dataset, o.kind, 0);
    const suco::Dataset queries = load_data(o.queries, o.query_kind, 0);
    const suco::CollisionParams params{o.alpha, o.beta, o.k};
    params.validate(base.size());
    const suco::SubspaceLayout layout =
        suco::sample_subspaces(base.dim(), o.subspaces, parse_mode(o.mode), o.seed);

    const Batch batch = run_sclinear_batch(base, layout, queries, params, o.threads);
    if (!o.out.empty()) save_results(o.out, batch.results);

    json report{{"command", "sclinear"},
                {"dataset", dataset_label(o.dataset)},
                {"dataset_hash", suco::hash_hex(base.content_hash())},
                {"queries", queries.size()},
                {"num_subspaces", o.subspaces},
                {"alpha", o.alpha},
                {"beta", o.beta},
                {"k", o.k},
                {"threads", suco::effective_threads(o.threads)},
                {"mean_latency_ms", batch.mean_latency_ms()},
                {"qps", batch.qps()}};
    if (!o.truth.empty()) {
        const Metrics m = compute_metrics(batch.results, load_truth(o.truth), o.k);
        report["recall"] = m.mean_recall;
        report["mre"] = number_or_null(m.mean_mre);
    }
    if (!o.index.empty()) {
        const suco::SucoIndex index = suco::load_index(o.index);
        suco::check_compatible(index, base);
        const Batch suco_batch = run_suco_batch(index, base, queries, params,
                                                suco::TraversalKind::DynamicActivation, o.threads);
        report["suco_mean_latency_ms"] = suco_batch.mean_latency_ms();
        report["suco_speedup_over_sclinear"] =
            batch.mean_latency_ms() / suco_batch.mean_latency_ms();
    }
    std::cout << report.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SuCo: subspace-collision approximate nearest neighbor search"};
    app.set_version_flag("--version", "suco 1.0.0");
    app.require_subcommand(1);

    const std::vector<std::string> kinds{"auto", "fvecs", "bvecs", "ivecs"};
    const std::vector<std::string> modes{"contiguous", "shuffled"};

    BuildOpts b;
    auto* build = app.add_subcommand("build", "Build an index from a dataset file");
    build->add_option("dataset", b.dataset, "Dataset file (.fvecs/.bvecs)")->required();
    build->add_option("--kind", b.kind, "Dataset element kind")->check(CLI::IsMember(kinds));
    build->add_option("-o,--out", b.out, "Output index path")->required();
    build->add_option("--subspaces", b.subspaces, "Number of subspaces");
    build->add_option("--khalf", b.khalf, "Clusters per subspace half");
    build->add_option("--iters", b.iters, "k-means iterations");
    build->add_option("--seed", b.seed, "Build seed");
    build->add_option("--mode", b.mode, "Subspace sampling mode")->check(CLI::IsMember(modes));
    build->add_option("--limit", b.limit, "Read at most this many points (0 = all)");
    build->add_option("--threads", b.threads, "Worker threads (0 = hardware)");

    QueryOpts q;
    auto* query = app.add_subcommand("query", "Run k-ANN queries against a built index");
    query->add_option("index", q.index, "Index file from 'build'")->required();
    query->add_option("dataset", q.dataset, "Dataset the index was built from")->required();
    query->add_option("queries", q.queries, "Query vectors file")->required();
    query->add_option("--kind", q.kind, "Dataset element kind")->check(CLI::IsMember(kinds));
    query->add_option("--query-kind", q.query_kind, "Query element kind")
        ->check(CLI::IsMember(kinds));
    query->add_option("--alpha", q.alpha, "Collision ratio");
    query->add_option("--beta", q.beta, "Re-rank ratio");
    query->add_option("-k", q.k, "Neighbors to return");
    query->add_option("--traversal", q.traversal, "Cell traversal: da or ms")
        ->check(CLI::IsMember(std::vector<std::string>{"da", "ms"}));
    query->add_option("--truth", q.truth, "Ground-truth file prefix (.ivecs/.fvecs pair)");
    query->add_option("-o,--out", q.out, "Results file prefix (.ivecs/.fvecs pair)");
    query->add_option("--threads", q.threads, "Worker threads (0 = hardware)");

    TruthOpts g;
    auto* truth = app.add_subcommand("groundtruth", "Compute exact nearest neighbors");
    truth->add_option("dataset", g.dataset, "Base dataset file")->required();
    truth->add_option("queries", g.queries, "Query vectors file")->required();
    truth->add_option("--kind", g.kind, "Dataset element kind")->check(CLI::IsMember(kinds));
    truth->add_option("--query-kind", g.query_kind, "Query element kind")
        ->check(CLI::IsMember(kinds));
    truth->add_option("-k", g.k, "Neighbors per query");
    truth->add_option("-o,--out", g.out, "Output file prefix (.ivecs/.fvecs pair)")->required();
    truth->add_option("--threads", g.threads, "Worker threads (0 = hardware)");

    BenchOpts e;
    auto* bench = app.add_subcommand("bench", "Sweep parameters and emit a CSV/JSON report");
    bench->add_option("dataset", e.dataset, "Base dataset file")->required();
    bench->add_option("queries", e.queries, "Query vectors file")->required();
    bench->add_option("--kind", e.kind, "Dataset element kind")->check(CLI::IsMember(kinds));
    bench->add_option("--query-kind", e.query_kind, "Query element kind")
        ->check(CLI::IsMember(kinds));
    bench->add_option("--truth", e.truth,
                      "Ground-truth prefix (computed in-process when omitted)");
    bench->add_option("--alphas", e.alphas, "Collision ratios to sweep")->delimiter(',');
    bench->add_option("--betas", e.betas, "Re-rank ratios to sweep")->delimiter(',');
    bench->add_option("-k", e.k, "Neighbors to return");
    bench->add_option("--subspaces", e.subspaces, "Number of subspaces");
    bench->add_option("--khalf", e.khalf, "Clusters per subspace half");
    bench->add_option("--iters", e.iters, "k-means iterations");
    bench->add_option("--seed", e.seed, "Build seed");
    bench->add_option("--mode", e.mode, "Subspace sampling mode")->check(CLI::IsMember(modes));
    bench->add_flag("--compare-traversal", e.compare_traversal,
                    "Also run multi-sequence; verify identical results and report latency");
    bench->add_flag("--include-sclinear", e.include_sclinear,
                    "Also run the index-free linear baseline");
    bench->add_option("--csv", e.csv, "CSV report path");
    bench->add_option("--json", e.json_path, "JSON report path");
    bench->add_option("--threads", e.threads, "Worker threads (0 = hardware)");

    ScScoreOpts s;
    auto* scscore = app.add_subcommand("scscore", "Collision-score profile per exact-NN rank");
    scscore->add_option("dataset", s.dataset, "Base dataset file")->required();
    scscore->add_option("queries", s.queries, "Query vectors file")->required();
    scscore->add_option("--kind", s.kind, "Dataset element kind")->check(CLI::IsMember(kinds));
    scscore->add_option("--query-kind", s.query_kind, "Query element kind")
        ->check(CLI::IsMember(kinds));
    scscore->add_option("--subspaces", s.subspaces, "Number of subspaces");
    scscore->add_option("--alpha", s.alpha, "Collision ratio");
    scscore->add_option("--seed", s.seed, "Layout seed");
    scscore->add_option("--mode", s.mode, "Subspace sampling mode")->check(CLI::IsMember(modes));
    scscore->add_option("-o,--out", s.out, "Profile CSV path");
    scscore->add_option("--sample", s.sample, "Log-spaced rank count (0 = every rank)");
    scscore->add_option("--threads", s.threads, "Worker threads (0 = hardware)");

    ScLinearOpts l;
    auto* sclinear = app.add_subcommand("sclinear", "Run the index-free linear baseline");
    sclinear->add_option("dataset", l.dataset, "Base dataset file")->required();
    sclinear->add_option("queries", l.queries, "Query vectors file")->required();
    sclinear->add_option("--kind", l.kind, "Dataset element kind")->check(CLI::IsMember(kinds));
    sclinear->add_option("--query-kind", l.query_kind, "Query element kind")
        ->check(CLI::IsMember(kinds));
    sclinear->add_option("--alpha", l.alpha, "Collision ratio");
    sclinear->add_option("--beta", l.beta, "Re-rank ratio");
    sclinear->add_option("-k", l.k, "Neighbors to return");
    sclinear->add_option("--subspaces", l.subspaces, "Number of subspaces");
    sclinear->add_option("--seed", l.seed, "Layout seed");
    sclinear->add_option("--mode", l.mode, "Subspace sampling mode")->check(CLI::IsMember(modes));
    sclinear->add_option("--truth", l.truth, "Ground-truth file prefix");
    sclinear->add_option("-o,--out", l.out, "Results file prefix");
    sclinear->add_option("--index", l.index,
                         "Index file; also times the indexed search for a speedup ratio");
    sclinear->add_option("--threads", l.threads, "Worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
        if (build->parsed()) return run_build(b);
        if (query->parsed()) return run_query(q);
        if (truth->parsed()) return run_groundtruth(g);
        if (bench->parsed()) return run_bench(e);
        if (scscore->parsed()) return run_scscore(s);
        if (sclinear->parsed()) return run_sclinear(l);
        return 1;
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    } catch (const suco::ConfigError& err) {
        std::cerr << "configuration error: " << err.what() << "\n";
        return 2;
    } catch (const suco::FormatError& err) {
        std::cerr << "format error: " << err.what() << "\n";
        return 3;
    } catch (const suco::IncompatibilityError& err) {
        std::cerr << "incompatibility: " << err.what() << "\n";
        return 4;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
