#include <cstdint>
#include <iostream>
#include <span>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "suco/core.hpp"
#include "suco/io.hpp"
#include "support/synthetic.hpp"

using nlohmann::json;

int main(int argc, char** argv) {
    CLI::App app{"Generate a clustered synthetic dataset with a held-out query set"};

    std::string out;
    std::uint64_t n = 10100;
    std::uint32_t d = 128;
    std::uint32_t clusters = 64;
    std::uint64_t seed = 7;
    std::uint64_t queries = 100;
    app.add_option("-o,--out", out, "Output prefix; writes <out>-base.fvecs and <out>-query.fvecs")
        ->required();
    app.add_option("--n", n, "Total points drawn (base gets n - queries)");
    app.add_option("--d", d, "Dimensions");
    app.add_option("--clusters", clusters, "Gaussian mixture components");
    app.add_option("--seed", seed, "Generator seed");
    app.add_option("--queries", queries, "Points hidden from the base as queries");

    try {
        app.parse(argc, argv);
        const suco::Dataset full = suco::testsupport::sift_like(n, d, clusters, seed);
        const suco::HoldOutSplit split = suco::hold_out_queries(full, queries, seed + 1);

        const std::string base_path = out + "-base.fvecs";
        const std::span<const float> base_values{split.base.data(),
                                                 split.base.size() * split.base.dim()};
        suco::write_vecs(base_path, suco::VecsKind::F32, split.base.size(), split.base.dim(),
                         base_values);
        json report{{"command", "make_synthetic"},
                    {"base_path", base_path},
                    {"base_n", split.base.size()},
                    {"d", d},
                    {"clusters", clusters},
                    {"seed", seed},
                    {"base_hash", suco::hash_hex(split.base.content_hash())}};
        if (split.queries) {
            const std::string query_path = out + "-query.fvecs";
            const std::span<const float> query_values{
                split.queries->data(), split.queries->size() * split.queries->dim()};
            suco::write_vecs(query_path, suco::VecsKind::F32, split.queries->size(),
                             split.queries->dim(), query_values);
            report["query_path"] = query_path;
            report["query_n"] = split.queries->size();
        }
        std::cout << report.dump(2) << "\n";
        return 0;
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    } catch (const suco::ConfigError& err) {
        std::cerr << "configuration error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
