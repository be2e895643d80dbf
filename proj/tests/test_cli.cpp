#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "suco/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_suco;
std::string g_make;
fs::path g_dir;

int run(const std::string& args) {
    const std::string cmd = args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -2;
}

std::string p(const char* name) { return (g_dir / name).string(); }

std::vector<unsigned char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    return lines;
}

}  // namespace

TEST_CASE("end-to-end pipeline: generate, build, groundtruth, query, bench") {
    REQUIRE(run(g_make + " --out " + p("syn") + " --n 600 --d 16 --clusters 8 --seed 3"
                " --queries 20") == 0);
    const std::string base = p("syn-base.fvecs");
    const std::string query = p("syn-query.fvecs");
    REQUIRE(fs::exists(base));
    REQUIRE(fs::exists(query));
    {
        const suco::Dataset b = suco::read_vecs(base, suco::VecsKind::F32);
        CHECK(b.size() == 580);
        CHECK(b.dim() == 16);
        const suco::Dataset q = suco::read_vecs(query, suco::VecsKind::F32);
        CHECK(q.size() == 20);
    }

    const std::string build_flags = " --subspaces 4 --khalf 8 --iters 3 --seed 11";
    REQUIRE(run(g_suco + " build " + base + " -o " + p("idx.bin") + build_flags) == 0);
    REQUIRE(fs::exists(p("idx.bin")));

    SUBCASE("identical builds write identical bytes") {
        REQUIRE(run(g_suco + " build " + base + " -o " + p("idx2.bin") + build_flags +
                    " --threads 3") == 0);
        CHECK(slurp(p("idx.bin")) == slurp(p("idx2.bin")));
    }

    SUBCASE("query against ground truth, both traversals identical") {
        REQUIRE(run(g_suco + " groundtruth " + base + " " + query + " -k 20 -o " + p("gt")) == 0);
        REQUIRE(fs::exists(p("gt.ivecs")));
        REQUIRE(fs::exists(p("gt.fvecs")));

        const std::string qflags = " --alpha 0.2 --beta 0.1 -k 10 --truth " + p("gt");
        REQUIRE(run(g_suco + " query " + p("idx.bin") + " " + base + " " + query + qflags +
                    " -o " + p("res_da")) == 0);
        REQUIRE(run(g_suco + " query " + p("idx.bin") + " " + base + " " + query + qflags +
                    " --traversal ms -o " + p("res_ms")) == 0);

        CHECK(slurp(p("res_da.ivecs")) == slurp(p("res_ms.ivecs")));
        CHECK(slurp(p("res_da.fvecs")) == slurp(p("res_ms.fvecs")));

        const suco::IntMatrix ids = suco::read_ivecs_raw(p("res_da.ivecs"));
        CHECK(ids.n == 20);
        CHECK(ids.d == 10);
        for (const std::int32_t id : ids.values) {
            REQUIRE(id >= 0);
            REQUIRE(id < 580);
        }
    }

    SUBCASE("bench sweeps parameters into CSV and JSON") {
        REQUIRE(run(g_suco + " groundtruth " + base + " " + query + " -k 20 -o " + p("gt2")) ==
                0);
        REQUIRE(run(g_suco + " bench " + base + " " + query + " --truth " + p("gt2") +
                    " --alphas 0.1,0.2 --betas 0.05 -k 10" + build_flags +
                    " --compare-traversal --include-sclinear --csv " + p("bench.csv") +
                    " --json " + p("bench.json")) == 0);
        // Header plus (da + ms + sc-linear) rows for each of the 2 alphas.
        CHECK(count_lines(p("bench.csv")) == 1 + 2 * 3);
        CHECK(fs::exists(p("bench.json")));
        std::ifstream json_in(p("bench.json"));
        const std::string json_text{std::istreambuf_iterator<char>(json_in),
                                    std::istreambuf_iterator<char>()};
        CHECK(json_text.find("\"schema_version\"") != std::string::npos);
        CHECK(json_text.find("\"identical_results\": true") != std::string::npos);
    }

    SUBCASE("sclinear and scscore subcommands succeed") {
        REQUIRE(run(g_suco + " sclinear " + base + " " + query +
                    " --alpha 0.2 --beta 0.1 -k 10 --subspaces 4 --index " + p("idx.bin")) == 0);
        REQUIRE(run(g_suco + " scscore " + base + " " + query +
                    " --subspaces 4 --alpha 0.1 --sample 10 -o " + p("profile.csv")) == 0);
        const std::size_t lines = count_lines(p("profile.csv"));
        CHECK(lines >= 3);
        CHECK(lines <= 12);
    }

    SUBCASE("error classes map to distinct exit codes") {
        // Unreadable dataset: format error.
        CHECK(run(g_suco + " build " + p("missing.fvecs") + " -o " + p("x.bin")) == 3);
        // Impossible layout: configuration error.
        CHECK(run(g_suco + " build " + base + " -o " + p("x.bin") + " --subspaces 100") == 2);
        // Invalid alpha: configuration error.
        CHECK(run(g_suco + " query " + p("idx.bin") + " " + base + " " + query +
                  " --alpha 0") == 2);
        CHECK(run(g_suco + " query " + p("idx.bin") + " " + base + " " + query + " -k 0") == 2);
        // Garbage index file: corrupt-index (format) error.
        std::ofstream garbage(p("garbage.bin"), std::ios::binary);
        garbage << "not an index";
        garbage.close();
        CHECK(run(g_suco + " query " + p("garbage.bin") + " " + base + " " + query) == 3);
        // Index built for a different dataset: incompatibility.
        REQUIRE(run(g_make + " --out " + p("other") + " --n 300 --d 16 --clusters 4 --seed 9"
                    " --queries 10") == 0);
        CHECK(run(g_suco + " query " + p("idx.bin") + " " + p("other-base.fvecs") + " " + query) ==
              4);
        // Unknown flags and missing subcommands are CLI parse failures.
        CHECK(run(g_suco) != 0);
        CHECK(run(g_suco + " build " + base + " -o " + p("x.bin") + " --bogus-flag") != 0);
    }

    SUBCASE("unknown extensions need an explicit kind") {
        fs::copy_file(base, p("noext.dat"), fs::copy_options::overwrite_existing);
        CHECK(run(g_suco + " build " + p("noext.dat") + " -o " + p("y.bin") + build_flags) == 2);
        CHECK(run(g_suco + " build " + p("noext.dat") + " --kind fvecs -o " + p("y.bin") +
                  build_flags) == 0);
    }
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <suco-binary> <make-synthetic-binary>\n", argv[0]);
        return 1;
    }
    g_suco = argv[1];
    g_make = argv[2];
    g_dir = fs::temp_directory_path() / "suco_cli_tests";
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);

    doctest::Context context;
    context.applyCommandLine(1, argv);
    const int rc = context.run();
    fs::remove_all(g_dir);
    return rc;
}
