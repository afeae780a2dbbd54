#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "isv/codec.hpp"
#include "isv/metrics.hpp"
#include "support.hpp"

using test_support::temp_path;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(ISV_CLI_PATH) + " " + args + " > " +
                            temp_path("cli_stdout.txt").string() + " 2> " +
                            temp_path("cli_stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string cli_stdout() { return read_text(temp_path("cli_stdout.txt")); }

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

isv::Image fixture_image() {
    isv::Rng rng(31415);
    return test_support::structured_image(rng, 40, 32);
}

} // namespace

TEST_CASE("cli compress matches the library byte for byte") {
    const auto img_path = temp_path("cli_in.pgm");
    const isv::Image img = fixture_image();
    isv::save_image(img, img_path);

    const auto out_path = temp_path("cli_out.isv");
    REQUIRE(run("compress -i " + img_path.string() + " -o " + out_path.string() +
                " --filter median --seed 42") == 0);

    isv::CodecOptions opts;
    opts.filter.tag = isv::FilterTag::Median;
    opts.isom.rng_seed = 42;
    // the CLI wrote rounded samples; compare against the reloaded image
    const isv::Image reloaded = isv::load_image(img_path);
    const auto expected = isv::write_container(isv::compress(reloaded, opts));
    CHECK(read_bytes(out_path) == expected);

    SUBCASE("decompress reproduces the library decode") {
        const auto decoded_path = temp_path("cli_decoded.pgm");
        REQUIRE(run("decompress -i " + out_path.string() + " -o " + decoded_path.string()) == 0);
        const isv::Image decoded = isv::load_image(decoded_path);
        const isv::Image direct = isv::decompress(isv::read_container(expected));
        CHECK(decoded == direct);
    }
}

TEST_CASE("cli filter none copies the image modulo re-encoding") {
    const auto img_path = temp_path("cli_f_in.pgm");
    isv::save_image(fixture_image(), img_path);
    const auto out_path = temp_path("cli_f_out.pgm");
    REQUIRE(run("filter -i " + img_path.string() + " -o " + out_path.string() +
                " --filter none") == 0);
    CHECK(isv::load_image(out_path) == isv::load_image(img_path));
}

TEST_CASE("cli metrics prints mse=0 for identical images") {
    const auto img_path = temp_path("cli_m.pgm");
    isv::save_image(fixture_image(), img_path);
    REQUIRE(run("metrics -a " + img_path.string() + " -b " + img_path.string()) == 0);
    const std::string out = cli_stdout();
    CHECK(out.find("mse=0") != std::string::npos);
    CHECK(out.find("psnr_db=inf") != std::string::npos);
}

TEST_CASE("cli bench grid shape and determinism") {
    const auto a_path = temp_path("bench_a.pgm");
    const auto b_path = temp_path("bench_b.pgm");
    isv::Rng rng(999);
    isv::save_image(test_support::structured_image(rng, 32, 32), a_path);
    isv::save_image(test_support::structured_image(rng, 32, 32), b_path);

    const auto report1 = temp_path("bench1.csv");
    const auto report2 = temp_path("bench2.csv");
    const std::string flags = " --format csv --seed 7 --max-nodes 8 ";
    const std::string images = a_path.string() + "," + b_path.string();
    REQUIRE(run("bench --images " + images + flags + "-o " + report1.string()) == 0);
    REQUIRE(run("bench --images " + images + flags + "-o " + report2.string()) == 0);

    std::istringstream csv(read_text(report1));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "image,filter,mse,psnr_db,tau_percent,t_c,t_c_payload,t_o,seed,runtime_ms");
    int rows = 0;
    std::vector<std::string> filters;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        ++rows;
        const auto first_comma = line.find(',');
        filters.push_back(line.substr(first_comma + 1, line.find(',', first_comma + 1) -
                                                           first_comma - 1));
    }
    CHECK(rows == 10);  // two images x five filters
    const std::vector<std::string> expected_order = {"none", "median", "gaussian", "mean",
                                                     "wiener"};
    for (int i = 0; i < 10; ++i) CHECK(filters[std::size_t(i)] == expected_order[i % 5]);

    // identical modulo the trailing runtime column
    auto strip_runtime = [](const std::string& text) {
        std::istringstream in(text);
        std::string out, row;
        while (std::getline(in, row)) {
            const auto last = row.rfind(',');
            out += row.substr(0, last) + "\n";
        }
        return out;
    };
    CHECK(strip_runtime(read_text(report1)) == strip_runtime(read_text(report2)));
}

TEST_CASE("cli markdown bench has the five filter columns in order") {
    const auto a_path = temp_path("bench_md.pgm");
    isv::Rng rng(123);
    isv::save_image(test_support::structured_image(rng, 32, 32), a_path);
    REQUIRE(run("bench --images " + a_path.string() + " --max-nodes 8 --format markdown") == 0);
    const std::string out = cli_stdout();
    CHECK(out.find("| image | metric | none | median | gaussian | mean | wiener |") !=
          std::string::npos);
    CHECK(out.find("| bench_md | tau % |") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    CHECK(run("compress") == 2);             // missing required flags
    CHECK(run("frobnicate") == 2);           // unknown subcommand
    CHECK(run("metrics -a nope.pgm -b nope.pgm") == 1);
    CHECK(run("decompress -i nope.isv -o out.pgm") == 1);
    const auto img_path = temp_path("cli_err.pgm");
    isv::save_image(fixture_image(), img_path);
    CHECK(run("compress -i " + img_path.string() + " -o /nonexistent_dir_xyz/out.isv") == 1);
    CHECK(run("filter -i " + img_path.string() + " -o x.pgm --filter sobel") == 2);
    CHECK(run("bench --images " + img_path.string() + " --format yaml") == 2);
}
