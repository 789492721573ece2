#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <sys/wait.h>

#include "boundedrank/errors.hpp"
#include "boundedrank/io.hpp"
#include "test_support.hpp"

using namespace boundedrank;
using boundedrank::testing::Gen;
using nlohmann::json;

namespace {
const Field F2(2), F3(3);
const std::string kData = BOUNDEDRANK_TEST_DATA;

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(BOUNDEDRANK_CLI) + " " + args + " 2>/dev/null";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    REQUIRE(pipe);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t k = std::fread(buf.data(), 1, buf.size(), pipe.get())) out.append(buf.data(), k);
    int status = pclose(pipe.release());
    return {WEXITSTATUS(status), out};
}

Run cli_stderr(const std::string& args) {
    std::string cmd = std::string(BOUNDEDRANK_CLI) + " " + args + " 2>&1 >/dev/null";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t k = std::fread(buf.data(), 1, buf.size(), pipe.get())) out.append(buf.data(), k);
    int status = pclose(pipe.release());
    return {WEXITSTATUS(status), out};
}

json drop_elapsed(json j) {
    j.erase("elapsed_seconds");
    return j;
}
}  // namespace

TEST_CASE("parse and format round trip") {
    MatSpace j3 = read_mspace_file(kData + "/j3.mspace");
    CHECK(j3 == model_J3());
    const std::string canon = format_mspace(j3);
    CHECK(parse_mspace(canon) == j3);
    CHECK(format_mspace(parse_mspace(canon)) == canon);
    CHECK(canon.rfind("mspace 1\nfield 2\nshape 3 3\ndim 5\n\n", 0) == 0);

    Gen g;
    for (int i = 0; i < 1000; ++i) {
        Field f = g.field();
        std::size_t n = g.uniform(1, 4), p = g.uniform(1, 4);
        MatSpace v = g.space(f, n, p, g.uniform(0, 4));
        std::string text = format_mspace(v);
        CHECK(parse_mspace(text) == v);
        CHECK(format_mspace(parse_mspace(text)) == text);
    }
}

TEST_CASE("parse errors carry line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            parse_mspace(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    std::ifstream bad(kData + "/bad_header.mspace");
    std::stringstream ss;
    ss << bad.rdbuf();
    CHECK(line_of(ss.str()) == 3);
    CHECK(line_of("mspace 2\n") == 1);
    CHECK(line_of("mspace 1\nfield 4\n") == 2);
    CHECK(line_of("mspace 1\n# note\nfield 2\nshape 1 2\ndim 1\n\n1 2\n") == 7);  // digit out of range
    CHECK(line_of("mspace 1\nfield 2\nshape 1 2\ndim 1\n\n1 0 1\n") == 6);
    CHECK(line_of("mspace 1\nfield 2\nshape 2 2\ndim 1\n\n1 0\n\n") == 7);  // short block
    CHECK(line_of("mspace 1\nfield 2\nshape 1 2\ndim 2\n\n1 0\n") == 6);     // too few matrices
    CHECK(line_of("mspace 1\nfield 2\nshape 1 2\ndim 5\n") == 4);
    CHECK(line_of("mspace 1\nfield 2\nshape 1 2\n") == 4);
    CHECK_THROWS_AS(read_mspace_file(kData + "/redundant.mspace"), ParseError);
    CHECK_THROWS_AS(read_mspace_file(kData + "/missing.mspace"), ParseError);
    // dim 0 is a valid, empty space
    CHECK(parse_mspace("mspace 1\nfield 5\nshape 2 3\ndim 0\n").dim() == 0);
}

TEST_CASE("json reports") {
    MatSpace r02 = model_R(0, 2, 3, 3, F2);
    auto j = classification_json(r02, 2, classify(r02, 2));
    CHECK(j["labels"] == json::array({"KernelConfined"}));
    CHECK(j["kernel"] == json::array({"0 0 1"}));
    CHECK(j["image"].is_null());

    auto wj = witness_json(EquivalenceWitness::identity(F3, 2, 3));
    CHECK(wj["P"] == json::array({"1 0", "0 1"}));
    CHECK(wj["transposed"] == false);

    auto spec = default_campaign(Theorem::Rect_b, 3, 2, 1, 2);
    auto a = campaign_json(run_campaign(spec));
    spec.workers = 3;
    auto b = campaign_json(run_campaign(spec));
    CHECK(drop_elapsed(json::parse(a.dump())) == drop_elapsed(json::parse(b.dump())));
    CHECK(a["pass"] == true);
    CHECK(a["survivors"] == 28);
    auto keys = std::vector<std::string>{};
    for (auto& [k, v] : a.items()) keys.push_back(k);
    CHECK(keys.front() == "theorem");
    CHECK(keys.back() == "elapsed_seconds");
}

TEST_CASE("cli classify") {
    auto r = cli("classify " + kData + "/j3.mspace -r 2");
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["command"] == "classify");
    CHECK(j["labels"] == json::array({"ExceptionalJ3"}));
    CHECK(j["witnesses"].contains("ExceptionalJ3"));

    r = cli("classify " + kData + "/r02.mspace -r 2");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["kernel"] == json::array({"0 0 1"}));

    r = cli("classify " + kData + "/r11_f3.mspace --rank 2");
    CHECK(json::parse(r.out)["labels"] == json::array({"PrimitiveCol", "PrimitiveRow"}));

    r = cli("classify " + kData + "/bad_header.mspace -r 2");
    CHECK(r.code == 1);
    auto e = cli_stderr("classify " + kData + "/bad_header.mspace -r 2");
    CHECK(e.out.find("line 3") != std::string::npos);
    CHECK(cli("classify " + kData + "/j3.mspace -r 1").code == 1);  // rank 2 member
    CHECK(cli("classify").code == 1);
}

TEST_CASE("cli rank, equiv and census") {
    auto r = cli("rank " + kData + "/j3.mspace");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["rank"] == 2);

    r = cli("equiv " + kData + "/j3.mspace " + kData + "/j3t.mspace");
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["equivalent"] == true);
    CHECK(j["witness"]["transposed"] == false);

    r = cli("equiv " + kData + "/j3.mspace " + kData + "/r02.mspace");
    CHECK(r.code == 2);
    CHECK(json::parse(r.out)["equivalent"] == false);

    r = cli("census 3 3 2 5 2");
    CHECK(r.code == 0);
    j = json::parse(r.out);
    CHECK(j["survivors"] == 1372);
    bool has_j3 = false;
    for (const auto& c : j["classes"])
        for (const auto& l : c["labels"]) has_j3 |= l == "ExceptionalJ3";
    CHECK(has_j3);
    CHECK(cli("census 3 3 4 5 2").code == 1);
}

TEST_CASE("cli verify") {
    auto r = cli("verify M3F2 -n 3 -p 3 -r 2");
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["survivors"] == 1372);
    CHECK(j["label_census"]["ExceptionalJ3"] == 441);

    r = cli("verify FlandersBound -n 3 -p 3 -r 2 -d 7");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["survivors"] == 0);

    r = cli_stderr("verify Square_a -n 3 -p 3 -r 1 --order 4");
    CHECK(r.code == 1);
    CHECK(r.out.find("prime fields only") != std::string::npos);

    CHECK(cli("verify M3F2 -n 3 -p 3 -r 2 --mode Sampled --samples 10").code == 1);  // no seed
    auto s1 = cli("verify M3F2 -n 3 -p 3 -r 2 --mode Sampled --samples 3000 --seed 5");
    auto s4 = cli("--workers 4 verify M3F2 -n 3 -p 3 -r 2 --mode Sampled --samples 3000 --seed 5");
    CHECK(s1.code == 0);
    CHECK(drop_elapsed(json::parse(s1.out)) == drop_elapsed(json::parse(s4.out)));
    CHECK(cli("--budget 1000 verify M3F2 -n 3 -p 3 -r 2").code == 1);
    setenv("BOUNDEDRANK_BUDGET", "1000", 1);
    CHECK(cli("verify M3F2 -n 3 -p 3 -r 2").code == 1);
    CHECK(cli("--budget 4000000 verify M3F2 -n 3 -p 3 -r 2").code == 0);  // the flag wins
    unsetenv("BOUNDEDRANK_BUDGET");
    CHECK(cli("verify Nonsense -n 3 -p 3 -r 2").code == 1);
}
