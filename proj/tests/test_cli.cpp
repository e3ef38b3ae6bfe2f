#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = kato::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("kato_test_" + name);
}

}  // namespace

TEST_CASE("list") {
    for (const Result& r : {run({}), run({"list"})}) {
        CHECK(r.code == 0);
        for (const char* word : {"moebius", "rank1", "evans-toy", "random:", "greedy1", "brz1",
                                 "greedy2", "rich2", "rich3", "greedy3", "lift:"}) {
            CHECK(r.out.find(word) != std::string::npos);
        }
    }
}

TEST_CASE("continue") {
    const Result m = run({"continue", "--problem", "moebius", "--scheme", "greedy1", "--contour",
                          "circle:0,0:1:512"});
    REQUIRE(m.code == 0);
    const auto j = nlohmann::json::parse(m.out);
    CHECK(j["schema"] == 1);
    CHECK(j["L"] == 512);
    CHECK(j["closure_error"].get<double>() <= 1e-12);
    CHECK(j["counters"]["p_evals"] == 512);

    const Result g = run({"continue", "--problem", "rank1", "--scheme", "greedy2"});
    CHECK(g.code == 0);
    const Result frames = run({"continue", "--problem", "rank1", "--frames"});
    REQUIRE(frames.code == 0);
    CHECK(nlohmann::json::parse(frames.out)["frames"].size() == 257);
}

TEST_CASE("exit codes") {
    CHECK(run({"continue", "--problem", "nosuch"}).code == 1);
    CHECK(run({"continue"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"continue", "--problem", "rank1", "--scheme", "lift:lift:greedy3"}).code == 1);
    CHECK(run({"continue", "--problem", "rank1", "--contour", "circle:0,0:1"}).code == 1);
    CHECK(run({"study", "--problem", "rank1", "--refinements", "1"}).code == 1);
    CHECK(run({"continue", "--problem", "rank1", "--format", "xml"}).code == 1);
    const Result dom = run({"verify", "--problem", "rank1", "--contour", "circle:0,0:2:128"});
    CHECK(dom.code == 2);
    CHECK_FALSE(dom.err.empty());
}

TEST_CASE("csv and json carry the same numbers") {
    const std::vector<std::string> base = {"study", "--problem", "rank1", "--scheme", "greedy1",
                                           "--refinements", "2"};
    auto with = [&](const char* fmt) {
        auto args = base;
        args.push_back("--format");
        args.push_back(fmt);
        return run(args);
    };
    const Result js = with("json");
    const Result cs = with("csv");
    REQUIRE(js.code == 0);
    REQUIRE(cs.code == 0);
    std::istringstream lines(cs.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "L,closure_error,oracle_error,p_evals,mat_mults,order");
    const auto j = nlohmann::json::parse(js.out);
    for (const auto& row : j["rows"]) {
        std::string line;
        std::getline(lines, line);
        CHECK(line.rfind(row["L"].dump() + "," + row["closure_error"].dump() + "," +
                             row["oracle_error"].dump(),
                         0) == 0);
    }
    std::string median;
    std::getline(lines, median);
    CHECK(median == "median,,,,," + j["median_order"].dump());
}

TEST_CASE("reports are deterministic") {
    const std::vector<std::string> args = {"study", "--problem", "random:1:4:2", "--scheme", "greedy2",
                                           "--refinements", "2"};
    CHECK(run(args).out == run(args).out);
}

TEST_CASE("r0 file and --out") {
    const auto r0 = temp_file("r0.txt");
    const auto out = temp_file("out.json");
    {
        std::ofstream f(r0);
        f << "2 1\n1,0\n0.5,0\n";
    }
    // The rank1 square starts at 0.5 - 0.5i, where e1 is not in range.
    const std::vector<std::string> cmd = {"continue", "--problem", "rank1", "--r0-file", r0.string(),
                                          "--contour", "polyline:0,0;0.5,0:8"};
    CHECK(run(cmd).code == 1);
    {
        std::ofstream f(r0);
        f << "2 1\n1,0\n0,0\n";
    }
    auto to_file = cmd;
    to_file.insert(to_file.end(), {"--out", out.string()});
    const Result r = run(to_file);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    const auto j = nlohmann::json::parse(in);
    CHECK(j["L"] == 8);

    auto projected = cmd;
    projected.insert(projected.end(), {"--init-policy", "project"});
    {
        std::ofstream f(r0);
        f << "2 1\n0.5,0\n1,0\n";
    }
    CHECK(run(projected).code == 0);
    {
        // P(0) e2 = 0: projecting leaves nothing to continue.
        std::ofstream f(r0);
        f << "2 1\n0,0\n1,0\n";
    }
    CHECK(run(projected).code == 2);
    {
        std::ofstream f(r0);
        f << "2 1\n1,0\nx\n";
    }
    CHECK(run(cmd).code == 1);
    std::filesystem::remove(r0);
    std::filesystem::remove(out);
}

TEST_CASE("verify") {
    for (const char* id : {"moebius", "rank1", "evans-toy", "random:1:4:2"}) {
        CAPTURE(id);
        const Result r = run({"verify", "--problem", id});
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["pass"] == true);
    }
}
