#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::initializer_list<std::string> args) {
    std::vector<std::string> store{"fiducial"};
    store.insert(store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : store) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = fiducial::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("fiducial_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& leaf = "") const { return (path / leaf).string(); }
};

const std::string kJU = R"({"kind":"joined_uniform","a":1,"b":4,"theta_T":0.5})";
const std::string kEVD = R"({"kind":"translation","base":"evd"})";
const std::string kNormal = R"({"kind":"translation","base":"normal"})";
const std::string kAbsNormal = R"({"kind":"abs_x","of":{"kind":"translation","base":"normal"}})";

}  // namespace

TEST_CASE("analyze exit codes") {
    TempDir d;
    const auto ju = run({"analyze", "--family", kJU, "--grid", "x=-5:5:201,theta=-4:4:401", "--out", d.str()});
    CHECK(ju.code == 2);
    const auto v = nlohmann::json::parse(slurp(d.path / "verdict.json"));
    CHECK(v.at("fd_exists") == false);
    for (const auto& r : v.at("intersections"))
        if (r.at("kind") == "ordinary") CHECK(r.at("x0").get<double>() > 5.0 / 6.0);

    CHECK(run({"analyze", "--family", kEVD, "--grid", "auto", "--out", d.str()}).code == 0);
    const auto ab = run({"analyze", "--family", kAbsNormal, "--out", d.str()});
    CHECK(ab.code == 2);
    CHECK(ab.out.find("weak=") != std::string::npos);

    // spec file on disk
    std::ofstream(d.path / "evd.json") << kEVD;
    CHECK(run({"--out", d.str(), "analyze", "--family", d.str("evd.json")}).code == 0);
}

TEST_CASE("malformed input never crashes") {
    TempDir d;
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"analyze"}).code == 1);
    const auto bad = run({"analyze", "--family", R"({"kind":"joined_uniform","a":1})", "--out", d.str()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("$.b") != std::string::npos);
    std::ofstream(d.path / "broken.json") << "{\n  \"kind\": \"translation\",\n  \"base\": \n}";
    const auto br = run({"analyze", "--family", d.str("broken.json"), "--out", d.str()});
    CHECK(br.code == 1);
    CHECK(br.err.find("line 4") != std::string::npos);
    CHECK(run({"analyze", "--family", kEVD, "--grid", "x=1:0:10,theta=-1:1:10", "--out", d.str()}).code == 1);
    CHECK(run({"analyze", "--family", kEVD, "--grid", "x=-1:1:2,theta=-1:1:10", "--out", d.str()}).code == 1);
    CHECK(run({"analyze", "--family", kEVD, "--grid", "x=-1:1:10", "--out", d.str()}).code == 1);
    CHECK(run({"analyze", "--family", kEVD, "--grid", "x=-1:1:1e400,theta=-1:1:10", "--out", d.str()}).code == 1);
    CHECK(run({"limits", "--family", kEVD, "--x0", "0", "--beta", "1.5"}).code == 1);
    CHECK(run({"figure", "--id", "3"}).code == 1);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"coverage", "--trials", "10"}).code == 1);
}

TEST_CASE("fd and limits") {
    TempDir d;
    const auto fd = run({"fd", "--family", kEVD, "--x0", "0", "--grid", "x=-3:3:61,theta=-16:12:281", "--out", d.str()});
    REQUIRE(fd.code == 0);
    const std::string csv = slurp(d.path / "fd.csv");
    CHECK(csv.rfind("theta,cdf\n", 0) == 0);
    CHECK(csv.find("\n0,0.63212055882855767\n") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);

    CHECK(run({"fd", "--family", kJU, "--x0", "1.25", "--out", d.str()}).code == 2);

    const auto lim = run({"limits", "--family", kJU, "--x0", "1.25", "--beta", "0.78125", "--out", d.str()});
    REQUIRE(lim.code == 0);
    const auto j = nlohmann::json::parse(slurp(d.path / "limits.json"));
    CHECK(j.at("case_kind") == "multiple");
    CHECK(j.at("thetas").size() == 3);
    CHECK(slurp(d.path / "limits.csv").rfind("theta_lo,theta_hi\n", 0) == 0);
}

TEST_CASE("combine and composite outputs") {
    TempDir d;
    const auto c = run({"combine", "--family", kNormal, "--obs", "0,0", "--out", d.str()});
    REQUIRE(c.code == 0);
    CHECK(c.out.find("median=") != std::string::npos);
    CHECK(slurp(d.path / "combined.csv").rfind("theta,density,cdf\n", 0) == 0);
    const auto meta = nlohmann::json::parse(slurp(d.path / "combined.json"));
    CHECK(meta.at("observations").size() == 2);

    const auto comp = run({"composite", "--family", kAbsNormal, "--y", "1", "--grid", "x=0:6:61,theta=-6:6:121",
                           "--out", d.str()});
    REQUIRE(comp.code == 0);
    CHECK(fs::exists(d.path / "composite_decomposition.csv"));
    CHECK(fs::exists(d.path / "composite_phi.csv"));
    CHECK(fs::exists(d.path / "envelope.csv"));
    CHECK(fs::exists(d.path / "truncated_star.csv"));
    CHECK(run({"composite", "--family", kEVD, "--y", "1", "--out", d.str()}).code == 1);
}

TEST_CASE("figure bundles") {
    TempDir d;
    for (const char* id : {"1", "2a", "2b", "4a", "4b", "5a", "5b"}) {
        CAPTURE(id);
        const auto r = run({"figure", "--id", id, "--out", d.str()});
        CHECK(r.code == 0);
        const fs::path dir = d.path / (std::string("figure_") + id);
        REQUIRE(fs::is_directory(dir));
        CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator()) >= 2);
    }
}

TEST_CASE("coverage is byte-identical on re-run") {
    TempDir d1, d2;
    const auto a = run({"coverage", "--trials", "100", "--seed", "42", "--out", d1.str()});
    const auto b = run({"--seed", "42", "coverage", "--trials", "100", "--threads", "2", "--out", d2.str()});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(slurp(d1.path / "coverage.json") == slurp(d2.path / "coverage.json"));
}
