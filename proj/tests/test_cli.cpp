// End-to-end contract tests for the `ucc` command line tool.  Each test
// spawns the real binary and checks exit codes, stream separation and
// output shape.
#include <catch2/catch_amalgamated.hpp>

#include <ucc/catalogue.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

using ucc::ojson;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("ucc-cli-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

fs::path fixture(const std::string& name) {
    return fs::path(UCC_SOURCE_DIR) / "fixtures" / name;
}

void copy_fixtures(const fs::path& to) {
    for (const auto& entry :
         fs::directory_iterator(fs::path(UCC_SOURCE_DIR) / "fixtures"))
        if (entry.path().extension() == ".ucc")
            fs::copy_file(entry.path(), to / entry.path().filename());
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs the tool through the shell with stdout/stderr captured.  Colour is
// disabled through the environment unless the caller opts out.
RunResult run(const std::string& args, bool no_color_env = true) {
    TempDir scratch;
    fs::path out_path = scratch.path / "out";
    fs::path err_path = scratch.path / "err";
    std::string cmd;
    if (no_color_env) cmd += "UCC_NO_COLOR=1 ";
    cmd += "\"" UCC_CLI_PATH "\" " + args + " > \"" + out_path.string() +
           "\" 2> \"" + err_path.string() + "\"";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("version and usage errors") {
    auto r = run("--version");
    CHECK(r.code == 0);
    CHECK(r.out == "ucc 1.0.0\n");

    CHECK(run("").code == 3);                  // a subcommand is required
    CHECK(run("frobnicate").code == 3);        // unknown subcommand
    CHECK(run("validate").code == 3);          // missing required argument
    CHECK(run("assess --format yaml " + quoted(fixture("smart-camera.ucc")))
              .code == 3);
    auto help = run("--help");
    CHECK(help.code == 0);
    CHECK(help.out.find("validate") != std::string::npos);
}

TEST_CASE("init writes a skeleton once") {
    TempDir tmp;
    fs::path card = tmp.path / "new.ucc";
    auto r = run("init " + quoted(card));
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(r.err.find("wrote") != std::string::npos);
    REQUIRE(fs::exists(card));

    // the skeleton parses, but is not yet a valid card
    auto v = run("validate " + quoted(card));
    CHECK(v.code == 1);
    CHECK(v.out.find("V2") != std::string::npos);

    auto again = run("init " + quoted(card));
    CHECK(again.code == 4);
    CHECK(again.err.find("refusing to overwrite") != std::string::npos);
    CHECK(run("init " + quoted(tmp.path / "no-dir" / "x.ucc")).code == 4);
}

TEST_CASE("validate reports per file and the worst code wins") {
    auto ok = run("validate " + quoted(fixture("scene-narrator.ucc")));
    CHECK(ok.code == 0);
    CHECK(ok.out == fixture("scene-narrator.ucc").string() + ": ok\n");
    CHECK(ok.err.empty());

    TempDir tmp;
    fs::path dup = tmp.path / "dup.ucc";
    {
        std::ofstream f(dup);
        f << "[card]\nid: dup\ntitle: One\ntitle: Two\n";
    }
    auto parse_fail = run("validate " + quoted(dup));
    CHECK(parse_fail.code == 2);
    CHECK(parse_fail.out.find("P003") != std::string::npos);
    CHECK(parse_fail.out.find(":4:") != std::string::npos);  // 1-based line

    auto io_fail = run("validate " + quoted(tmp.path / "absent.ucc"));
    CHECK(io_fail.code == 4);
    CHECK(io_fail.err.find("absent.ucc") != std::string::npos);

    auto mixed = run("validate " + quoted(fixture("scene-narrator.ucc")) + " " +
                     quoted(dup));
    CHECK(mixed.code == 2);
    auto worst = run("validate " + quoted(dup) + " " +
                     quoted(tmp.path / "absent.ucc"));
    CHECK(worst.code == 4);
}

TEST_CASE("validate emits machine-readable JSON") {
    auto r = run("validate --format json " +
                 quoted(fixture("smart-camera.ucc")));
    CHECK(r.code == 0);
    auto j = ojson::parse(r.out);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 1);
    CHECK(j[0]["file"] == fixture("smart-camera.ucc").string());
    CHECK(j[0]["findings"].empty());
    CHECK(j[0]["parse_diagnostics"].empty());
}

TEST_CASE("strict mode turns warnings into failures") {
    TempDir tmp;
    fs::path card = tmp.path / "no-issues.ucc";
    {
        std::ofstream f(card);
        f << "[card]\n"
             "id: quiet\n"
             "title: Quiet\n"
             "version: 1.0\n"
             "date: 2024-01-01\n"
             "provider: Example\n"
             "\n"
             "[purpose]\n"
             "context: Used in an example\n"
             "scope: Does one thing\n"
             "sdg: 3\n"
             "\n"
             "[actor user]\n"
             "name: User\n"
             "kind: individual\n"
             "\n"
             "[usecase job]\n"
             "name: Job\n"
             "ai: yes\n"
             "main: yes\n"
             "\n"
             "[relation]\n"
             "kind: association\n"
             "source: user\n"
             "target: job\n"
             "\n"
             "[table]\n"
             "product: other-software\n"
             "safety: no\n"
             "area: politics\n"
             "primary: user\n"
             "step: User runs the job\n";
    }
    auto relaxed = run("validate " + quoted(card));
    CHECK(relaxed.code == 0);
    CHECK(relaxed.out.find("V10 warning") != std::string::npos);
    auto strict = run("validate --strict " + quoted(card));
    CHECK(strict.code == 1);
}

TEST_CASE("assess prints the tier and the reasoning") {
    auto high = run("assess " + quoted(fixture("scene-narrator.ucc")));
    CHECK(high.code == 0);
    CHECK(high.out.rfind("tier: high\n", 0) == 0);
    CHECK(high.out.find("R3 ") != std::string::npos);
    CHECK(high.out.find("[Art. 6 / Annex III]") != std::string::npos);

    auto minimal = run("assess " + quoted(fixture("smart-camera.ucc")));
    CHECK(minimal.code == 0);
    CHECK(minimal.out.rfind("tier: minimal\n", 0) == 0);

    auto transparency =
        run("assess " + quoted(fixture("affective-music-recommender.ucc")));
    CHECK(transparency.code == 0);
    CHECK(transparency.out.rfind("tier: transparency\n", 0) == 0);

    auto json = run("assess --format json " +
                    quoted(fixture("driver-monitoring.ucc")));
    CHECK(json.code == 0);
    auto j = ojson::parse(json.out);
    CHECK(j["tier"] == "high");
    REQUIRE(j["triggers"].is_array());
    CHECK(j["triggers"][0]["rule"] == "R1");

    CHECK(run("assess /no/such/file.ucc").code == 4);
}

TEST_CASE("assess refuses cards with validation errors") {
    TempDir tmp;
    fs::path card = tmp.path / "skel.ucc";
    REQUIRE(run("init " + quoted(card)).code == 0);
    auto r = run("assess " + quoted(card));
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("V2") != std::string::npos);
}

TEST_CASE("render is deterministic and leaves the input untouched") {
    auto before = slurp(fixture("smart-camera.ucc"));
    auto svg1 = run("render " + quoted(fixture("smart-camera.ucc")));
    auto svg2 = run("render " + quoted(fixture("smart-camera.ucc")));
    CHECK(svg1.code == 0);
    CHECK(svg1.out == svg2.out);
    CHECK(svg1.out.rfind("<?xml", 0) == 0);
    CHECK(slurp(fixture("smart-camera.ucc")) == before);

    auto html =
        run("render --format html " + quoted(fixture("smart-camera.ucc")));
    CHECK(html.code == 0);
    CHECK(html.out.rfind("<!DOCTYPE html>", 0) == 0);

    TempDir tmp;
    fs::path out = tmp.path / "card.svg";
    auto to_file = run("render --out " + quoted(out) + " " +
                       quoted(fixture("smart-camera.ucc")));
    CHECK(to_file.code == 0);
    CHECK(to_file.out.empty());
    CHECK(slurp(out) == svg1.out);
}

TEST_CASE("stats aggregates a directory") {
    TempDir tmp;
    copy_fixtures(tmp.path);
    auto text = run("stats " + quoted(tmp.path));
    CHECK(text.code == 0);
    CHECK(text.out.rfind("total: 5\ninvalid: 0\n", 0) == 0);
    CHECK(text.out.find("  high: 3\n") != std::string::npos);

    auto json = run("stats --format json " + quoted(tmp.path));
    CHECK(json.code == 0);
    auto j = ojson::parse(json.out);
    CHECK(j["total"] == 5);
    CHECK(j["per_tier"]["transparency"] == 1);

    TempDir empty;
    auto none = run("stats " + quoted(empty.path));
    CHECK(none.code == 0);
    CHECK(none.out.rfind("total: 0\n", 0) == 0);

    CHECK(run("stats /no/such/dir").code == 4);
}

TEST_CASE("query filters and fails cleanly on unknown values") {
    TempDir tmp;
    copy_fixtures(tmp.path);
    auto rows = run("query --tier high " + quoted(tmp.path));
    CHECK(rows.code == 0);
    std::istringstream lines(rows.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        ++count;
        CHECK(std::count(line.begin(), line.end(), '\t') == 3);
        CHECK(line.find("\thigh\t") != std::string::npos);
    }
    CHECK(count == 3);

    auto json = run("query --format json --area biometrics " + quoted(tmp.path));
    CHECK(json.code == 0);
    auto j = ojson::parse(json.out);
    CHECK(j["total"] == 1);
    CHECK(j["entries"][0]["id"] == "scene-narrator");

    auto bad = run("query --tier severe " + quoted(tmp.path));
    CHECK(bad.code == 3);
    CHECK(bad.err ==
          "unknown tier 'severe' (expected high, transparency or minimal)\n");
    CHECK(bad.out.empty());

    CHECK(run("query --tier high /no/such/dir").code == 4);
}

TEST_CASE("export produces parseable documents") {
    auto products = run("export vocab products");
    CHECK(products.code == 0);
    auto pj = ojson::parse(products.out);
    REQUIRE(pj.is_array());
    CHECK(pj.size() == 20);
    CHECK(pj[0].contains("annex_ii"));

    auto areas = run("export vocab areas");
    CHECK(areas.code == 0);
    CHECK(ojson::parse(areas.out).size() == 20);

    auto sdgs = run("export vocab sdgs");
    CHECK(sdgs.code == 0);
    auto sj = ojson::parse(sdgs.out);
    CHECK(sj.size() == 17);
    CHECK(sj[0]["number"] == 1);

    CHECK(run("export vocab verbs").code == 3);

    auto card = run("export card " + quoted(fixture("student-proctoring.ucc")));
    CHECK(card.code == 0);
    auto cj = ojson::parse(card.out);
    CHECK(cj["card"]["id"] == "student-proctoring");
    CHECK(cj["assessment"]["tier"] == "high");

    TempDir tmp;
    copy_fixtures(tmp.path);
    auto cat = run("export catalogue " + quoted(tmp.path));
    CHECK(cat.code == 0);
    CHECK(ojson::parse(cat.out)["total"] == 5);

    TempDir out_dir;
    fs::path out = out_dir.path / "products.json";
    auto to_file = run("export vocab products --out " + quoted(out));
    CHECK(to_file.code == 0);
    CHECK(to_file.out.empty());
    CHECK(slurp(out) == products.out);
}

TEST_CASE("colour codes never reach redirected output") {
    // even without UCC_NO_COLOR, a non-tty stdout must stay plain
    auto r = run("assess " + quoted(fixture("scene-narrator.ucc")),
                 /*no_color_env=*/false);
    CHECK(r.code == 0);
    CHECK(r.out.find('\033') == std::string::npos);
}
