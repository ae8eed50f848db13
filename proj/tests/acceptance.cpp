// Release acceptance suite.  Each numbered criterion prints a single
// PASS/FAIL line (with failure notes underneath); the process exits
// nonzero when any criterion fails.  This binary intentionally avoids any
// test framework so the output stays script-friendly.

#include <ucc/catalogue.hpp>
#include <ucc/render.hpp>

#include "support/generators.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

using namespace ucc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
    std::string name;
    bool ok = true;
    std::vector<std::string> notes;

    explicit Criterion(std::string n) : name(std::move(n)) {}

    void expect(bool cond, const std::string& what) {
        if (cond) return;
        ok = false;
        if (notes.size() < 10) notes.push_back(what);
    }
};

void report(const Criterion& c, double seconds = -1.0) {
    std::cout << (c.ok ? "PASS" : "FAIL") << "  " << c.name;
    if (seconds >= 0.0)
        std::cout << "  (" << std::fixed << std::setprecision(2) << seconds
                  << "s)";
    std::cout << "\n";
    for (const auto& note : c.notes) std::cout << "      - " << note << "\n";
    if (!c.ok) ++g_failures;
}

double elapsed_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::vector<std::string> kFixtures = {
    "affective-music-recommender.ucc", "driver-monitoring.ucc",
    "scene-narrator.ucc", "smart-camera.ucc", "student-proctoring.ucc"};

fs::path fixture_dir() { return fs::path(UCC_SOURCE_DIR) / "fixtures"; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in.good()) throw IoError("cannot read '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

UseCaseCard load_fixture(const std::string& name) {
    auto parsed = parse_card(slurp(fixture_dir() / name));
    if (!parsed.ok())
        throw UccError("fixture '" + name + "' unexpectedly failed to parse");
    return *parsed.card;
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("ucc-accept-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void copy_fixtures(const fs::path& to) {
    for (const auto& name : kFixtures)
        fs::copy_file(fixture_dir() / name, to / name);
}

UseCaseCard base_card() {
    UseCaseCard c;
    c.id = "base";
    c.title = "Base";
    c.version = "1.0";
    c.date = "2023-01-01";
    c.provider = "Example";
    c.intended_purpose.context_of_use = "short context";
    c.intended_purpose.scope = "short scope";
    c.product_type = "other-software";
    c.application_entries = {{"politics", ""}};
    c.actors = {{"user", "User", ActorKind::individual}};
    c.use_cases = {{"work", "Work", true, true}};
    c.relations = {{RelationKind::association, "user", "work"}};
    c.primary_actor = "user";
    c.main_course = {{1, "do"}};
    c.open_issues = {"recorded"};
    return c;
}

bool has_trigger(const RiskAssessment& a, std::string_view rule) {
    for (const auto& t : a.triggers)
        if (t.rule == rule) return true;
    return false;
}

// -------------------------------------------------------------------------

void criterion_1_fixture_fidelity() {
    Criterion c{"1 fixture fidelity"};
    auto start = Clock::now();
    for (const auto& name : kFixtures) {
        auto parsed = parse_card(slurp(fixture_dir() / name));
        c.expect(parsed.ok(), name + ": parse failed");
        if (!parsed.ok()) continue;
        auto diag = validate(*parsed.card);
        c.expect(diag.error_count() == 0,
                 name + ": " + std::to_string(diag.error_count()) +
                     " validation errors");
        c.expect(diag.warning_count() == 0,
                 name + ": " + std::to_string(diag.warning_count()) +
                     " validation warnings");
    }

    auto card = load_fixture("scene-narrator.ucc");
    std::set<int> numbers;
    for (const auto& raw : card.intended_purpose.sdgs)
        numbers.insert(lookup_sdg(raw).number);
    c.expect(numbers == std::set<int>{3, 10},
             "scene narrator SDGs are not {3, 10}");
    c.expect(card.application_entries.size() == 2,
             "scene narrator should declare two application entries");
    if (card.application_entries.size() == 2) {
        c.expect(card.application_entries[0] ==
                     ApplicationRef{"social-assistance", ""},
                 "first area is not social-assistance");
        c.expect(card.application_entries[1] ==
                     ApplicationRef{"biometrics",
                                    "remote-biometric-identification"},
                 "second area is not the biometric identification subarea");
    }
    c.expect(!card.safety_component, "scene narrator must not be a safety "
                                     "component");
    const auto& product = lookup_product_type(card.product_type);
    c.expect(product.id == "other-software" && !product.annex_ii,
             "scene narrator product is not plain software");

    double seconds = elapsed_since(start);
    c.expect(seconds < 1.0, "fixture pass took >= 1s");
    report(c, seconds);
}

void criterion_2_risk_truth_table() {
    Criterion c{"2 risk truth table"};
    auto start = Clock::now();

    struct Expected {
        const char* file;
        RiskTier tier;
        const char* rule;  // trigger that must be present; "" = none required
    };
    const Expected fixture_table[] = {
        {"scene-narrator.ucc", RiskTier::high, "R3"},
        {"driver-monitoring.ucc", RiskTier::high, "R1"},
        {"student-proctoring.ucc", RiskTier::high, "R3"},
        {"smart-camera.ucc", RiskTier::minimal, "R5"},
        {"affective-music-recommender.ucc", RiskTier::transparency, "R4"},
    };
    for (const auto& row : fixture_table) {
        auto a = assess(load_fixture(row.file));
        c.expect(a.tier == row.tier,
                 std::string(row.file) + ": tier is " +
                     std::string(to_string(a.tier)));
        c.expect(has_trigger(a, row.rule),
                 std::string(row.file) + ": trigger " + row.rule + " missing");
    }

    // synthetic cross-product: {annex-II product} x {safety component}
    // x {annex-III area} x {transparency flag}, 16 combinations against a
    // hand-written tier table
    const char* expected_tier[16] = {
        // annex_ii=0 safety=0: area=0 flag=0/1, area=1 flag=0/1
        "minimal", "transparency", "high", "high",
        // annex_ii=0 safety=1
        "high", "high", "high", "high",
        // annex_ii=1 safety=0
        "high", "high", "high", "high",
        // annex_ii=1 safety=1
        "high", "high", "high", "high"};
    for (int mask = 0; mask < 16; ++mask) {
        const bool annex_ii = (mask & 8) != 0;
        const bool safety = (mask & 4) != 0;
        const bool annex_iii = (mask & 2) != 0;
        const bool flagged = (mask & 1) != 0;
        auto card = base_card();
        card.product_type = annex_ii ? "toy" : "other-software";
        card.safety_component = safety;
        card.application_entries = {
            annex_iii
                ? ApplicationRef{"biometrics", "remote-biometric-identification"}
                : ApplicationRef{"politics", ""}};
        if (flagged)
            card.transparency_flags = {
                TransparencyFlag::interacts_with_natural_persons};
        auto diag = validate(card);
        c.expect(diag.error_count() == 0,
                 "combination " + std::to_string(mask) + " failed validation");
        auto a = assess(card);
        c.expect(to_string(a.tier) == expected_tier[mask],
                 "combination " + std::to_string(mask) + ": got " +
                     std::string(to_string(a.tier)) + ", oracle says " +
                     expected_tier[mask]);
    }
    report(c, elapsed_since(start));
}

void criterion_3_vocabulary_counts() {
    Criterion c{"3 vocabulary counts"};
    const auto& products = product_types();
    c.expect(products.size() == 20, "product type count != 20");
    int annex_ii = 0;
    for (const auto& p : products) annex_ii += p.annex_ii ? 1 : 0;
    c.expect(annex_ii == 18, "annex-II product flags != 18");

    const auto& areas = application_areas();
    c.expect(areas.size() == 20, "application area count != 20");
    std::vector<int> distribution;
    int subareas = 0;
    bool all_high_risk = true;
    for (const auto& a : areas) {
        if (a.subareas.empty()) continue;
        distribution.push_back(static_cast<int>(a.subareas.size()));
        subareas += static_cast<int>(a.subareas.size());
        for (const auto& s : a.subareas) all_high_risk &= s.annex_iii;
    }
    c.expect(subareas == 19, "annex-III subarea count != 19");
    c.expect(distribution == std::vector<int>{1, 1, 2, 2, 4, 5, 3, 1},
             "subarea distribution is not 1,1,2,2,4,5,3,1");
    c.expect(all_high_risk, "a subarea is not flagged annex-III");
    c.expect(sdgs().size() == 17, "SDG count != 17");
    c.expect(vocabularies_consistent(), "vocabulary cross-checks failed");
    report(c);
}

void criterion_4_round_trip() {
    Criterion c{"4 round-trip and corruption"};
    auto start = Clock::now();

    gen::Rng rng(20230315);
    for (int i = 0; i < 1000; ++i) {
        auto card = gen::random_valid_card(rng);
        auto text = serialize_card(card);
        auto parsed = parse_card(text);
        if (!parsed.ok()) {
            c.expect(false, "round trip " + std::to_string(i) +
                                ": serialized card failed to parse");
            continue;
        }
        c.expect(*parsed.card == card,
                 "round trip " + std::to_string(i) + ": cards differ");
        c.expect(serialize_card(*parsed.card) == text,
                 "round trip " + std::to_string(i) +
                     ": serializer is not a fixed point");
    }

    gen::Rng mrng(424242);
    for (int i = 0; i < 200; ++i) {
        auto card = gen::random_valid_card(mrng);
        auto corrupted = gen::mutate(serialize_card(card), mrng);
        auto parsed = parse_card(corrupted);  // must never throw or crash
        c.expect(!parsed.ok(), "mutation " + std::to_string(i) +
                                   ": corrupted input parsed cleanly");
        bool located = false;
        for (const auto& d : parsed.diagnostics)
            located |= d.location.line >= 1 && d.location.column >= 1;
        c.expect(located, "mutation " + std::to_string(i) +
                              ": no located diagnostic");
    }

    double seconds = elapsed_since(start);
    c.expect(seconds < 10.0, "round-trip pass took >= 10s");
    report(c, seconds);
}

void criterion_5_cycle_oracle() {
    Criterion c{"5 cycle detection vs path enumeration"};
    auto start = Clock::now();
    long long graphs = 0;

    for (int n = 1; n <= 5 && c.ok; ++n) {
        // template card with n use cases; relations are rebuilt per mask
        UseCaseCard card = base_card();
        card.use_cases.clear();
        for (int i = 0; i < n; ++i)
            card.use_cases.push_back({"u" + std::to_string(i),
                                      "U" + std::to_string(i), i == 0,
                                      i == 0});
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) slots.emplace_back(i, j);

        const Relation keep = {RelationKind::association, "user", "u0"};
        for (long long mask = 0; mask < (1LL << slots.size()); ++mask) {
            ++graphs;
            card.relations.clear();
            card.relations.push_back(keep);
            gen::CycleOracle oracle(n);
            for (size_t s = 0; s < slots.size(); ++s) {
                if (!(mask & (1LL << s))) continue;
                auto [i, j] = slots[s];
                oracle.edge[i][j] = true;
                card.relations.push_back(
                    {(i + j) % 2 == 0 ? RelationKind::include
                                      : RelationKind::extend,
                     "u" + std::to_string(i), "u" + std::to_string(j)});
            }

            auto cycles = include_extend_cycles(card);
            auto groups = oracle.cyclic_groups();
            if (cycles.size() != groups.size()) {
                c.expect(false, "n=" + std::to_string(n) + " mask=" +
                                    std::to_string(mask) + ": " +
                                    std::to_string(cycles.size()) +
                                    " cycles vs " +
                                    std::to_string(groups.size()) + " groups");
                break;
            }
            for (size_t k = 0; k < cycles.size() && c.ok; ++k) {
                const auto& cycle = cycles[k];
                const auto& group = groups[k];
                std::string at = "n=" + std::to_string(n) +
                                 " mask=" + std::to_string(mask) +
                                 " cycle=" + std::to_string(k);
                c.expect(cycle.size() >= 2 && cycle.front() == cycle.back(),
                         at + ": not closed");
                c.expect(cycle.front() == group.front(),
                         at + ": root is not the earliest node");
                for (size_t v = 0; v + 1 < cycle.size(); ++v)
                    c.expect(oracle.edge[cycle[v]][cycle[v + 1]],
                             at + ": edge missing in graph");
                for (int v : cycle)
                    c.expect(std::find(group.begin(), group.end(), v) !=
                                 group.end(),
                             at + ": node outside its component");
            }
            if (!c.ok) break;
        }
    }

    c.notes.insert(c.notes.begin(),
                   std::to_string(graphs) + " digraphs checked");
    if (c.ok) c.notes.clear();
    report(c, elapsed_since(start));
}

void criterion_6_render_determinism() {
    Criterion c{"6 rendering determinism and containment"};
    auto start = Clock::now();

    auto contained = [&](const UseCaseCard& card, const std::string& what) {
        auto layout = layout_diagram(card);
        const Rect& b = layout.boundary;
        for (const auto& oval : layout.ovals) {
            bool inside = oval.center.x - oval.rx >= b.x &&
                          oval.center.x + oval.rx <= b.right() &&
                          oval.center.y - oval.ry >= b.y &&
                          oval.center.y + oval.ry <= b.bottom();
            c.expect(inside, what + ": oval " + oval.usecase_id +
                                 " leaves the boundary");
        }
        for (const auto& actor : layout.actors) {
            bool outside = actor.anchor.x + layout::kActorHalfW < b.x ||
                           actor.anchor.x - layout::kActorHalfW > b.right();
            c.expect(outside, what + ": actor " + actor.actor_id +
                                  " overlaps the boundary");
        }
        c.expect(layout.width > 0 && layout.height > 0,
                 what + ": degenerate canvas");
    };

    for (const auto& name : kFixtures) {
        auto card = load_fixture(name);
        auto assessment = assess(card);
        auto svg_a = render_svg(layout_diagram(card), card);
        auto svg_b = render_svg(layout_diagram(card), card);
        c.expect(svg_a == svg_b, name + ": SVG not byte-identical");
        c.expect(svg_a.find('\r') == std::string::npos,
                 name + ": SVG contains carriage returns");
        auto html_a = render_card_html(card, assessment);
        auto html_b = render_card_html(card, assessment);
        c.expect(html_a == html_b, name + ": HTML not byte-identical");
        c.expect(html_a.find('\r') == std::string::npos,
                 name + ": HTML contains carriage returns");
        contained(card, name);
    }

    gen::Rng rng(88003);
    for (int i = 0; i < 200; ++i)
        contained(gen::random_valid_card(rng),
                  "random card " + std::to_string(i));
    report(c, elapsed_since(start));
}

void criterion_7_catalogue_statistics() {
    Criterion c{"7 catalogue statistics"};
    TempDir tmp;
    copy_fixtures(tmp.path);

    auto cat = ingest(tmp.path);
    auto report_stats = stats(cat);
    int high = report_stats.per_tier.count("high")
                   ? report_stats.per_tier.at("high")
                   : 0;
    int other = 0;
    for (const auto& [tier, count] : report_stats.per_tier)
        if (tier != "high") other += count;
    c.expect(high == 3, "per-tier high != 3");
    c.expect(other == 2, "per-tier other != 2");

    // manual tally across the fixture files themselves
    std::map<int, int> manual;
    for (const auto& name : kFixtures)
        for (const auto& raw : load_fixture(name).intended_purpose.sdgs)
            ++manual[lookup_sdg(raw).number];
    c.expect(report_stats.per_sdg == manual,
             "per-SDG counts disagree with the manual tally");

    auto first = slurp(tmp.path / std::string(kIndexFileName));
    ingest(tmp.path);
    auto second = slurp(tmp.path / std::string(kIndexFileName));
    c.expect(first == second, "re-ingest changed the index bytes");
    report(c);
}

void criterion_8_cli_contract() {
    Criterion c{"8 command line contract"};
    TempDir corpus;
    copy_fixtures(corpus.path);
    TempDir scratch;

    auto run = [&](const std::string& args, std::string* out = nullptr) {
        fs::path out_path = scratch.path / "out";
        fs::path err_path = scratch.path / "err";
        std::string cmd = "UCC_NO_COLOR=1 \"" UCC_CLI_PATH "\" " + args +
                          " > \"" + out_path.string() + "\" 2> \"" +
                          err_path.string() + "\"";
        int status = std::system(cmd.c_str());
        if (out) *out = slurp(out_path);
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    auto fixture = [&](const std::string& name) {
        return "\"" + (corpus.path / name).string() + "\"";
    };
    auto check_json = [&](const std::string& args, const std::string& what) {
        std::string out;
        c.expect(run(args, &out) == 0, what + ": nonzero exit");
        try {
            auto parsed = ojson::parse(out);
            c.expect(!parsed.is_discarded(), what + ": stdout is not JSON");
        } catch (const std::exception&) {
            c.expect(false, what + ": stdout is not valid JSON");
        }
    };

    fs::path skeleton = scratch.path / "skeleton.ucc";
    c.expect(run("init \"" + skeleton.string() + "\"") == 0, "init != 0");
    c.expect(run("init \"" + skeleton.string() + "\"") == 4,
             "init on existing file != 4");
    c.expect(run("validate " + fixture("smart-camera.ucc")) == 0,
             "validate clean card != 0");
    c.expect(run("validate \"" + skeleton.string() + "\"") == 1,
             "validate invalid card != 1");
    fs::path broken = scratch.path / "broken.ucc";
    std::ofstream(broken) << "[card\n";
    c.expect(run("validate \"" + broken.string() + "\"") == 2,
             "validate unparsable card != 2");
    c.expect(run("validate") == 3, "validate without arguments != 3");
    c.expect(run("validate \"" + (scratch.path / "absent.ucc").string() +
                 "\"") == 4,
             "validate missing file != 4");
    c.expect(run("assess " + fixture("driver-monitoring.ucc")) == 0,
             "assess != 0");
    c.expect(run("assess \"" + skeleton.string() + "\"") == 1,
             "assess invalid card != 1");
    c.expect(run("render " + fixture("smart-camera.ucc")) == 0,
             "render svg != 0");
    c.expect(run("render --format html " + fixture("smart-camera.ucc")) == 0,
             "render html != 0");
    c.expect(run("render --format png " + fixture("smart-camera.ucc")) == 3,
             "render with unknown format != 3");
    c.expect(run("stats \"" + corpus.path.string() + "\"") == 0, "stats != 0");
    c.expect(run("stats \"" + (scratch.path / "nodir").string() + "\"") == 4,
             "stats on missing directory != 4");
    c.expect(run("query --tier high \"" + corpus.path.string() + "\"") == 0,
             "query != 0");
    c.expect(run("query --tier severe \"" + corpus.path.string() + "\"") == 3,
             "query with unknown tier != 3");
    c.expect(run("export vocab products") == 0, "export vocab != 0");
    c.expect(run("export vocab verbs") == 3, "export unknown vocab != 3");
    c.expect(run("export card " + fixture("scene-narrator.ucc")) == 0,
             "export card != 0");
    c.expect(run("export catalogue \"" + corpus.path.string() + "\"") == 0,
             "export catalogue != 0");
    c.expect(run("frobnicate") == 3, "unknown subcommand != 3");

    check_json("validate --format json " + fixture("smart-camera.ucc"),
               "validate json");
    check_json("assess --format json " + fixture("scene-narrator.ucc"),
               "assess json");
    check_json("stats --format json \"" + corpus.path.string() + "\"",
               "stats json");
    check_json("query --format json --tier high \"" + corpus.path.string() +
                   "\"",
               "query json");
    check_json("export vocab areas", "export vocab json");
    check_json("export card " + fixture("smart-camera.ucc"),
               "export card json");
    check_json("export catalogue \"" + corpus.path.string() + "\"",
               "export catalogue json");
    report(c);
}

}  // namespace

int main() {
    std::cout << "acceptance suite\n";
    criterion_1_fixture_fidelity();
    criterion_2_risk_truth_table();
    criterion_3_vocabulary_counts();
    criterion_4_round_trip();
    criterion_5_cycle_oracle();
    criterion_6_render_determinism();
    criterion_7_catalogue_statistics();
    criterion_8_cli_contract();
    if (g_failures == 0) {
        std::cout << "all criteria satisfied\n";
        return 0;
    }
    std::cout << g_failures << " criteria failed\n";
    return 1;
}
