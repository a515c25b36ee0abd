#include "fracid/app/commands.hpp"
#include "fracid/app/config.hpp"
#include "fracid/app/criteria.hpp"
#include "fracid/app/fixtures.hpp"
#include "fracid/app/svg.hpp"
#include "fracid/errors.hpp"
#include "fracid/fotf/model_io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace fracid;
using namespace fracid::app;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("fracid_test_" + tag + "_" + std::to_string(std::rand()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

const std::string* find_file(const Output& o, const std::string& name) {
    for (const auto& [p, c] : o.files)
        if (p == name) return &c;
    return nullptr;
}

ModelRef fixture(const std::string& label) {
    ModelRef r;
    r.fixture = label;
    return r;
}

} // namespace

TEST_CASE("fixture checksums") {
    CHECK(checksum_failures(builtin_fixtures()).empty());
    FixtureBank bad = builtin_fixtures();
    auto num = bad.fo[3].model.num();
    num[0] += 0.0001;
    bad.fo[3].model = CommensurateFoTf(bad.fo[3].model.q(), num, bad.fo[3].model.den());
    CHECK(checksum_failures(bad).size() == 1);

    FixtureBank bad2 = builtin_fixtures();
    auto den = bad2.discrete[1].model.den();
    den[2] *= 1.001;
    bad2.discrete[1].model = DiscreteTf(bad2.discrete[1].model.num(), den, 0.1);
    CHECK_FALSE(checksum_failures(bad2).empty());
}

TEST_CASE("fixtures export and reload unchanged") {
    TempDir dir("fixtures");
    export_fixtures(builtin_fixtures(), dir.path);
    const auto back = load_fixtures(dir.path);
    REQUIRE(back.fo.size() == 8);
    REQUIRE(back.discrete.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(back.fo[i].model == builtin_fixtures().fo[i].model);
        CHECK(back.discrete[i].model == builtin_fixtures().discrete[i].model);
    }
    CHECK(back.controller.gains == builtin_fixtures().controller.gains);
}

TEST_CASE("run configuration") {
    const auto cfg = parse_config(R"({"seed": 7, "tuning": {"restarts": 3}, "grid": {"count": 40}})");
    CHECK(cfg.seed == 7);
    CHECK(cfg.tuning.restarts == 3);
    CHECK(cfg.grid.count == 40);
    const auto again = parse_config(serialize(cfg));
    CHECK(serialize(again) == serialize(cfg));
    CHECK_THROWS_AS(parse_config(R"({"sede": 7})"), ArgumentError);
    CHECK_THROWS_AS(parse_config(R"({"tuning": {"restarts": 0}})"), ArgumentError);
    const auto qs = parse_q_list("1, 1/2,1/4");
    REQUIRE(qs.size() == 3);
    CHECK(qs[2] == RationalOrder(1, 4));
}

TEST_CASE("identify-discrete on a regenerated record") {
    RunConfig cfg;
    IdentifyDiscreteArgs a;
    a.fixture = "G30_90";
    a.specs = {"arx:na=2,nb=2,nk=1", "oe:nb=1,nf=2,nk=1", "bj:nb=1,nc=1,nd=1,nf=2,nk=1"};
    const auto o = cmd_identify_discrete(cfg, a);
    const auto* best = find_file(o, "best_model.json");
    REQUIRE(best);
    const auto model = std::get<DiscreteTf>(parse_model(*best));
    const double truth = find_discrete(builtin_fixtures(), "G30_90")->model.dc_gain();
    CHECK(std::abs(model.dc_gain() - truth) <= 0.05 * std::abs(truth));

    a.specs.clear();
    CHECK_THROWS_AS(cmd_identify_discrete(cfg, a), ArgumentError);
}

TEST_CASE("malformed data reports the line") {
    TempDir dir("csv");
    const auto path = dir.path / "bad.csv";
    write_file_atomic(path, "t,u,y\n0,0,0\n0.1,1,oops\n");
    IdentifyDiscreteArgs a;
    a.data = path;
    a.specs = {"arx:na=1,nb=1,nk=1"};
    try {
        cmd_identify_discrete(RunConfig{}, a);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("identify-fo") {
    RunConfig cfg;
    IdentifyFoArgs a;
    a.fixture = "G30_100";
    a.q_list = std::vector<RationalOrder>{RationalOrder(1, 4)};
    a.weighting = sysid::Weighting::Vinagre;
    const auto o = cmd_identify_fo(cfg, a);
    CHECK(o.exit_code == 0);
    CHECK(find_file(o, "order_distribution_G30_100_q1_4_vinagre.csv") != nullptr);

    IdentifyFoArgs self;
    self.self_test = true;
    self.q_list = std::vector<RationalOrder>{RationalOrder(1), RationalOrder(1, 2), RationalOrder(1, 4)};
    CHECK(cmd_identify_fo(cfg, self).exit_code == 0);

    IdentifyFoArgs bad = a;
    bad.q_list = std::vector<RationalOrder>{RationalOrder(1, 3)};
    CHECK_THROWS_AS(cmd_identify_fo(cfg, bad), ArgumentError);
}

TEST_CASE("analyze") {
    const auto o = cmd_analyze(RunConfig{}, fixture("G30_90"));
    CHECK(o.summary.find("stable: yes") != std::string::npos);
    const auto* svg = find_file(o, "analyze_G30_90_pz.svg");
    REQUIRE(svg);
    CHECK(svg->rfind("<svg", 0) == 0);

    TempDir dir("analyze");
    const auto ml = dir.path / "ml.json";
    write_file_atomic(ml, serialize(CommensurateFoTf(RationalOrder(1, 2), {1.0}, {1.0, 1.0})));
    ModelRef r;
    r.file = ml;
    CHECK(cmd_analyze(RunConfig{}, r).summary.find("ultradamped") != std::string::npos);

    // s + a s^{1/2} + 1 with a = -2
    const auto un = dir.path / "unstable.json";
    write_file_atomic(un, serialize(CommensurateFoTf(RationalOrder(1, 2), {1.0}, {1.0, -2.0, 1.0})));
    r.file = un;
    const auto u = cmd_analyze(RunConfig{}, r);
    CHECK(u.summary.find("stable: no") != std::string::npos);
    CHECK(u.summary.find("unstable") != std::string::npos);
}

TEST_CASE("verify and tune commands") {
    ModelRef published = fixture("published");
    const auto v = cmd_verify(RunConfig{}, published, {});
    const auto* csv = find_file(v, "verify_min_angles.csv");
    REQUIRE(csv);
    CHECK(std::count(csv->begin(), csv->end(), '\n') == 9);

    auto cfg = parse_config(R"({"tuning": {"restarts": 1, "max_iterations": 40}})");
    const auto t1 = cmd_tune(cfg, {fixture("G30_100"), fixture("G50_100")});
    const auto t2 = cmd_tune(cfg, {fixture("G30_100"), fixture("G50_100")});
    REQUIRE(t1.files.size() == t2.files.size());
    for (std::size_t i = 0; i < t1.files.size(); ++i) CHECK(t1.files[i].second == t2.files[i].second);
}

TEST_CASE("failed commands leave nothing behind") {
    TempDir dir("atomic");
    IdentifyFoArgs bad;
    bad.fixture = "G30_100";
    bad.q_list = std::vector<RationalOrder>{RationalOrder(1, 4), RationalOrder(1, 3)};
    bool threw = false;
    try {
        commit(cmd_identify_fo(RunConfig{}, bad), dir.path);
    } catch (const ArgumentError&) {
        threw = true;
    }
    CHECK(threw);
    CHECK(fs::is_empty(dir.path));

    SimulateArgs s;
    s.plant = fixture("G30_100");
    s.controller = fixture("nonsense");
    CHECK_THROWS_AS(cmd_simulate(RunConfig{}, s), ArgumentError);
}

TEST_CASE("report aborts on a corrupted fixture directory") {
    TempDir dir("corrupt");
    export_fixtures(builtin_fixtures(), dir.path);
    auto tf = builtin_fixtures().fo[0].model;
    auto num = tf.num();
    num[0] = 189.0;
    write_file_atomic(dir.path / "fo_G30_100.json", serialize(CommensurateFoTf(tf.q(), num, tf.den())));
    ReportArgs a;
    a.fixtures_dir = dir.path;
    CHECK_THROWS_AS(cmd_report(RunConfig{}, a), ArgumentError);
}

TEST_CASE("svg output is deterministic") {
    svg::Series s{"y", {0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}};
    const auto a = svg::line_plot("t", "x", "y", {s});
    const auto b = svg::line_plot("t", "x", "y", {s});
    CHECK(a == b);
    CHECK(a.find("</svg>") != std::string::npos);
}

TEST_CASE("criterion lines") {
    CriterionResult r{2, "stability screen", true, {}};
    CHECK(format_line(r) == "[PASS] 2 stability screen");
    r.pass = false;
    CHECK(format_line(r).rfind("[FAIL] 2", 0) == 0);
    CHECK(check_stability_screen(builtin_fixtures()).pass);
}
