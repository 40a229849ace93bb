#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <regex>
#include <string>

#include "lagconc/io.hpp"
#include "lagconc/pipeline.hpp"
#include "lagconc/svg.hpp"
#include "test_support.hpp"

using namespace lagconc;
using lagconc::testing::flat_family;
namespace fs = std::filesystem;

namespace {

const fs::path kSamples = LAGCONC_SAMPLES_DIR;
const std::string kCli = LAGCONC_CLI;
constexpr std::uint64_t kCoilProjectionHash = 0xaca653e50e68d0efull;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("lagconc_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

fs::path write_config(const fs::path& dir, Json j) {
  fs::path cp = dir / "config.json";
  io::write_text(cp, io::dump(j));
  return cp;
}

int shell(const std::string& cmd) {
  int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Io, NumbersRoundTripBitExactly) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 5e-324}) {
    Json j = io::parse(io::dump(Json{{"v", v}}), "mem");
    EXPECT_EQ(j["v"].get<double>(), v);
  }
  EXPECT_THROW(io::format_number(NAN), Error);
}

TEST(Io, DumpSortsKeys) {
  Json j{{"b", 1}, {"a", {{"d", 2}, {"c", 3}}}};
  std::string s = io::dump(j);
  EXPECT_LT(s.find("\"a\""), s.find("\"b\""));
  EXPECT_LT(s.find("\"c\""), s.find("\"d\""));
}

TEST(Io, ParseErrorCarriesLineAndColumn) {
  try {
    io::parse("{\n  \"a\": 1,\n  \"b\": ]\n}", "cfg.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(e.message().find("line 3, column 8"), std::string::npos) << e.message();
  }
}

TEST(Io, MissingFileUsesRequestedKind) {
  try {
    io::load("/nonexistent/lagconc.json", ErrorKind::MissingArtifact);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingArtifact);
  }
}

TEST(Io, SliceRoundTrip) {
  auto d = insert_loop_pairs(flat_family(64, 2), 1, 3, 1e-3, 1e-3);
  auto s = materialize(d, 0);
  z_lift(s, 0.0);
  auto back = io::slice_from_json(io::parse(io::dump(io::slice_to_json(s)), "mem"));
  EXPECT_EQ(back.tau, s.tau);
  EXPECT_EQ(back.p, s.p);
  EXPECT_EQ(back.z, s.z);
}

TEST(Io, ScheduleRoundTrip) {
  AreaSchedule a{2, 3, {1e-4, 2e-4, 3e-4, 1e-4, 1e-4, 4e-4}};
  SchedulerReport r;
  r.N = 1, r.W = 2, r.c0 = 1e-4, r.c1 = 4e-4;
  auto back = io::schedule_from_json(io::parse(io::dump(io::schedule_to_json(a, r)), "mem"));
  EXPECT_EQ(back.N, 1);
  EXPECT_EQ(back.W, 2);
  EXPECT_EQ(back.schedule.loops, 2);
  EXPECT_EQ(back.schedule.S, 3);
  EXPECT_EQ(back.schedule.a, a.a);
}

TEST(Io, ConfigSchemaErrors) {
  EXPECT_THROW(config_from_json(Json{{"input", "x"}, {"output", "y"}}), Error);
  EXPECT_THROW(config_from_json(Json{{"input", "x"}, {"output", "y"}, {"epsilon", "big"}}), Error);
  auto c = config_from_json(Json{{"input", "x.json"}, {"output", "o"}, {"epsilon", 0.01}}, "/base");
  EXPECT_EQ(c.input, fs::path("/base/x.json"));
}

TEST(Svg, ZeroSectionProjectionIsOneSimplePath) {
  auto s = materialize(insert_loop_pairs(flat_family(64, 2), 0, 1, kAreaFloor, kAreaFloor), 0);
  EXPECT_TRUE(lagconc::testing::brute_crossings(s).empty());
  std::string out = svg::projection(s);
  std::size_t paths = 0;
  for (std::size_t at = out.find("<path"); at != std::string::npos; at = out.find("<path", at + 1)) ++paths;
  EXPECT_EQ(paths, 1u);
  EXPECT_NE(out.find("viewBox=\"0 0 800 500\""), std::string::npos);
}

TEST(Svg, SingleCoilProjectionIsPinned) {
  auto s = materialize(insert_loop_pairs(flat_family(256, 2), 1, 7, 1e-3, 1e-3), 0);
  std::string out = svg::projection(s, "N = 1, W = 7");
  EXPECT_EQ(fnv1a(out), kCoilProjectionHash) << std::hex << fnv1a(out);
}

TEST(Svg, GrayLevelIsMonotone) {
  int prev = 256;
  for (int k = 0; k <= 100; ++k) {
    int g = svg::gray_level(k / 100.0, 0.0, 1.0);
    EXPECT_LE(g, prev);
    prev = g;
  }
}

TEST(Pipeline, ZeroInputIsTrivialPass) {
  fs::path dir = scratch("zero");
  Json cfg = io::load(kSamples / "zero.config.json");
  cfg["input"] = (kSamples / "zero.json").string();
  cfg["output"] = (dir / "out").string();
  auto res = run(config_from_json(cfg));
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.report["status"], "PASS");
  EXPECT_EQ(res.report["parameters"]["N"], 0);
  EXPECT_TRUE(verify(dir / "out").pass);
}

class BisectionRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = scratch("bisection");
    for (const char* name : {"a", "b"}) {
      Json cfg = io::load(kSamples / "bisection.config.json");
      cfg["input"] = (kSamples / "bisection.json").string();
      cfg["output"] = (root_ / name).string();
      results_[name] = run(config_from_json(cfg));
    }
  }
  static inline fs::path root_;
  static inline std::map<std::string, RunResult> results_;
};

TEST_F(BisectionRun, Passes) {
  EXPECT_EQ(results_["a"].exit_code, 0);
  auto v = verify(root_ / "a");
  for (const auto& c : v.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}

TEST_F(BisectionRun, ArtifactsAreByteIdentical) {
  for (const auto& entry : fs::recursive_directory_iterator(root_ / "a")) {
    if (!entry.is_regular_file()) continue;
    fs::path rel = fs::relative(entry.path(), root_ / "a");
    EXPECT_EQ(io::read_text(root_ / "a" / rel), io::read_text(root_ / "b" / rel)) << rel;
  }
}

TEST_F(BisectionRun, HeatmapRowsDarkenAlongS) {
  std::string out = io::read_text(root_ / "a" / "schedule.svg");
  std::regex rect(R"re(<rect x="([0-9.]+)" y="([0-9.]+)" width="[0-9.]+" height="[0-9.]+" fill="#([0-9a-f]{2}))re");
  std::map<double, std::map<double, int>> rows;
  for (auto it = std::sregex_iterator(out.begin(), out.end(), rect); it != std::sregex_iterator(); ++it)
    rows[std::stod((*it)[2])][std::stod((*it)[1])] = std::stoi((*it)[3], nullptr, 16);
  ASSERT_FALSE(rows.empty());
  for (const auto& [y, row] : rows) {
    int prev = 256;
    for (const auto& [x, g] : row) {
      EXPECT_LE(g, prev) << "row y=" << y << " x=" << x;
      prev = g;
    }
  }
}

TEST_F(BisectionRun, TamperedScheduleFailsWithCoordinates) {
  fs::path dir = scratch("tampered");
  fs::copy(root_ / "a", dir, fs::copy_options::recursive);
  Json s = io::load(dir / "schedule.json");
  s["areas"][1][10] = s["areas"][1][9].get<double>() * 0.5;
  io::write_text(dir / "schedule.json", io::dump(s));
  auto v = verify(dir);
  EXPECT_FALSE(v.pass);
  bool found = false;
  for (const auto& c : v.checks)
    if (c.name == "schedule-monotone") {
      found = true;
      EXPECT_FALSE(c.pass);
      EXPECT_NE(c.detail.find("loop 1"), std::string::npos) << c.detail;
    }
  EXPECT_TRUE(found);
}

TEST(Cli, ExitCodes) {
  fs::path dir = scratch("cli");
  EXPECT_EQ(shell(kCli + " run --config " + quoted(dir / "absent.json")), 2);
  io::write_text(dir / "broken.json", "{\"input\": ");
  EXPECT_EQ(shell(kCli + " run --config " + quoted(dir / "broken.json")), 2);
  EXPECT_EQ(shell(kCli + " bogus"), 2);

  Json cfg = io::load(kSamples / "bisection.config.json");
  cfg["input"] = (kSamples / "bisection.json").string();
  cfg["output"] = (dir / "infeasible").string();
  cfg["N"] = 1;
  cfg["W"] = 1;
  cfg["c1"] = 1e-5;
  cfg["max_escalations"] = 0;
  EXPECT_EQ(shell(kCli + " run --config " + quoted(write_config(dir, cfg))), 3);

  cfg["output"] = (dir / "ok").string();
  cfg.erase("N"), cfg.erase("W"), cfg.erase("c1"), cfg.erase("max_escalations");
  EXPECT_EQ(shell(kCli + " run --config " + quoted(write_config(dir, cfg))), 0);
  EXPECT_EQ(shell(kCli + " verify " + quoted(dir / "ok")), 0);
  EXPECT_EQ(shell(kCli + " plot " + quoted(dir / "ok") + " --kind front"), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "front.svg"));
  EXPECT_EQ(shell(kCli + " plot " + quoted(dir / "ok") + " --kind sideways"), 2);
  EXPECT_EQ(shell(kCli + " verify " + quoted(dir / "missing")), 2);
  EXPECT_EQ(shell(kCli + " invariants " + quoted(dir / "ok" / "slices" / "end.json")), 0);

  Json s = io::load(dir / "ok" / "isotopy.json");
  s["slices"][5]["z_shift"] = s["slices"][5]["z_shift"].get<double>() + 0.02;
  io::write_text(dir / "ok" / "isotopy.json", io::dump(s));
  EXPECT_EQ(shell(kCli + " verify " + quoted(dir / "ok")), 1);
}

TEST(Cli, GroupsOnSamples) {
  fs::path k = kSamples / "knots";
  EXPECT_EQ(shell(kCli + " groups --distinguish --pd " + quoted(k / "trefoil.pd") + " --pd " +
                  quoted(k / "figure_eight.pd")),
            0);
  fs::path dir = scratch("pd");
  io::write_text(dir / "bad.pd", "X 1 2 3\n");
  EXPECT_EQ(shell(kCli + " groups --pd " + quoted(dir / "bad.pd")), 2);
}
