// lagconc command line: run, verify, plot, groups, invariants.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lagconc/geom.hpp"
#include "lagconc/io.hpp"
#include "lagconc/knot_groups.hpp"
#include "lagconc/pipeline.hpp"

namespace fs = std::filesystem;
using lagconc::io::Json;

namespace {

enum Exit { kOk = 0, kCertificate = 1, kInput = 2, kInfeasible = 3 };

enum class Level { Error, Warn, Info, Debug };

Level log_level() {
  const char* v = std::getenv("LAGCONC_LOG");
  std::string s = v ? v : "warn";
  if (s == "error") return Level::Error;
  if (s == "info") return Level::Info;
  if (s == "debug") return Level::Debug;
  return Level::Warn;
}

void log(Level lv, const std::string& msg) {
  static const Level threshold = log_level();
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (lv <= threshold) std::cerr << "[" << names[static_cast<int>(lv)] << "] " << msg << "\n";
}

int error_block(const lagconc::Error& e) {
  Json j{{"error", {{"kind", lagconc::to_string(e.kind())}, {"message", e.message()}}}};
  std::cerr << j.dump(2) << "\n";
  return e.kind() == lagconc::ErrorKind::Infeasible ? kInfeasible : kInput;
}

int cmd_run(const std::string& config_path) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::path cp = config_path;
  auto cfg = lagconc::config_from_json(lagconc::io::load(cp), cp.parent_path());
  log(Level::Info, "input " + cfg.input.string() + ", output " + cfg.output.string());
  auto res = lagconc::run(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  log(Level::Info, "run finished in " + std::to_string(secs) + " s");
  const Json& r = res.report;
  Json summary{{"status", r.value("status", "")}, {"output", cfg.output.string()}};
  if (r.contains("parameters"))
    summary["parameters"] = {{"N", r["parameters"]["N"]}, {"W", r["parameters"]["W"]}, {"c1", r["parameters"]["c1"]}};
  if (r.contains("error")) summary["error"] = r["error"];
  std::cout << lagconc::io::dump(summary);
  return res.exit_code;
}

int cmd_verify(const std::string& dir) {
  auto v = lagconc::verify(dir);
  for (const auto& c : v.checks) std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  std::cout << (v.pass ? "verify: PASS" : "verify: FAIL") << "\n";
  return v.pass ? kOk : kCertificate;
}

int cmd_plot(const std::string& artifact, const std::string& kind, int slice, std::string out) {
  std::optional<std::size_t> k;
  if (slice >= 0) k = static_cast<std::size_t>(slice);
  std::string svg = lagconc::plot(artifact, kind, k);
  if (out.empty()) {
    fs::path a = artifact;
    out = fs::is_directory(a) ? (a / (kind + ".svg")).string() : (a.parent_path() / (a.stem().string() + "." + kind + ".svg")).string();
  }
  lagconc::io::write_text(out, svg);
  std::cout << out << "\n";
  return kOk;
}

int cmd_groups(const std::vector<std::string>& files, bool distinguish) {
  std::vector<lagconc::KnotDiagram> diagrams;
  Json knots = Json::array();
  for (const auto& f : files) {
    lagconc::KnotDiagram d;
    try {
      d = lagconc::parse_pd(lagconc::io::read_text(f));
    } catch (const lagconc::Error& e) {
      if (e.kind() != lagconc::ErrorKind::ParseError) throw;
      throw lagconc::Error(lagconc::ErrorKind::ParseError, f + ": " + e.message());
    }
    auto p = lagconc::wirtinger(d);
    auto simple = lagconc::simplify(p);
    auto inv = lagconc::invariants_of(p);
    Json rel = Json::array();
    for (const auto& r : simple.relators) rel.push_back(lagconc::word_to_string(r));
    Json torsion = Json::array();
    for (const auto& t : inv.h1.torsion) torsion.push_back(t.str());
    knots.push_back(Json{{"file", fs::path(f).filename().string()},
                         {"crossings", d.crossings.size()},
                         {"writhe", lagconc::writhe(d)},
                         {"wirtinger", {{"generators", p.generators}, {"relators", p.relators.size()}}},
                         {"simplified", {{"generators", simple.generators}, {"relators", rel}}},
                         {"h1", {{"rank", inv.h1.rank}, {"torsion", torsion}}},
                         {"alexander", inv.alexander.to_string()}});
    diagrams.push_back(std::move(d));
  }
  Json out{{"knots", knots}};
  if (distinguish) {
    auto cls = lagconc::distinguish(diagrams);
    out["classes"] = cls;
    out["distinct"] = cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1;
  }
  std::cout << lagconc::io::dump(out);
  return kOk;
}

int cmd_invariants(const std::string& file) {
  auto s = lagconc::io::slice_from_json(lagconc::io::load(file));
  if (s.z.empty()) lagconc::z_lift(s, 0.0);
  auto chords = lagconc::reeb_chords(s);
  double zmax = 0.0, lmin = INFINITY;
  for (double z : s.z) zmax = std::max(zmax, std::abs(z));
  for (const auto& c : chords) lmin = std::min(lmin, c.length);
  Json out{{"vertices", s.tau.size()},
           {"action", lagconc::action(s)},
           {"rotation", lagconc::rotation_number(s)},
           {"self_linking", lagconc::self_linking_reeb(s)},
           {"chords", chords.size()},
           {"min_chord_length", std::isfinite(lmin) ? Json(lmin) : Json(nullptr)},
           {"sup_abs_z", zmax}};
  std::cout << lagconc::io::dump(out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian concordance toolkit: loop scheduling, trace cobordisms, knot-group invariants"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "run the pipeline on a config file");
  run->add_option("--config", config, "pipeline config (JSON)")->required();

  std::string vdir;
  auto* verify = app.add_subcommand("verify", "re-audit a run directory from its raw artifacts");
  verify->add_option("dir", vdir, "run output directory")->required();

  std::string artifact, kind, out;
  int slice = -1;
  auto* plot = app.add_subcommand("plot", "emit an SVG plot of an artifact");
  plot->add_option("artifact", artifact, "run directory or artifact file")->required();
  plot->add_option("--kind", kind, "front | projection | schedule | chords")->required();
  plot->add_option("--slice", slice, "isotopy slice index (default: last)");
  plot->add_option("--out", out, "output SVG path");

  std::vector<std::string> pd;
  bool dist = false;
  auto* groups = app.add_subcommand("groups", "knot-group invariants of PD diagrams");
  groups->add_option("--pd", pd, "PD code file (repeatable)")->required();
  groups->add_flag("--distinguish", dist, "partition the diagrams by invariants");

  std::string slice_file;
  auto* inv = app.add_subcommand("invariants", "Legendrian invariants of a slice file");
  inv->add_option("slice", slice_file, "slice JSON with tau, p and optionally z")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*run) return cmd_run(config);
    if (*verify) return cmd_verify(vdir);
    if (*plot) return cmd_plot(artifact, kind, slice, out);
    if (*groups) return cmd_groups(pd, dist);
    if (*inv) return cmd_invariants(slice_file);
  } catch (const lagconc::Error& e) {
    return error_block(e);
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", {{"kind", "Internal"}, {"message", e.what()}}}}.dump(2) << "\n";
    return kInput;
  }
  return kOk;
}
