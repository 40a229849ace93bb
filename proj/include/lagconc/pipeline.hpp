#pragma once

// End-to-end driver: section family -> decorated isotopy -> trace cobordism,
// the on-disk artifacts, and an independent re-audit of a run directory.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lagconc/cobordism.hpp"
#include "lagconc/coil.hpp"
#include "lagconc/errors.hpp"
#include "lagconc/geom.hpp"
#include "lagconc/io.hpp"
#include "lagconc/svg.hpp"

namespace lagconc {

namespace fs = std::filesystem;
using io::Json;

inline constexpr double kActionTol = 1e-9;
inline constexpr double kMollifierSlack = 1.1;
inline constexpr double kAgreementTol = 1e-9;

struct PipelineConfig {
  fs::path input;
  fs::path output;
  double epsilon = 0.0;
  // optional grid expectations, checked against the input file
  std::optional<int> M, S;
  std::optional<double> T_minus, T_plus;
  std::optional<double> T_plus_prime;  // needed for pt/ptheta inputs
  // optional overrides of auto_parameters
  std::optional<int> N, W;
  std::optional<double> c1;
  int slices = 0;  // output slices of the isotopy; 0 means S
  int per_cover = 32;
  int max_escalations = 3;
  bool plot_front = true, plot_projection = true, plot_schedule = true, plot_chords = true;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(epsilon > 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be positive");
    if (input.empty() || output.empty()) fail(ErrorKind::InvalidArgument, "input and output paths must be nonempty");
    if (per_cover < 8) fail(ErrorKind::InvalidArgument, "per_cover must be at least 8");
    if (slices < 0 || max_escalations < 0) fail(ErrorKind::InvalidArgument, "slices and max_escalations must be >= 0");
  }
};

/// Paths in the config are relative to the config file.
inline PipelineConfig config_from_json(const Json& j, const fs::path& base = {}) {
  using io::detail::integer;
  using io::detail::member;
  using io::detail::number;
  PipelineConfig c;
  if (!j.is_object()) io::detail::schema("config", "expected an object");
  auto path = [&](const char* key) {
    const Json& v = member(j, key, "config");
    if (!v.is_string()) io::detail::schema(std::string("config.") + key, "expected a string");
    fs::path p = v.get<std::string>();
    return p.is_absolute() || base.empty() ? p : base / p;
  };
  c.input = path("input");
  c.output = path("output");
  c.epsilon = number(member(j, "epsilon", "config"), "config.epsilon");
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    if (g.contains("M")) c.M = integer(g["M"], "config.grid.M");
    if (g.contains("S")) c.S = integer(g["S"], "config.grid.S");
    if (g.contains("T_minus")) c.T_minus = number(g["T_minus"], "config.grid.T_minus");
    if (g.contains("T_plus")) c.T_plus = number(g["T_plus"], "config.grid.T_plus");
    if (g.contains("T_plus_prime")) c.T_plus_prime = number(g["T_plus_prime"], "config.grid.T_plus_prime");
  }
  if (j.contains("N")) c.N = integer(j["N"], "config.N");
  if (j.contains("W")) c.W = integer(j["W"], "config.W");
  if (j.contains("c1")) c.c1 = number(j["c1"], "config.c1");
  if (j.contains("slices")) c.slices = integer(j["slices"], "config.slices");
  if (j.contains("per_cover")) c.per_cover = integer(j["per_cover"], "config.per_cover");
  if (j.contains("max_escalations")) c.max_escalations = integer(j["max_escalations"], "config.max_escalations");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) io::detail::schema("config.seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("plots")) {
    const Json& p = j["plots"];
    auto flag = [&](const char* key, bool& out) {
      if (!p.contains(key)) return;
      if (!p[key].is_boolean()) io::detail::schema(std::string("config.plots.") + key, "expected a boolean");
      out = p[key].get<bool>();
    };
    flag("front", c.plot_front);
    flag("projection", c.plot_projection);
    flag("schedule", c.plot_schedule);
    flag("chords", c.plot_chords);
  }
  try {
    c.validate();
  } catch (const Error& e) {
    io::detail::schema("config", e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// measurements shared by run and verify

struct EndInvariants {
  double t = 0.0;
  int rotation = 0;
  int self_linking = 0;
  int stab_positive = 0;
  int stab_negative = 0;
  std::size_t chords = 0;
};

struct Measurements {
  double sup_abs_z = 0.0;
  double sup_z_plus_dz = 0.0;
  double max_abs_action = 0.0;
  std::size_t worst_action_slice = 0;
  double hausdorff = 0.0;
  double sup_weighted_pt = 0.0;
  double sup_raw_pt = 0.0;
  double min_area_increment = INFINITY;  // along the isotopy slices
  std::vector<std::size_t> chord_census;
  EndInvariants start, end;
  Certificate certificate;
};

/// Bare section row at time t, linear in s between grid rows.
inline std::vector<double> section_row_at(const SectionFamily& f, double t) {
  const Grid& g = f.grid;
  double x = std::clamp((t - g.t_minus) / g.ds(), 0.0, static_cast<double>(g.S - 1));
  int k = std::min(static_cast<int>(std::floor(x)), g.S - 2);
  double w = x - k;
  std::vector<double> row(g.M);
  for (int j = 0; j < g.M; ++j) row[j] = (1.0 - w) * f.at(k, j) + w * f.at(k + 1, j);
  return row;
}

inline EndInvariants end_invariants(const ImmersedSlice& s, double t, std::size_t chords) {
  EndInvariants e;
  e.t = t;
  e.rotation = rotation_number(s);
  e.self_linking = self_linking_reeb(s);
  // each stabilisation drops the self-linking number by one; their difference is the rotation
  e.stab_positive = (-e.self_linking + e.rotation) / 2;
  e.stab_negative = (-e.self_linking - e.rotation) / 2;
  e.chords = chords;
  return e;
}

inline Measurements measure(const std::shared_ptr<const LegendrianIsotopy>& iso, const SectionFamily& bare) {
  Measurements m;
  if (iso->size() < 2) fail(ErrorKind::InvalidArgument, "isotopy needs at least two slices");
  // the certificate is independent of the per-slice pass
  auto cert_job = std::async(std::launch::async, [iso] {
    TraceCobordism cob = trace_cobordism(iso);
    certify_embedded(cob);
    return cob;
  });
  for (std::size_t k = 0; k < iso->size(); ++k) {
    ImmersedSlice s = iso->realize(k);
    double a = std::abs(action(s));
    if (a > m.max_abs_action) m.max_abs_action = a, m.worst_action_slice = k;
    for (double z : s.z) m.sup_abs_z = std::max(m.sup_abs_z, std::abs(z));
    m.hausdorff = std::max(m.hausdorff, hausdorff_to_section(s, section_row_at(bare, iso->slices[k].t)));
    if (k + 1 < iso->size())
      for (std::size_t i = 0; i < iso->slices[k].areas.size(); ++i)
        m.min_area_increment = std::min(m.min_area_increment, iso->slices[k + 1].areas[i] - iso->slices[k].areas[i]);
  }
  TraceCobordism cob = cert_job.get();
  m.sup_z_plus_dz = cob.sup_z_plus_dz;
  m.sup_weighted_pt = cob.sup_weighted_pt;
  m.sup_raw_pt = cob.sup_raw_pt;
  m.certificate = cob.certificate;
  for (const auto& c : cob.chords) m.chord_census.push_back(c.size());
  const std::size_t last = iso->size() - 1;
  m.start = end_invariants(iso->realize(0), iso->slices[0].t, cob.chords[0].size());
  m.end = end_invariants(iso->realize(last), iso->slices[last].t, cob.chords[last].size());
  return m;
}

// ---------------------------------------------------------------------------
// run

struct Escalation {
  int N = 0, W = 0;
  double c1 = 0.0;
  std::string reason;
};

struct RunResult {
  Json report;
  int exit_code = 0;  // 0 pass, 1 certificate or bound failure, 3 infeasible
};

namespace detail {

inline Json bound_json(double value, double limit, bool upper = true) {
  bool pass = upper ? value <= limit : value >= limit;
  return Json{{"value", value}, {"limit", limit}, {"pass", pass}};
}

inline Json certificate_json(const Certificate& c) {
  Json v = Json::array();
  for (const auto& x : c.violations)
    v.push_back(Json{{"kind", x.kind}, {"slice", x.slice}, {"t", x.t}, {"theta", x.theta}, {"p", x.p}, {"amount", x.amount}});
  return Json{{"embedded", c.embedded},
              {"families", c.families},
              {"tracking_gaps", c.tracking_gaps},
              {"crossings_checked", c.crossings_checked},
              {"min_chord_step", std::isfinite(c.min_chord_step) ? Json(c.min_chord_step) : Json(nullptr)},
              {"min_pt_separation", std::isfinite(c.min_pt_separation) ? Json(c.min_pt_separation) : Json(nullptr)},
              {"violations", v}};
}

inline Json end_json(const EndInvariants& e) {
  return Json{{"t", e.t},
              {"rotation", e.rotation},
              {"self_linking", e.self_linking},
              {"stabilisations_positive", e.stab_positive},
              {"stabilisations_negative", e.stab_negative},
              {"chords", e.chords}};
}

inline double min_increment_or_zero(const AreaSchedule& a) {
  double m = a.min_increment();
  return std::isfinite(m) ? m : 0.0;
}

/// Loops on the bare family at the anchors used by insert_loop_pairs, with the given area rows.
inline DecoratedCurveFamily decorate(const SectionFamily& bare, int N, int W, double c0, double c1,
                                     const AreaSchedule& areas) {
  DecoratedCurveFamily d = insert_loop_pairs(bare, N, W, N > 0 ? c0 : kAreaFloor, N > 0 ? c1 : kAreaFloor);
  for (int i = 0; i < static_cast<int>(d.loops.size()); ++i)
    for (int k = 0; k < bare.grid.S; ++k) d.loops[i].area[k] = areas.at(i, k);
  return d;
}

inline void require_zero_ends(const SectionFamily& f) {
  for (int k : {0, f.grid.S - 1})
    for (double v : f.row(k))
      if (std::abs(v) > kBoundaryDefectTol)
        fail(ErrorKind::BoundaryNotCylindrical, "boundary slice " + std::to_string(k) + " is not the zero-section");
}

}  // namespace detail

/// Bare section family of the input, flattening p_t first for pt/ptheta inputs.
inline SectionFamily prepare_section(const PipelineConfig& cfg, Json& input_info) {
  const io::SectionInput in = io::section_input_from_json(io::load(cfg.input));
  const Grid g = std::visit([](const auto& x) { return x.grid; }, in);
  auto expect = [](const char* what, auto want, auto got) {
    if (want && *want != got)
      fail(ErrorKind::InvalidArgument, std::string("input grid ") + what + " does not match the config");
  };
  expect("M", cfg.M, g.M);
  expect("S", cfg.S, g.S);
  expect("T_minus", cfg.T_minus, g.t_minus);
  expect("T_plus", cfg.T_plus, g.t_plus);
  input_info = Json{{"file", cfg.input.filename().string()}, {"grid", io::grid_to_json(g)}};
  if (const auto* fam = std::get_if<SectionFamily>(&in)) {
    input_info["kind"] = "section";
    detail::require_zero_ends(*fam);
    return *fam;
  }
  const auto& surf = std::get<BisectionSurface>(in);
  if (!cfg.T_plus_prime) fail(ErrorKind::InvalidArgument, "pt/ptheta input needs grid.T_plus_prime in the config");
  FlattenResult fr = flatten_pt(surf, *cfg.T_plus_prime);
  SectionFamily out(fr.surface.grid);
  for (int k = 0; k < out.grid.S; ++k) {
    const double w = std::exp(-out.grid.s(k));
    for (int j = 0; j < out.grid.M; ++j) out.at(k, j) = w * fr.surface.p_theta(k, j);
  }
  input_info["kind"] = "bisection";
  input_info["flatten"] = Json{{"T_plus_prime", *cfg.T_plus_prime},
                               {"extension_rows", fr.extension_rows},
                               {"correction_amplitude", fr.correction_amplitude},
                               {"grid", io::grid_to_json(out.grid)}};
  detail::require_zero_ends(out);
  return out;
}

inline RunResult run(const PipelineConfig& cfg) {
  cfg.validate();
  RunResult result;
  Json& rep = result.report;
  rep["seed"] = cfg.seed;
  Json input_info;
  const SectionFamily bare = prepare_section(cfg, input_info);
  rep["input"] = input_info;

  // parameters
  const ZField zf0 = compute_zfield(bare);
  require_cylindrical_ends(zf0);
  ParameterChoice pc = auto_parameters(zf0, cfg.epsilon);
  const bool overridden = cfg.N || cfg.W || cfg.c1;
  if (!overridden && pc.steps == 0.0) pc.N = 0;
  if (cfg.N) pc.N = *cfg.N;
  if (cfg.c1) pc.c1 = *cfg.c1;
  if (cfg.W) pc.W = *cfg.W;
  if (cfg.c1 || cfg.W) pc.c0 = pc.c1 / 4.0;
  pc.delta = pc.W * pc.c1;

  // loops and schedule, escalating N
  std::vector<Escalation> trace;
  std::optional<DecoratedCurveFamily> family;
  AreaSchedule schedule;
  SchedulerReport sched;
  for (int attempt = 0;; ++attempt) {
    std::string reason;
    if (pc.N == 0) {
      family = insert_loop_pairs(bare, 0, 1, kAreaFloor, kAreaFloor);
      schedule.loops = 0;
      schedule.S = bare.grid.S;
      sched.feasible = true;
      break;
    }
    try {
      DecoratedCurveFamily fam = insert_loop_pairs(bare, pc.N, pc.W, pc.c0, pc.c1);
      const ZField zf = compute_zfield(fam, layout_for(fam, cfg.per_cover));
      ScheduleResult sr = schedule_areas(zf, pc.N, pc.W, pc.c1, cfg.epsilon, pc.c0);
      if (sr.report.feasible) {
        family = detail::decorate(bare, pc.N, pc.W, pc.c0, pc.c1, sr.schedule);
        schedule = std::move(sr.schedule);
        sched = std::move(sr.report);
        break;
      }
      reason = sr.report.reason;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::AnchorCollision) throw;
      reason = e.what();
    }
    trace.push_back({pc.N, pc.W, pc.c1, reason});
    if (attempt >= cfg.max_escalations) break;
    pc.N *= 2;
    pc.W = static_cast<int>(std::ceil(pc.delta / c1_limit(pc.N)));
    pc.c1 = pc.delta / pc.W;
    pc.c0 = pc.c1 / 4.0;
  }

  Json esc = Json::array();
  for (const auto& e : trace) esc.push_back(Json{{"N", e.N}, {"W", e.W}, {"c1", e.c1}, {"reason", e.reason}});
  rep["parameters"] = Json{{"source", overridden ? "config" : "auto"},
                           {"N", pc.N},
                           {"W", pc.W},
                           {"c0", pc.c0},
                           {"c1", pc.c1},
                           {"delta", pc.delta},
                           {"epsilon", cfg.epsilon},
                           {"per_cover", cfg.per_cover},
                           {"audit",
                            {{"max_tv", pc.max_tv},
                             {"max_abs_c", pc.max_abs_c},
                             {"max_abs_z0", pc.max_abs_z0},
                             {"max_dtau_z0", pc.max_dtau_z0},
                             {"steps", pc.steps}}},
                           {"escalations", esc}};
  if (!family) {
    rep["status"] = "INFEASIBLE";
    rep["error"] = Json{{"kind", "Infeasible"},
                        {"message", "no feasible schedule after " + std::to_string(trace.size()) + " attempts"}};
    io::write_text(cfg.output / "report.json", io::dump(rep));
    result.exit_code = 3;
    return result;
  }

  // isotopy and certificate
  const int n_slices = cfg.slices > 0 ? cfg.slices : bare.grid.S;
  auto iso = std::make_shared<LegendrianIsotopy>(
      interpolate_smooth(*family, schedule, n_slices, sched.feasible && pc.N > 0 ? sched.z_base : 0.0, -1,
                         cfg.per_cover));
  const Measurements m = measure(iso, bare);

  rep["scheduler"] = Json{{"feasible", sched.feasible},
                          {"sup_abs_z", sched.sup_abs_z},
                          {"sup_z_plus_dz", sched.sup_z_plus_dz},
                          {"max_defect", sched.max_defect},
                          {"z_base", iso->z_base},
                          {"min_increment", detail::min_increment_or_zero(schedule)}};
  rep["certificate"] = detail::certificate_json(m.certificate);
  rep["invariants"] = Json{{"start", detail::end_json(m.start)},
                           {"end", detail::end_json(m.end)},
                           {"expected_stabilisations", pc.N * pc.W},
                           {"chord_census", m.chord_census}};
  const double eps = cfg.epsilon;
  rep["bounds"] = Json{{"sup_abs_z", detail::bound_json(m.sup_abs_z, eps)},
                       {"sup_z_plus_dz", detail::bound_json(m.sup_z_plus_dz, 3.0 * eps * kMollifierSlack)},
                       {"max_abs_action", detail::bound_json(m.max_abs_action, kActionTol)},
                       {"hausdorff", detail::bound_json(m.hausdorff, loop_diameter(pc.N > 0 ? pc.c1 : 0.0))},
                       {"sup_weighted_pt", detail::bound_json(m.sup_weighted_pt, 3.0 * eps * kMollifierSlack)},
                       {"min_schedule_increment", detail::bound_json(detail::min_increment_or_zero(schedule), 0.0, false)},
                       {"min_isotopy_increment",
                        detail::bound_json(std::isfinite(m.min_area_increment) ? m.min_area_increment : 0.0, 0.0, false)}};
  rep["trace"] = Json{{"sup_raw_pt", m.sup_raw_pt}, {"sup_weighted_pt", m.sup_weighted_pt}};
  bool ok = m.certificate.embedded;
  for (const auto& [k, b] : rep["bounds"].items()) ok = ok && b["pass"].get<bool>();
  const int NW = pc.N * pc.W;
  for (const auto* e : {&m.start, &m.end})
    ok = ok && e->rotation == 0 && e->self_linking == -2 * NW && e->stab_positive == NW && e->stab_negative == NW;
  rep["status"] = ok ? "PASS" : "FAIL";

  // artifacts
  std::vector<std::string> files{"report.json", "section.json", "schedule.json", "isotopy.json", "slices/start.json",
                                 "slices/end.json"};
  io::write_text(cfg.output / "section.json", io::dump(io::section_to_json(bare)));
  SchedulerReport sr = sched;
  sr.N = pc.N, sr.W = pc.W, sr.c0 = pc.c0, sr.c1 = pc.c1;
  io::write_text(cfg.output / "schedule.json", io::dump(io::schedule_to_json(schedule, sr)));
  io::write_text(cfg.output / "isotopy.json", io::dump(io::isotopy_to_json(*iso)));
  const ImmersedSlice first = iso->realize(0), last = iso->realize(iso->size() - 1);
  io::write_text(cfg.output / "slices/start.json", io::dump(io::slice_to_json(first)));
  io::write_text(cfg.output / "slices/end.json", io::dump(io::slice_to_json(last)));
  if (cfg.plot_projection) {
    io::write_text(cfg.output / "projection.svg", svg::projection(last, "Lagrangian projection, t = " + svg::label(iso->slices.back().t)));
    files.push_back("projection.svg");
  }
  if (cfg.plot_front) {
    io::write_text(cfg.output / "front.svg", svg::front(last, "Front, t = " + svg::label(iso->slices.back().t)));
    files.push_back("front.svg");
  }
  if (cfg.plot_schedule) {
    io::write_text(cfg.output / "schedule.svg", svg::schedule(schedule, pc.c0, pc.c1));
    files.push_back("schedule.svg");
  }
  if (cfg.plot_chords) {
    TraceCobordism cob = trace_cobordism(iso);
    io::write_text(cfg.output / "chords.svg", svg::chords(track_chords(cob.chords), cob.t));
    files.push_back("chords.svg");
  }
  std::sort(files.begin(), files.end());
  rep["artifacts"] = files;
  io::write_text(cfg.output / "report.json", io::dump(rep));
  result.exit_code = ok ? 0 : 1;
  return result;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyResult {
  bool pass = false;
  std::vector<Check> checks;

  Json to_json() const {
    Json c = Json::array();
    for (const auto& x : checks) c.push_back(Json{{"name", x.name}, {"pass", x.pass}, {"detail", x.detail}});
    return Json{{"pass", pass}, {"checks", c}};
  }
};

namespace detail {

inline Json load_artifact(const fs::path& dir, const std::string& name) {
  const fs::path p = dir / name;
  if (!fs::exists(p)) fail(ErrorKind::MissingArtifact, p.string());
  return io::load(p, ErrorKind::MissingArtifact);
}

inline std::string num(double v) { return io::format_number(v); }

inline bool agree(const Json& claimed, double value) {
  if (!claimed.is_number()) return false;
  const double c = claimed.get<double>();
  return std::abs(c - value) <= kAgreementTol * std::max(1.0, std::abs(value));
}

/// First (loop, slice) where the areas shrink, if any.
inline std::optional<std::pair<int, int>> first_decrease(const AreaSchedule& a) {
  for (int i = 0; i < a.loops; ++i)
    for (int k = 0; k + 1 < a.S; ++k)
      if (a.at(i, k + 1) < a.at(i, k)) return std::make_pair(i, k + 1);
  return std::nullopt;
}

}  // namespace detail

/// Independent re-audit of a run directory from its raw artifacts.
inline VerifyResult verify(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorKind::MissingArtifact, dir.string() + " is not a directory");
  const Json report = detail::load_artifact(dir, "report.json");
  const Json section_j = detail::load_artifact(dir, "section.json");
  const Json schedule_j = detail::load_artifact(dir, "schedule.json");
  const Json isotopy_j = detail::load_artifact(dir, "isotopy.json");

  VerifyResult out;
  auto check = [&](std::string name, bool pass, std::string det) {
    out.checks.push_back({std::move(name), pass, std::move(det)});
  };

  const io::SectionInput sin = io::section_input_from_json(section_j);
  if (!std::holds_alternative<SectionFamily>(sin)) fail(ErrorKind::ParseError, "section.json: expected a \"p\" family");
  const SectionFamily bare = std::get<SectionFamily>(sin);
  io::ScheduleArtifact sa = io::schedule_from_json(schedule_j);
  if (sa.schedule.loops == 0) sa.schedule.S = bare.grid.S;
  auto iso = std::make_shared<LegendrianIsotopy>(io::isotopy_from_json(isotopy_j));
  const double eps = io::detail::number(io::detail::member(report.value("parameters", Json::object()), "epsilon", "report.parameters"),
                                        "report.parameters.epsilon");
  const int N = sa.N, W = sa.W, NW = N * W;

  // schedule
  if (auto d = detail::first_decrease(sa.schedule))
    check("schedule-monotone", false,
          "loop " + std::to_string(d->first) + " shrinks at s index " + std::to_string(d->second) + ": " +
              detail::num(sa.schedule.at(d->first, d->second)) + " < " +
              detail::num(sa.schedule.at(d->first, d->second - 1)));
  else
    check("schedule-monotone", true, "min increment " + detail::num(detail::min_increment_or_zero(sa.schedule)));
  {
    bool in_range = true;
    std::string det = "areas in [c0, c1]";
    for (int i = 0; i < sa.schedule.loops && in_range; ++i)
      for (int k = 0; k < sa.schedule.S && in_range; ++k) {
        double a = sa.schedule.at(i, k);
        if (a < sa.c0 || a > sa.c1) {
          in_range = false;
          det = "loop " + std::to_string(i) + " s index " + std::to_string(k) + ": area " + detail::num(a);
        }
      }
    check("schedule-range", in_range, det);
  }
  if (static_cast<int>(iso->layout.anchors().size()) != 2 * N || sa.schedule.loops != 2 * N ||
      sa.schedule.S != bare.grid.S)
    fail(ErrorKind::ParseError, "schedule, isotopy and section artifacts disagree in shape");

  // the isotopy must be the smoothing of the schedule on the section
  {
    bool same = true;
    std::string det = "isotopy matches the smoothed schedule";
    try {
      DecoratedCurveFamily fam = detail::decorate(bare, N, std::max(1, W), sa.c0, sa.c1, sa.schedule);
      LegendrianIsotopy ref = interpolate_smooth(fam, sa.schedule, static_cast<int>(iso->size()), iso->z_base, -1,
                                                 iso->layout.coil().per_cover);
      for (std::size_t k = 0; k < iso->size() && same; ++k) {
        const auto& a = iso->slices[k];
        const auto& b = ref.slices[k];
        double d = std::abs(a.t - b.t);
        for (std::size_t j = 0; j < a.row.size(); ++j) d = std::max(d, std::abs(a.row[j] - b.row[j]));
        for (std::size_t i = 0; i < a.areas.size(); ++i) d = std::max(d, std::abs(a.areas[i] - b.areas[i]));
        if (d > 1e-12) {
          same = false;
          det = "slice " + std::to_string(k) + " deviates by " + detail::num(d);
        }
      }
    } catch (const Error& e) {
      same = false;
      det = e.what();
    }
    check("isotopy-consistency", same, det);
  }

  // geometry recomputed from the isotopy
  Measurements m;
  try {
    m = measure(iso, bare);
  } catch (const Error& e) {
    check("trace", false, e.what());
    out.pass = false;
    return out;
  }
  check("exactness", m.max_abs_action <= kActionTol,
        "max |action| " + detail::num(m.max_abs_action) + " at slice " + std::to_string(m.worst_action_slice));
  check("sup-abs-z", m.sup_abs_z <= eps, detail::num(m.sup_abs_z) + " <= " + detail::num(eps));
  check("sup-z-plus-dz", m.sup_z_plus_dz <= 3.0 * eps * kMollifierSlack,
        detail::num(m.sup_z_plus_dz) + " <= " + detail::num(3.0 * eps * kMollifierSlack));
  check("isotopy-monotone", !(m.min_area_increment < 0.0),
        "min increment " + detail::num(std::isfinite(m.min_area_increment) ? m.min_area_increment : 0.0));
  const double hbound = loop_diameter(N > 0 ? sa.c1 : 0.0);
  check("hausdorff", m.hausdorff <= hbound, detail::num(m.hausdorff) + " <= " + detail::num(hbound));
  check("weighted-pt", m.sup_weighted_pt <= 3.0 * eps * kMollifierSlack,
        detail::num(m.sup_weighted_pt) + " <= " + detail::num(3.0 * eps * kMollifierSlack));
  {
    std::string det = std::to_string(m.certificate.violations.size()) + " violations, " +
                      std::to_string(m.certificate.crossings_checked) + " crossings checked";
    if (!m.certificate.violations.empty()) {
      const auto& v = m.certificate.violations.front();
      det += "; first " + v.kind + " at t=" + detail::num(v.t) + " theta=" + detail::num(v.theta) +
             " p=" + detail::num(v.p);
    }
    check("embedded", m.certificate.embedded, det);
  }
  for (const auto& [name, e] : {std::pair{"start", &m.start}, std::pair{"end", &m.end}}) {
    bool ok = e->rotation == 0 && e->self_linking == -2 * NW && e->stab_positive == NW && e->stab_negative == NW;
    check(std::string("invariants-") + name, ok,
          "rotation " + std::to_string(e->rotation) + ", self-linking " + std::to_string(e->self_linking) +
              " (expected " + std::to_string(-2 * NW) + "), stabilisations +" + std::to_string(e->stab_positive) +
              " -" + std::to_string(e->stab_negative));
  }

  // the report must state what was recomputed
  {
    std::vector<std::string> bad;
    const Json b = report.value("bounds", Json::object());
    auto claim = [&](const char* key, double v) {
      if (!b.contains(key) || !detail::agree(b[key].value("value", Json()), v)) bad.push_back(key);
    };
    claim("sup_abs_z", m.sup_abs_z);
    claim("sup_z_plus_dz", m.sup_z_plus_dz);
    claim("max_abs_action", m.max_abs_action);
    claim("hausdorff", m.hausdorff);
    claim("sup_weighted_pt", m.sup_weighted_pt);
    const Json tr = report.value("trace", Json::object());
    if (!detail::agree(tr.value("sup_raw_pt", Json()), m.sup_raw_pt)) bad.push_back("trace.sup_raw_pt");
    const Json inv = report.value("invariants", Json::object());
    if (inv.value("chord_census", Json()) != Json(m.chord_census)) bad.push_back("chord_census");
    if (inv.value("start", Json()) != detail::end_json(m.start)) bad.push_back("invariants.start");
    if (inv.value("end", Json()) != detail::end_json(m.end)) bad.push_back("invariants.end");
    const Json cert = report.value("certificate", Json::object());
    if (cert.value("embedded", !m.certificate.embedded) != m.certificate.embedded) bad.push_back("certificate.embedded");
    std::string det = "report agrees with recomputation";
    if (!bad.empty()) {
      det = "report disagrees on";
      for (const auto& k : bad) det += " " + k;
    }
    check("report-agreement", bad.empty(), det);
  }

  out.pass = std::all_of(out.checks.begin(), out.checks.end(), [](const Check& c) { return c.pass; });
  return out;
}

// ---------------------------------------------------------------------------
// plot

inline bool is_plot_kind(const std::string& kind) {
  return kind == "front" || kind == "projection" || kind == "schedule" || kind == "chords";
}

/// SVG of a run directory or a single artifact file. slice defaults to the last one.
inline std::string plot(const fs::path& artifact, const std::string& kind, std::optional<std::size_t> slice = {}) {
  if (!is_plot_kind(kind)) fail(ErrorKind::UnknownKind, "unknown plot kind \"" + kind + "\"");
  if (!fs::exists(artifact)) fail(ErrorKind::MissingArtifact, artifact.string());
  const bool dir = fs::is_directory(artifact);
  auto load_iso = [&] {
    Json j = dir ? detail::load_artifact(artifact, "isotopy.json") : io::load(artifact, ErrorKind::MissingArtifact);
    if (!j.contains("layout")) fail(ErrorKind::InvalidArgument, "artifact is not an isotopy");
    return std::make_shared<LegendrianIsotopy>(io::isotopy_from_json(j));
  };
  if (kind == "schedule") {
    Json j = dir ? detail::load_artifact(artifact, "schedule.json") : io::load(artifact, ErrorKind::MissingArtifact);
    if (!j.contains("areas")) fail(ErrorKind::InvalidArgument, "artifact is not a schedule");
    const io::ScheduleArtifact sa = io::schedule_from_json(j);
    return svg::schedule(sa.schedule, sa.c0, sa.c1);
  }
  if (kind == "chords") {
    auto iso = load_iso();
    TraceCobordism cob = trace_cobordism(iso);
    return svg::chords(track_chords(cob.chords), cob.t);
  }
  ImmersedSlice s;
  std::string where;
  Json j;
  if (!dir) j = io::load(artifact, ErrorKind::MissingArtifact);
  if (!dir && j.contains("tau")) {
    s = io::slice_from_json(j);
    if (s.z.empty()) z_lift(s, 0.0);
    where = artifact.filename().string();
  } else {
    auto iso = dir ? load_iso() : std::make_shared<LegendrianIsotopy>(io::isotopy_from_json(j));
    const std::size_t k = slice.value_or(iso->size() - 1);
    if (k >= iso->size()) fail(ErrorKind::InvalidArgument, "slice index out of range");
    s = iso->realize(k);
    where = "t = " + svg::label(iso->slices[k].t);
  }
  return kind == "front" ? svg::front(s, "Front, " + where) : svg::projection(s, "Lagrangian projection, " + where);
}

}  // namespace lagconc
