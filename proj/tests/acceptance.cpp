// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lagconc/cobordism.hpp"
#include "lagconc/io.hpp"
#include "lagconc/knot_groups.hpp"
#include "lagconc/pipeline.hpp"
#include "symplin_support.hpp"

using namespace lagconc;
using namespace lagconc::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kSamples = LAGCONC_SAMPLES_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("lagconc_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunResult drift_run(const fs::path& out) {
  Json cfg = io::load(kSamples / "drift.config.json");
  cfg["input"] = (kSamples / "drift.json").string();
  cfg["output"] = out.string();
  return run(config_from_json(cfg));
}

const Check* find(const VerifyResult& v, const std::string& name) {
  for (const auto& c : v.checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool passed(const VerifyResult& v, const std::string& name, std::string& detail) {
  const Check* c = find(v, name);
  detail += name + (c ? (c->pass ? " ok" : " FAILED (" + c->detail + ")") : " missing") + "; ";
  return c && c->pass;
}

double bump(double t, double a, double b) {
  if (t <= a || t >= b) return 0.0;
  double x = (t - a) / (b - a);
  return std::exp(-1.0 / (x * (1.0 - x)) + 4.0);
}

double bump_dt(double t, double a, double b) {
  if (t <= a || t >= b) return 0.0;
  double x = (t - a) / (b - a);
  return bump(t, a, b) * (1.0 - 2.0 * x) / (x * x * (1.0 - x) * (1.0 - x)) / (b - a);
}

LaurentPolynomial torus_oracle(int n) {
  std::vector<long long> c(n);
  for (int k = 0; k < n; ++k) c[k] = k % 2 == 0 ? 1 : -1;
  return LaurentPolynomial{0, c}.normalized();
}

struct Shared {
  fs::path a, b;
  RunResult ra, rb;
  VerifyResult va;
};

Outcome c1_bounds(const Shared& s) {
  Outcome o;
  o.pass = s.ra.exit_code == 0 && s.ra.report.value("status", "") == "PASS";
  o.detail = "status " + s.ra.report.value("status", "?") + "; ";
  for (const char* n : {"sup-abs-z", "sup-z-plus-dz", "exactness"}) o.pass = passed(s.va, n, o.detail) && o.pass;
  return o;
}

Outcome c2_monotone(const Shared& s) {
  Outcome o;
  auto sa = io::schedule_from_json(io::load(s.a / "schedule.json"));
  bool exact = true;
  for (int i = 0; i < sa.schedule.loops; ++i)
    for (int k = 0; k + 1 < sa.schedule.S; ++k) exact = exact && sa.schedule.at(i, k + 1) >= sa.schedule.at(i, k);
  o.detail = std::to_string(sa.schedule.loops) + " loops x " + std::to_string(sa.schedule.S) + " slices; ";
  o.pass = exact && passed(s.va, "schedule-monotone", o.detail) && passed(s.va, "isotopy-monotone", o.detail);

  fs::path bad = scratch("decrement");
  fs::copy(s.a, bad, fs::copy_options::recursive);
  Json j = io::load(bad / "schedule.json");
  const int i = sa.schedule.loops / 2, k = sa.schedule.S / 2;
  j["areas"][i][k] = std::nextafter(j["areas"][i][k - 1].get<double>(), 0.0);
  io::write_text(bad / "schedule.json", io::dump(j));
  VerifyResult vb = verify(bad);
  const Check* c = find(vb, "schedule-monotone");
  bool caught = c && !c->pass;
  o.detail += caught ? "injected decrement caught (" + c->detail + ")" : "injected decrement NOT caught";
  o.pass = o.pass && caught;
  return o;
}

Outcome c3_embedded(const Shared& s) {
  Outcome o;
  const Json& cert = s.ra.report["certificate"];
  o.pass = cert["embedded"].get<bool>() && cert["violations"].empty() && cert["tracking_gaps"] == 0;
  o.detail = "crossings checked " + cert["crossings_checked"].dump() + ", violations " +
             std::to_string(cert["violations"].size()) + "; ";
  o.pass = passed(s.va, "embedded", o.detail) && o.pass;

  // a pair of opposite loops shrinking fast enough for l + dl/dt to change sign
  const int M = 64;
  SliceLayout layout(M, {{0.0, +1}, {std::numbers::pi, -1}}, CoilTemplate::make(0.01, 1, 32));
  LegendrianIsotopy iso(layout);
  for (int k = 0; k < 61; ++k) {
    double t = 3.0 * k / 60, x = std::clamp(t - 1.0, 0.0, 1.0);
    double a = 4e-3 - 3e-3 * x * x * (3 - 2 * x);
    iso.slices.push_back({t, std::vector<double>(M, 0.0), {a, a}});
  }
  auto cob = trace_cobordism(iso);
  auto ce = certify_embedded(cob);
  const Violation* dp = nullptr;
  for (const auto& v : ce.violations)
    if (v.kind == "double-point") dp = &v;
  bool located = !ce.embedded && dp && dp->t > 1.0 && dp->t < 2.05;
  char buf[160];
  if (dp) std::snprintf(buf, sizeof buf, "counterexample double point at t=%.3f theta=%.3f p=%.2e", dp->t, dp->theta, dp->p);
  o.detail += dp ? buf : "counterexample has no double point";
  o.pass = o.pass && located;
  return o;
}

Outcome c4_stabilisations(const Shared& s) {
  Outcome o;
  auto sa = io::schedule_from_json(io::load(s.a / "schedule.json"));
  auto iso = io::isotopy_from_json(io::load(s.a / "isotopy.json"));
  const int NW = sa.N * sa.W;
  int positive_covers = 0, negative_covers = 0;
  for (const auto& a : iso.layout.anchors()) (a.sign > 0 ? positive_covers : negative_covers) += iso.layout.coil().covers;
  o.pass = NW > 0 && positive_covers == NW && negative_covers == NW;
  o.detail = "NW=" + std::to_string(NW) + ", loop covers +" + std::to_string(positive_covers) + "/-" +
             std::to_string(negative_covers) + "; ";
  for (const char* end : {"start", "end"}) {
    auto sl = io::slice_from_json(io::load(s.a / "slices" / (std::string(end) + ".json")));
    int rot = rotation_number(sl), self = self_linking_reeb(sl);
    int kp = (-self + rot) / 2, km = (-self - rot) / 2;
    o.detail += std::string(end) + " sl=" + std::to_string(self) + " rot=" + std::to_string(rot) + " k+=" +
                std::to_string(kp) + " k-=" + std::to_string(km) + "; ";
    o.pass = o.pass && rot == 0 && self == -2 * NW && kp == NW && km == NW;
  }
  return o;
}

Outcome c5_closeness(const Shared& s) {
  Outcome o;
  o.pass = passed(s.va, "hausdorff", o.detail);
  o.pass = passed(s.va, "weighted-pt", o.detail) && o.pass;
  const Json& b = s.ra.report["bounds"];
  for (const char* n : {"hausdorff", "sup_weighted_pt"})
    if (b.contains(n)) o.detail += std::string(n) + " " + b[n]["value"].dump() + " <= " + b[n]["limit"].dump() + "; ";
  return o;
}

Outcome c6_knots() {
  Outcome o;
  std::vector<KnotDiagram> family;
  bool oracle = true;
  for (int n = 3; n <= 11; n += 2) {
    auto d = parse_pd(io::read_text(kSamples / "knots" / (n == 3 ? "trefoil.pd" : "torus_2_" + std::to_string(n) + ".pd")));
    oracle = oracle && alexander(d) == torus_oracle(n);
    family.push_back(std::move(d));
  }
  auto cls = distinguish(family);
  bool five = cls == std::vector<int>{0, 1, 2, 3, 4};
  o.detail = std::string("torus polynomials ") + (oracle ? "match closed form" : "MISMATCH") + ", classes " +
             std::to_string(cls.empty() ? 0 : *std::max_element(cls.begin(), cls.end()) + 1) + "; ";

  bool cyl = true, tori = true;
  auto unknot = wirtinger(unknot_diagram());
  for (const auto& d : {family[0], family[2], figure_eight_diagram()}) {
    auto ka = wirtinger(d);
    cyl = cyl && alexander(connected_sum_group(unknot, ka)) == alexander(ka);
    auto glued = svk_gluing(lambda_trivialized(unknot), ka);
    tori = tori && alexander(glued) == alexander(ka) && abelianization(glued) == abelianization(ka);
  }
  o.detail += std::string("unknot sum ") + (cyl ? "ok" : "FAILED") + ", lambda-killed amalgam " + (tori ? "ok" : "FAILED");
  o.pass = oracle && five && cyl && tori;
  return o;
}

Outcome c7_linear_algebra() {
  Rng r(20240601);
  int lag_fail = 0, dual_fail = 0, ext_fail = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Mat4 s = random_symplectic(r);
    Plane4 v = random_plane(r);
    auto p = lagrangian_complement(v, map(s * standard_j() * s.inverse(), v)).plane;
    if (std::abs(omega0(p.b(0), p.b(1))) > 1e-10) ++lag_fail;
  }
  for (int trial = 0; trial < 1000;) {
    Plane4 v = random_plane(r), w = random_lagrangian(r);
    if (transversality(v, w) < 1e-6) continue;
    ++trial;
    if ((pairing(v.basis, dual_basis(v, w)) - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-10) ++dual_fail;
  }
  for (int trial = 0; trial < 1000;) {
    Plane4 v0 = random_plane(r), w0 = random_lagrangian(r), w1 = random_lagrangian(r);
    Plane4 v1 = map(random_symplectic(r), v0);
    if (transversality(v0, w0) < 1e-4 || transversality(v1, w1) < 1e-4) continue;
    ++trial;
    Mat4 ext = extend_symplectomorphism(v0, w0, v1, w1, Mat2::Identity());
    Mat4 stacked;
    stacked << ext * w0.basis, w1.basis;
    if (symplectic_defect(ext) > 1e-9 || rank_of(stacked) != 2) ++ext_fail;
  }
  return {lag_fail + dual_fail + ext_fail == 0, "failures: lagrangian " + std::to_string(lag_fail) + ", duality " +
                                                    std::to_string(dual_fail) + ", extension " + std::to_string(ext_fail)};
}

Outcome c8_psi_flatten() {
  auto surf = [](double u, double v) {
    double t = 2.0 * u - 1.0, th = kTwoPi * v;
    return CotangentPoint{t + 0.1 * std::sin(th), th, std::sin(3.0 * u) * std::cos(th) + u * v,
                          u * u + std::sin(th) - 0.3 * std::cos(2.0 * t)};
  };
  auto d = pullback_defect(surf, 64);

  BisectionSurface s(Grid{128, 401, 0.0, 1.0});
  for (int k = 0; k < s.grid.S; ++k)
    for (int j = 0; j < s.grid.M; ++j) s.p_t(k, j) = bump_dt(s.grid.s(k), 0.2, 0.8) * std::sin(s.grid.theta(j));
  auto r = flatten_pt(s, 1.5);
  double max_pt = 0.0, h_end = 0.0;
  for (double v : r.surface.pt) max_pt = std::max(max_pt, std::abs(v));
  for (int j = 0; j < r.surface.grid.M; ++j) h_end = std::max(h_end, std::abs(r.h[r.surface.idx(r.surface.grid.S - 1, j)]));
  char buf[200];
  std::snprintf(buf, sizeof buf, "pullback defect %.2e (form scale %.2f), max|p_t| %.2e, max|h(T'_+)| %.2e", d.max_abs,
                d.max_form, max_pt, h_end);
  return {d.max_abs <= 1e-6 && max_pt <= 1e-9 && h_end <= 1e-9, buf};
}

Outcome c9_determinism(const Shared& s) {
  Outcome o;
  std::size_t files = 0, differ = 0;
  for (const auto& e : fs::recursive_directory_iterator(s.a)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension();
    if (ext != ".json" && ext != ".svg") continue;
    fs::path rel = fs::relative(e.path(), s.a);
    ++files;
    if (!fs::exists(s.b / rel) || io::read_text(s.a / rel) != io::read_text(s.b / rel)) {
      ++differ;
      o.detail += rel.string() + " differs; ";
    }
  }
  o.pass = files >= 6 && differ == 0 && fs::exists(s.a / "report.json");
  o.detail += std::to_string(files) + " artifacts compared, " + std::to_string(differ) + " differ";
  return o;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  Shared s;
  s.a = scratch("drift_a");
  s.b = scratch("drift_b");
  s.ra = drift_run(s.a);
  s.rb = drift_run(s.b);
  s.va = verify(s.a);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"end-to-end bounds", [&] { return c1_bounds(s); }},
      {"monotone schedule", [&] { return c2_monotone(s); }},
      {"embeddedness certificate", [&] { return c3_embedded(s); }},
      {"stabilisation bookkeeping", [&] { return c4_stabilisations(s); }},
      {"C0 closeness", [&] { return c5_closeness(s); }},
      {"knot-group distinguisher", c6_knots},
      {"symplectic linear algebra", c7_linear_algebra},
      {"coordinate change and flattening", c8_psi_flatten},
      {"determinism", [&] { return c9_determinism(s); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s | %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("acceptance: %zu/%zu passed in %.1f s\n", criteria.size() - failed, criteria.size(), secs);
  return failed == 0 ? 0 : 1;
}
