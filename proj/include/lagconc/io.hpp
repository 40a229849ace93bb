#pragma once

// JSON formats for section families, bisection surfaces, schedules, isotopies
// and realized slices. Numbers are written with 17 significant digits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lagconc/cobordism.hpp"
#include "lagconc/coil.hpp"
#include "lagconc/errors.hpp"
#include "lagconc/geom.hpp"

namespace lagconc::io {

using Json = nlohmann::json;

inline std::string format_number(double v) {
  if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "cannot serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

inline void emit(std::string& out, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + Json(it.key()).dump() + ": ";
        emit(out, it.value(), indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(out, j[i], indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad_in;
        emit(out, j[i], indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Deterministic text: keys sorted (nlohmann's default map), doubles as %.17g.
inline std::string dump(const Json& j) {
  std::string out;
  detail::emit(out, j, 0);
  out += "\n";
  return out;
}

inline std::string read_text(const std::filesystem::path& path, ErrorKind missing = ErrorKind::InvalidArgument) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(missing, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

/// Parse with line/column diagnostics.
inline Json parse(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::ParseError, source + ": line " + std::to_string(line) + ", column " + std::to_string(col) +
                                    ": malformed JSON");
  }
}

inline Json load(const std::filesystem::path& path, ErrorKind missing = ErrorKind::InvalidArgument) {
  return parse(read_text(path, missing), path.string());
}

// ---------------------------------------------------------------------------
// schema helpers

namespace detail {

[[noreturn]] inline void schema(const std::string& where, const std::string& what) {
  fail(ErrorKind::ParseError, where + ": " + what);
}

inline const Json& member(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) schema(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(where, "missing \"" + key + "\"");
  return *it;
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema(where, "expected a number");
  return j.get<double>();
}

inline int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) schema(where, "expected an integer");
  return j.get<int>();
}

inline std::vector<double> numbers(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array");
  if (n != static_cast<std::size_t>(-1) && j.size() != n)
    schema(where, "expected " + std::to_string(n) + " entries, found " + std::to_string(j.size()));
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline void matrix_into(const Json& j, int rows, int cols, std::vector<double>& out, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    schema(where, "expected " + std::to_string(rows) + " rows");
  out.clear();
  out.reserve(static_cast<std::size_t>(rows) * cols);
  for (int k = 0; k < rows; ++k) {
    auto row = numbers(j[k], static_cast<std::size_t>(cols), where + "[" + std::to_string(k) + "]");
    out.insert(out.end(), row.begin(), row.end());
  }
}

inline Json matrix_json(const std::vector<double>& v, int rows, int cols) {
  Json out = Json::array();
  for (int k = 0; k < rows; ++k)
    out.push_back(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(k) * cols,
                                      v.begin() + static_cast<std::ptrdiff_t>(k + 1) * cols));
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// section families and bisection surfaces

inline Grid grid_from_json(const Json& j) {
  Grid g;
  g.M = detail::integer(detail::member(j, "M", "grid"), "grid.M");
  g.S = detail::integer(detail::member(j, "S", "grid"), "grid.S");
  g.t_minus = detail::number(detail::member(j, "T_minus", "grid"), "grid.T_minus");
  g.t_plus = detail::number(detail::member(j, "T_plus", "grid"), "grid.T_plus");
  try {
    g.validate();
  } catch (const Error& e) {
    detail::schema("grid", e.what());
  }
  return g;
}

inline Json grid_to_json(const Grid& g) {
  return Json{{"M", g.M}, {"S", g.S}, {"T_minus", g.t_minus}, {"T_plus", g.t_plus}};
}

using SectionInput = std::variant<SectionFamily, BisectionSurface>;

inline SectionInput section_input_from_json(const Json& j) {
  Grid g = grid_from_json(detail::member(j, "grid", "input"));
  if (j.contains("p")) {
    SectionFamily f(g);
    detail::matrix_into(j["p"], g.S, g.M, f.p, "p");
    return f;
  }
  if (j.contains("pt") || j.contains("ptheta")) {
    BisectionSurface s(g);
    detail::matrix_into(detail::member(j, "pt", "input"), g.S, g.M, s.pt, "pt");
    detail::matrix_into(detail::member(j, "ptheta", "input"), g.S, g.M, s.ptheta, "ptheta");
    return s;
  }
  detail::schema("input", "expected \"p\" or \"pt\"/\"ptheta\"");
}

inline Json section_to_json(const SectionFamily& f) {
  return Json{{"grid", grid_to_json(f.grid)}, {"p", detail::matrix_json(f.p, f.grid.S, f.grid.M)}};
}

inline Json surface_to_json(const BisectionSurface& s) {
  return Json{{"grid", grid_to_json(s.grid)},
              {"pt", detail::matrix_json(s.pt, s.grid.S, s.grid.M)},
              {"ptheta", detail::matrix_json(s.ptheta, s.grid.S, s.grid.M)}};
}

// ---------------------------------------------------------------------------
// schedules

inline Json schedule_to_json(const AreaSchedule& a, const SchedulerReport& r) {
  return Json{{"N", r.N}, {"W", r.W}, {"c0", r.c0}, {"c1", r.c1}, {"areas", detail::matrix_json(a.a, a.loops, a.S)}};
}

struct ScheduleArtifact {
  int N = 0, W = 0;
  double c0 = 0.0, c1 = 0.0;
  AreaSchedule schedule;
};

inline ScheduleArtifact schedule_from_json(const Json& j) {
  ScheduleArtifact out;
  out.N = detail::integer(detail::member(j, "N", "schedule"), "schedule.N");
  out.W = detail::integer(detail::member(j, "W", "schedule"), "schedule.W");
  out.c0 = detail::number(detail::member(j, "c0", "schedule"), "schedule.c0");
  out.c1 = detail::number(detail::member(j, "c1", "schedule"), "schedule.c1");
  const Json& areas = detail::member(j, "areas", "schedule");
  if (!areas.is_array()) detail::schema("schedule.areas", "expected an array");
  out.schedule.loops = static_cast<int>(areas.size());
  out.schedule.S = areas.empty() ? 0 : static_cast<int>(areas[0].size());
  detail::matrix_into(areas, out.schedule.loops, out.schedule.S, out.schedule.a, "schedule.areas");
  return out;
}

// ---------------------------------------------------------------------------
// isotopies: the shared vertex layout plus (t, row, areas, z_shift) per slice

inline Json isotopy_to_json(const LegendrianIsotopy& iso) {
  const SliceLayout& l = iso.layout;
  Json anchors = Json::array();
  for (const auto& a : l.anchors()) anchors.push_back(Json::array({a.theta, a.sign}));
  Json slices = Json::array();
  for (const auto& s : iso.slices)
    slices.push_back(Json{{"t", s.t}, {"row", s.row}, {"areas", s.areas}, {"z_shift", s.z_shift}});
  return Json{{"layout",
               {{"M", l.M()},
                {"tau0", l.tau0()},
                {"W", l.coil().covers},
                {"per_cover", l.coil().per_cover},
                {"c1", l.coil().c1},
                {"anchors", anchors}}},
              {"z_base", iso.z_base},
              {"slices", slices}};
}

inline LegendrianIsotopy isotopy_from_json(const Json& j) {
  const Json& lj = detail::member(j, "layout", "isotopy");
  const int M = detail::integer(detail::member(lj, "M", "layout"), "layout.M");
  const double tau0 = detail::number(detail::member(lj, "tau0", "layout"), "layout.tau0");
  const int W = detail::integer(detail::member(lj, "W", "layout"), "layout.W");
  const int per_cover = detail::integer(detail::member(lj, "per_cover", "layout"), "layout.per_cover");
  const double c1 = detail::number(detail::member(lj, "c1", "layout"), "layout.c1");
  const Json& aj = detail::member(lj, "anchors", "layout");
  if (!aj.is_array()) detail::schema("layout.anchors", "expected an array");
  std::vector<SliceLayout::Anchor> anchors;
  for (std::size_t i = 0; i < aj.size(); ++i) {
    const std::string w = "layout.anchors[" + std::to_string(i) + "]";
    if (!aj[i].is_array() || aj[i].size() != 2) detail::schema(w, "expected [theta, sign]");
    int sign = detail::integer(aj[i][1], w + "[1]");
    if (sign != 1 && sign != -1) detail::schema(w + "[1]", "sign must be +1 or -1");
    anchors.push_back({detail::number(aj[i][0], w + "[0]"), sign});
  }
  LegendrianIsotopy iso(SliceLayout(M, std::move(anchors), CoilTemplate::make(c1, W, per_cover), tau0));
  iso.z_base = detail::number(detail::member(j, "z_base", "isotopy"), "isotopy.z_base");
  const Json& sj = detail::member(j, "slices", "isotopy");
  if (!sj.is_array()) detail::schema("isotopy.slices", "expected an array");
  for (std::size_t k = 0; k < sj.size(); ++k) {
    const std::string w = "isotopy.slices[" + std::to_string(k) + "]";
    IsotopySlice s;
    s.t = detail::number(detail::member(sj[k], "t", w), w + ".t");
    s.row = detail::numbers(detail::member(sj[k], "row", w), static_cast<std::size_t>(M), w + ".row");
    s.areas = detail::numbers(detail::member(sj[k], "areas", w), iso.layout.anchors().size(), w + ".areas");
    s.z_shift = detail::number(detail::member(sj[k], "z_shift", w), w + ".z_shift");
    iso.slices.push_back(std::move(s));
  }
  return iso;
}

// ---------------------------------------------------------------------------
// realized slices

inline Json slice_to_json(const ImmersedSlice& s) {
  return Json{{"tau", s.tau}, {"p", s.p}, {"z", s.z}, {"orientation", s.orientation}};
}

inline ImmersedSlice slice_from_json(const Json& j) {
  ImmersedSlice s;
  s.tau = detail::numbers(detail::member(j, "tau", "slice"), static_cast<std::size_t>(-1), "slice.tau");
  s.p = detail::numbers(detail::member(j, "p", "slice"), s.tau.size(), "slice.p");
  if (j.contains("z")) s.z = detail::numbers(j["z"], s.tau.size(), "slice.z");
  if (j.contains("orientation")) s.orientation = detail::integer(j["orientation"], "slice.orientation");
  if (s.tau.size() < 3) detail::schema("slice.tau", "need at least three vertices");
  return s;
}

}  // namespace lagconc::io
