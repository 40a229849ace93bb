#pragma once

// Knot-group calculus: PD diagrams, Wirtinger presentations, Fox calculus,
// Alexander polynomials, amalgamated products and connected sums.
//
// Words are sequences of signed 1-based generator indices: +g is x_g, -g its inverse.
//
// PD convention: "X a b c d s" lists the four edge labels counterclockwise
// starting at the incoming under-edge a; c = a + 1 is the outgoing under-edge
// and the over-strand runs d -> b when s = +1, b -> d when s = -1. Edge labels
// 1..2n increase along the orientation.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lagconc/errors.hpp"

namespace lagconc {

using Word = std::vector<int>;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Word free_reduce(const Word& w) {
  Word out;
  for (int g : w) {
    if (g == 0) fail(ErrorKind::InvalidArgument, "generator index 0 in word");
    if (!out.empty() && out.back() == -g)
      out.pop_back();
    else
      out.push_back(g);
  }
  return out;
}

inline Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& g : out) g = -g;
  return out;
}

inline Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const Word& p : parts) out.insert(out.end(), p.begin(), p.end());
  return free_reduce(out);
}

inline Word power(int g, int e) { return Word(static_cast<std::size_t>(std::abs(e)), e >= 0 ? g : -g); }

inline Word commutator(const Word& a, const Word& b) { return concat({a, b, inverse(a), inverse(b)}); }

/// Letters as x1 x2^-1 ..., runs collapsed into powers; "1" for the empty word.
inline std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    int e = static_cast<int>(j - i) * (w[i] > 0 ? 1 : -1);
    if (!out.empty()) out += " ";
    out += "x" + std::to_string(std::abs(w[i]));
    if (e != 1) out += "^" + std::to_string(e);
    i = j;
  }
  return out;
}

struct GroupPresentation {
  int generators = 0;
  std::vector<Word> relators;
  std::optional<Word> mu, lambda;

  void add_relator(const Word& w) {
    Word r = free_reduce(w);
    for (int g : r)
      if (std::abs(g) > generators) fail(ErrorKind::InvalidArgument, "relator uses an undefined generator");
    relators.push_back(std::move(r));
  }
};

// ---------------------------------------------------------------------------
// Laurent polynomials over Z

struct LaurentPolynomial {
  int low = 0;                 // exponent of coeffs[0]
  std::vector<long long> coeffs;  // empty means zero

  static LaurentPolynomial one() { return {0, {1}}; }
  bool is_zero() const { return coeffs.empty(); }
  int degree_span() const { return coeffs.empty() ? -1 : static_cast<int>(coeffs.size()) - 1; }

  /// Shift to lowest exponent 0 with positive leading coefficient.
  LaurentPolynomial normalized() const {
    LaurentPolynomial p = *this;
    while (!p.coeffs.empty() && p.coeffs.back() == 0) p.coeffs.pop_back();
    std::size_t z = 0;
    while (z < p.coeffs.size() && p.coeffs[z] == 0) ++z;
    p.coeffs.erase(p.coeffs.begin(), p.coeffs.begin() + static_cast<std::ptrdiff_t>(z));
    p.low = 0;
    if (!p.coeffs.empty() && p.coeffs.back() < 0)
      for (auto& c : p.coeffs) c = -c;
    return p;
  }

  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial x = a, y = b;
    while (!x.coeffs.empty() && x.coeffs.back() == 0) x.coeffs.pop_back();
    while (!y.coeffs.empty() && y.coeffs.back() == 0) y.coeffs.pop_back();
    if (x.coeffs.empty() || y.coeffs.empty()) return x.coeffs.empty() && y.coeffs.empty();
    return x.low == y.low && x.coeffs == y.coeffs;
  }

  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    if (a.coeffs.empty() || b.coeffs.empty()) return {};
    LaurentPolynomial r{a.low + b.low, std::vector<long long>(a.coeffs.size() + b.coeffs.size() - 1, 0)};
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs.size(); ++j) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    return r;
  }

  std::string to_string() const {
    if (coeffs.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      long long c = coeffs[k];
      if (c == 0) continue;
      int e = low + static_cast<int>(k);
      long long a = c < 0 ? -c : c;
      if (first)
        os << (c < 0 ? "-" : "");
      else
        os << (c < 0 ? " - " : " + ");
      if (a != 1 || e == 0) os << a;
      if (e != 0) os << "t" << (e != 1 ? "^" + std::to_string(e) : "");
      first = false;
    }
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// diagrams

struct KnotDiagram {
  struct Crossing {
    std::array<int, 4> label{};
    int sign = +1;
  };
  std::vector<Crossing> crossings;
  std::optional<int> long_arc;

  int edges() const { return 2 * static_cast<int>(crossings.size()); }
};

inline int next_label(int e, int n2) { return e % n2 + 1; }

/// Each label 1..2n appears exactly twice, under-strands continue, signs match the over-strand direction.
inline void validate(const KnotDiagram& d) {
  const int n2 = d.edges();
  if (n2 == 0) fail(ErrorKind::InconsistentDiagram, "diagram has no crossings");
  std::vector<int> seen(n2 + 1, 0);
  for (const auto& c : d.crossings) {
    for (int l : c.label) {
      if (l < 1 || l > n2) fail(ErrorKind::InconsistentDiagram, "edge label out of range 1.." + std::to_string(n2));
      ++seen[l];
    }
    if (c.sign != 1 && c.sign != -1) fail(ErrorKind::InconsistentDiagram, "crossing sign must be +1 or -1");
    if (c.label[2] != next_label(c.label[0], n2))
      fail(ErrorKind::InconsistentDiagram, "under-strand does not continue from a to a+1");
    const int b = c.label[1], dd = c.label[3];
    bool pos = b == next_label(dd, n2), neg = dd == next_label(b, n2);
    if (pos && !neg && c.sign != 1) fail(ErrorKind::InconsistentDiagram, "sign disagrees with over-strand direction");
    if (neg && !pos && c.sign != -1) fail(ErrorKind::InconsistentDiagram, "sign disagrees with over-strand direction");
    if (!pos && !neg) fail(ErrorKind::InconsistentDiagram, "over-strand labels are not consecutive");
  }
  for (int l = 1; l <= n2; ++l)
    if (seen[l] != 2) fail(ErrorKind::InconsistentDiagram, "edge label " + std::to_string(l) + " does not appear twice");
  if (d.long_arc && (*d.long_arc < 1 || *d.long_arc > n2))
    fail(ErrorKind::InconsistentDiagram, "LONG marker names an unknown edge");
}

/// Whitespace-insensitive PD text: "X a b c d s" per crossing, optional "LONG a", '#' comments.
inline KnotDiagram parse_pd(const std::string& text) {
  KnotDiagram d;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto perr = [&](std::size_t col, const std::string& what) {
    fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ", column " + std::to_string(col + 1) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::vector<std::pair<std::string, std::size_t>> tok;
    for (std::size_t i = 0; i < line.size();) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      tok.emplace_back(line.substr(i, j - i), i);
      i = j;
    }
    if (tok.empty()) continue;
    auto integer = [&](const std::pair<std::string, std::size_t>& t) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(t.first, &used);
      } catch (...) {
        perr(t.second, "expected an integer, got '" + t.first + "'");
      }
      if (used != t.first.size()) perr(t.second + used, "trailing characters in '" + t.first + "'");
      return v;
    };
    if (tok[0].first == "X") {
      if (tok.size() != 6) perr(tok.back().second, "crossing line needs 'X a b c d s'");
      KnotDiagram::Crossing c;
      for (int k = 0; k < 4; ++k) c.label[k] = integer(tok[k + 1]);
      const std::string& s = tok[5].first;
      if (s == "+" || s == "+1" || s == "1")
        c.sign = 1;
      else if (s == "-" || s == "-1")
        c.sign = -1;
      else
        perr(tok[5].second, "sign must be +1 or -1");
      d.crossings.push_back(c);
    } else if (tok[0].first == "LONG") {
      if (tok.size() != 2) perr(tok.back().second, "LONG line needs one edge label");
      if (d.long_arc) perr(tok[0].second, "duplicate LONG marker");
      d.long_arc = integer(tok[1]);
    } else {
      perr(tok[0].second, "unknown record '" + tok[0].first + "'");
    }
  }
  validate(d);
  return d;
}

inline std::string to_pd_text(const KnotDiagram& d) {
  std::ostringstream os;
  for (const auto& c : d.crossings)
    os << "X " << c.label[0] << ' ' << c.label[1] << ' ' << c.label[2] << ' ' << c.label[3] << ' '
       << (c.sign > 0 ? "+1" : "-1") << '\n';
  if (d.long_arc) os << "LONG " << *d.long_arc << '\n';
  return os.str();
}

/// Over-arc class (0-based generator) of every edge label; generators ordered by smallest label.
inline std::vector<int> arc_classes(const KnotDiagram& d) {
  const int n2 = d.edges();
  std::vector<int> parent(n2 + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& c : d.crossings) {
    int a = find(c.label[1]), b = find(c.label[3]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> cls(n2 + 1, -1), id(n2 + 1, -1);
  int next = 0;
  for (int l = 1; l <= n2; ++l) {
    int r = find(l);
    if (id[r] < 0) id[r] = next++;
    cls[l] = id[r];
  }
  return cls;
}

/// One generator per over-arc, one relator x_c^-1 x_o^-s x_a x_o^s per crossing; mu is the
/// generator of the LONG edge (or of edge 1).
inline GroupPresentation wirtinger(const KnotDiagram& d) {
  validate(d);
  auto cls = arc_classes(d);
  GroupPresentation p;
  p.generators = *std::max_element(cls.begin() + 1, cls.end()) + 1;
  for (const auto& c : d.crossings) {
    int a = cls[c.label[0]] + 1, cc = cls[c.label[2]] + 1, o = cls[c.label[1]] + 1;
    p.add_relator(concat({{-cc}, power(o, -c.sign), {a}, power(o, c.sign)}));
  }
  p.mu = Word{cls[d.long_arc.value_or(1)] + 1};
  return p;
}

inline int writhe(const KnotDiagram& d) {
  int w = 0;
  for (const auto& c : d.crossings) w += c.sign;
  return w;
}

/// Zero-framed longitude read along the orientation from the start of the mu edge:
/// the over-arc met at each under-passage, signed by the crossing, then mu^-writhe.
inline Word longitude(const KnotDiagram& d) {
  validate(d);
  auto cls = arc_classes(d);
  const int n2 = d.edges();
  std::vector<int> under_at(n2 + 1, -1);
  for (std::size_t i = 0; i < d.crossings.size(); ++i) under_at[d.crossings[i].label[0]] = static_cast<int>(i);
  const int start = d.long_arc.value_or(1);
  Word w;
  int e = start;
  for (int step = 0; step < n2; ++step, e = next_label(e, n2)) {
    if (under_at[e] < 0) continue;
    const auto& c = d.crossings[under_at[e]];
    Word piece = power(cls[c.label[1]] + 1, c.sign);
    w.insert(w.end(), piece.begin(), piece.end());
  }
  Word tail = power(cls[start] + 1, -writhe(d));
  w.insert(w.end(), tail.begin(), tail.end());
  return free_reduce(w);
}

inline KnotDiagram mirror(const KnotDiagram& d) {
  KnotDiagram m = d;
  for (auto& c : m.crossings) {
    const auto l = c.label;
    // the over-strand becomes the under-strand, entered at its incoming edge
    if (c.sign > 0)
      c.label = {l[3], l[0], l[1], l[2]};
    else
      c.label = {l[1], l[2], l[3], l[0]};
    c.sign = -c.sign;
  }
  return m;
}

inline KnotDiagram unknot_diagram() { return {{{{1, 2, 2, 1}, +1}}, std::nullopt}; }

/// Closed 2-braid sigma^n.
inline KnotDiagram torus_2n_diagram(int n) {
  if (n < 1 || n % 2 == 0) fail(ErrorKind::InvalidArgument, "T(2,n) needs odd n >= 1");
  KnotDiagram d;
  const int n2 = 2 * n;
  auto wrap = [&](int x) { return (x - 1) % n2 + 1; };
  for (int k = 1; k <= n; ++k) {
    int a = 2 * k - 1;
    d.crossings.push_back({{a, wrap(a + n + 1), wrap(a + 1), wrap(a + n)}, +1});
  }
  return d;
}

inline KnotDiagram figure_eight_diagram() {
  return {{{{4, 2, 5, 1}, +1}, {{8, 6, 1, 5}, +1}, {{6, 3, 7, 4}, -1}, {{2, 7, 3, 8}, -1}}, std::nullopt};
}

// ---------------------------------------------------------------------------
// abelianization

struct AbelianInvariants {
  int rank = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1, divisibility chain

  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
  friend bool operator<(const AbelianInvariants& a, const AbelianInvariants& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.torsion < b.torsion;
  }
  bool infinite_cyclic() const { return rank == 1 && torsion.empty(); }
};

namespace detail {

inline std::vector<std::vector<BigInt>> exponent_matrix(const GroupPresentation& p) {
  std::vector<std::vector<BigInt>> a(p.relators.size(), std::vector<BigInt>(p.generators, 0));
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    for (int g : p.relators[i]) a[i][std::abs(g) - 1] += g > 0 ? 1 : -1;
  return a;
}

// Diagonal of an integer Smith form (nonzero entries only, divisibility chain).
inline std::vector<BigInt> smith_diagonal(std::vector<std::vector<BigInt>> a) {
  const std::size_t m = a.size(), n = m ? a[0].size() : 0;
  std::vector<BigInt> diag;
  std::size_t r = 0;
  while (r < m && r < n) {
    // pivot: smallest nonzero absolute value
    std::size_t pi = m, pj = n;
    for (std::size_t i = r; i < m; ++i)
      for (std::size_t j = r; j < n; ++j)
        if (a[i][j] != 0 && (pi == m || abs(a[i][j]) < abs(a[pi][pj]))) pi = i, pj = j;
    if (pi == m) break;
    std::swap(a[r], a[pi]);
    for (auto& row : a) std::swap(row[r], row[pj]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (a[i][r] == 0) continue;
        BigInt q = a[i][r] / a[r][r];
        for (std::size_t j = r; j < n; ++j) a[i][j] -= q * a[r][j];
        if (a[i][r] != 0) {
          std::swap(a[i], a[r]);
          clean = false;
        }
      }
      for (std::size_t j = r + 1; j < n; ++j) {
        if (a[r][j] == 0) continue;
        BigInt q = a[r][j] / a[r][r];
        for (std::size_t i = r; i < m; ++i) a[i][j] -= q * a[i][r];
        if (a[r][j] != 0) {
          for (auto& row : a) std::swap(row[r], row[j]);
          clean = false;
        }
      }
    }
    diag.push_back(abs(a[r][r]));
    ++r;
  }
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      BigInt g = gcd(diag[i], diag[j]);
      BigInt l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  return diag;
}

}  // namespace detail

inline AbelianInvariants abelianization(const GroupPresentation& p) {
  auto diag = detail::smith_diagonal(detail::exponent_matrix(p));
  AbelianInvariants out;
  out.rank = p.generators - static_cast<int>(diag.size());
  for (const auto& d : diag)
    if (d > 1) out.torsion.push_back(d);
  return out;
}

// ---------------------------------------------------------------------------
// Fox calculus and the Alexander polynomial

namespace detail {

// Laurent polynomial over Q; Euclidean for the exponent span, monomials are units.
struct QLaurent {
  int low = 0;
  std::vector<Rational> c;

  bool zero() const { return c.empty(); }
  int span() const { return static_cast<int>(c.size()) - 1; }
  int high() const { return low + span(); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
    std::size_t z = 0;
    while (z < c.size() && c[z] == 0) ++z;
    if (z == c.size()) {
      c.clear();
      low = 0;
      return;
    }
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(z));
    low += static_cast<int>(z);
  }
};

inline QLaurent mul(const QLaurent& a, const QLaurent& b) {
  if (a.zero() || b.zero()) return {};
  QLaurent r{a.low + b.low, std::vector<Rational>(a.c.size() + b.c.size() - 1, 0)};
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  return r;
}

inline QLaurent sub(const QLaurent& a, const QLaurent& b) {
  if (b.zero()) return a;
  if (a.zero()) {
    QLaurent r = b;
    for (auto& x : r.c) x = -x;
    return r;
  }
  const int lo = std::min(a.low, b.low), hi = std::max(a.high(), b.high());
  QLaurent r{lo, std::vector<Rational>(static_cast<std::size_t>(hi - lo + 1), 0)};
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[static_cast<std::size_t>(a.low - lo) + i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[static_cast<std::size_t>(b.low - lo) + i] -= b.c[i];
  r.trim();
  return r;
}

// Quotient q with span(a - q b) < span(b); the remainder stays inside the support of a.
inline QLaurent quotient(QLaurent a, const QLaurent& b) {
  std::map<int, Rational> q;
  while (!a.zero() && a.span() >= b.span()) {
    const int s = a.high() - b.high();
    const Rational f = a.c.back() / b.c.back();
    q[s] += f;
    QLaurent t{b.low + s, b.c};
    for (auto& x : t.c) x *= f;
    a = sub(a, t);
  }
  if (q.empty()) return {};
  QLaurent out{q.begin()->first, std::vector<Rational>(static_cast<std::size_t>(q.rbegin()->first - q.begin()->first + 1), 0)};
  for (const auto& [e, v] : q) out.c[static_cast<std::size_t>(e - out.low)] = v;
  out.trim();
  return out;
}

// A constant scale that makes the listed polynomials integral with coprime coefficients.
inline Rational primitive_scale(const std::vector<const QLaurent*>& ps) {
  BigInt den = 1, g = 0;
  for (const auto* p : ps)
    for (const auto& x : p->c) den = boost::multiprecision::lcm(den, denominator(x));
  for (const auto* p : ps)
    for (const auto& x : p->c) g = gcd(g, abs(numerator(Rational(x * den))));
  if (g == 0) return Rational(1);
  return Rational(den, g);
}

inline void scale(QLaurent& p, const Rational& f) {
  for (auto& x : p.c) x *= f;
}

// A homomorphism onto Z = <t>, as exponents per generator, with mu -> t when mu is known.
inline std::vector<long long> abelian_map(const GroupPresentation& p) {
  if (!abelianization(p).infinite_cyclic())
    fail(ErrorKind::NotKnotLike, "abelianization is not infinite cyclic");
  auto a = exponent_matrix(p);
  const int n = p.generators;
  // rational row reduction; the kernel is one-dimensional
  std::vector<std::vector<Rational>> m(a.size(), std::vector<Rational>(n));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int j = 0; j < n; ++j) m[i][j] = Rational(a[i][j]);
  std::vector<int> pivcol;
  std::size_t row = 0;
  for (int j = 0; j < n && row < m.size(); ++j) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][j] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    Rational inv = 1 / m[row][j];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][j] == 0) continue;
      Rational f = m[i][j];
      for (int k = 0; k < n; ++k) m[i][k] -= f * m[row][k];
    }
    pivcol.push_back(j);
    ++row;
  }
  int free_col = -1;
  for (int j = 0; j < n && free_col < 0; ++j)
    if (std::find(pivcol.begin(), pivcol.end(), j) == pivcol.end()) free_col = j;
  std::vector<Rational> v(n, 0);
  v[free_col] = 1;
  for (std::size_t r = 0; r < pivcol.size(); ++r) v[pivcol[r]] = -m[r][free_col];
  BigInt den = 1;
  for (const auto& x : v) den = boost::multiprecision::lcm(den, denominator(x));
  std::vector<BigInt> iv(n);
  BigInt g = 0;
  for (int j = 0; j < n; ++j) {
    iv[j] = numerator(Rational(v[j] * den));
    g = gcd(g, abs(iv[j]));
  }
  int sgn = 1;
  if (p.mu) {
    BigInt mu_val = 0;
    for (int x : *p.mu) mu_val += x > 0 ? iv[x - 1] : -iv[-x - 1];
    if (mu_val < 0) sgn = -1;
  } else {
    for (const auto& x : iv)
      if (x != 0) {
        sgn = x < 0 ? -1 : 1;
        break;
      }
  }
  std::vector<long long> out(n);
  for (int j = 0; j < n; ++j) out[j] = sgn * static_cast<long long>(iv[j] / g);
  return out;
}

}  // namespace detail

/// Fox Jacobian under the abelianization, as Laurent polynomials (rows = relators).
inline std::vector<std::vector<LaurentPolynomial>> fox_matrix(const GroupPresentation& p) {
  auto phi = detail::abelian_map(p);
  std::vector<std::vector<LaurentPolynomial>> out(p.relators.size(),
                                                  std::vector<LaurentPolynomial>(p.generators));
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    std::vector<std::map<long long, long long>> acc(p.generators);
    long long prefix = 0;
    for (int g : p.relators[i]) {
      int j = std::abs(g) - 1;
      if (g > 0) {
        acc[j][prefix] += 1;
        prefix += phi[j];
      } else {
        prefix -= phi[j];
        acc[j][prefix] -= 1;
      }
    }
    for (int j = 0; j < p.generators; ++j) {
      std::map<long long, long long> terms;
      for (auto [e, c] : acc[j])
        if (c != 0) terms[e] = c;
      if (terms.empty()) continue;
      LaurentPolynomial lp;
      lp.low = static_cast<int>(terms.begin()->first);
      lp.coeffs.assign(static_cast<std::size_t>(terms.rbegin()->first - terms.begin()->first + 1), 0);
      for (auto [e, c] : terms) lp.coeffs[static_cast<std::size_t>(e - lp.low)] = c;
      out[i][j] = lp;
    }
  }
  return out;
}

/// Generator of the first elementary ideal (gcd of (n-1)-minors of the Fox matrix), normalized.
inline LaurentPolynomial alexander(const GroupPresentation& p) {
  auto fox = fox_matrix(p);
  const std::size_t m = fox.size();
  const std::size_t n = static_cast<std::size_t>(p.generators);
  if (n == 0) fail(ErrorKind::NotKnotLike, "presentation has no generators");
  using detail::QLaurent;
  std::vector<std::vector<QLaurent>> a(m, std::vector<QLaurent>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = fox[i][j];
      if (e.is_zero()) continue;
      a[i][j].low = e.low;
      for (auto c : e.coeffs) a[i][j].c.emplace_back(c);
      a[i][j].trim();
    }
  // diagonalize over Q[t, 1/t]
  std::vector<QLaurent> diag;
  std::size_t r = 0;
  while (r < m && r < n) {
    std::size_t pi = m, pj = n;
    for (std::size_t i = r; i < m; ++i)
      for (std::size_t j = r; j < n; ++j)
        if (!a[i][j].zero() && (pi == m || a[i][j].span() < a[pi][pj].span())) pi = i, pj = j;
    if (pi == m) break;
    std::swap(a[r], a[pi]);
    for (auto& row : a) std::swap(row[r], row[pj]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (a[i][r].zero()) continue;
        auto q = detail::quotient(a[i][r], a[r][r]);
        std::vector<const QLaurent*> row;
        for (std::size_t j = r; j < n; ++j) {
          a[i][j] = detail::sub(a[i][j], detail::mul(q, a[r][j]));
          row.push_back(&a[i][j]);
        }
        const auto f = detail::primitive_scale(row);
        for (std::size_t j = r; j < n; ++j) detail::scale(a[i][j], f);
        if (!a[i][r].zero()) {
          std::swap(a[i], a[r]);
          clean = false;
        }
      }
      for (std::size_t j = r + 1; j < n; ++j) {
        if (a[r][j].zero()) continue;
        auto q = detail::quotient(a[r][j], a[r][r]);
        std::vector<const QLaurent*> col;
        for (std::size_t i = r; i < m; ++i) {
          a[i][j] = detail::sub(a[i][j], detail::mul(q, a[i][r]));
          col.push_back(&a[i][j]);
        }
        const auto f = detail::primitive_scale(col);
        for (std::size_t i = r; i < m; ++i) detail::scale(a[i][j], f);
        if (!a[r][j].zero()) {
          for (auto& row : a) std::swap(row[r], row[j]);
          clean = false;
        }
      }
    }
    diag.push_back(a[r][r]);
    ++r;
  }
  // a knot-like group has Fox rank n - 1; the first elementary ideal is generated by the product
  if (diag.size() + 1 < n) return {};
  if (diag.size() >= n) fail(ErrorKind::NotKnotLike, "Fox matrix has full rank");
  QLaurent prod{0, {Rational(1)}};
  for (const auto& d : diag) prod = detail::mul(prod, d);
  // primitive integer representative
  BigInt den = 1;
  for (const auto& c : prod.c) den = boost::multiprecision::lcm(den, denominator(c));
  std::vector<BigInt> ic(prod.c.size());
  BigInt g = 0;
  for (std::size_t k = 0; k < prod.c.size(); ++k) {
    ic[k] = numerator(Rational(prod.c[k] * den));
    g = gcd(g, abs(ic[k]));
  }
  LaurentPolynomial out;
  for (const auto& c : ic) out.coeffs.push_back(static_cast<long long>(c / g));
  return out.normalized();
}

inline LaurentPolynomial alexander(const KnotDiagram& d) { return alexander(wirtinger(d)); }

// ---------------------------------------------------------------------------
// Tietze moves

/// Append the consequence w r_i^e w^-1 of an existing relator.
inline void tietze_add_consequence(GroupPresentation& p, std::size_t i, const Word& conj, bool invert = false) {
  Word r = invert ? inverse(p.relators.at(i)) : p.relators.at(i);
  p.add_relator(concat({conj, r, inverse(conj)}));
}

/// Replace relator i by r_i * (conjugate of relator j).
inline void tietze_multiply(GroupPresentation& p, std::size_t i, std::size_t j, const Word& conj) {
  if (i == j) fail(ErrorKind::InvalidArgument, "cannot multiply a relator by itself");
  p.relators.at(i) = concat({p.relators.at(i), conj, p.relators.at(j), inverse(conj)});
}

/// New generator y with defining relator y w^-1.
inline int tietze_add_generator(GroupPresentation& p, const Word& w) {
  ++p.generators;
  p.add_relator(concat({{p.generators}, inverse(w)}));
  return p.generators;
}

/// Eliminate generator g using a relator in which it occurs exactly once. Returns false if none exists.
inline bool tietze_eliminate(GroupPresentation& p, int g) {
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    const Word& r = p.relators[i];
    int count = 0;
    std::size_t at = 0;
    for (std::size_t k = 0; k < r.size(); ++k)
      if (std::abs(r[k]) == g) ++count, at = k;
    if (count != 1) continue;
    // r = u g^e v  =>  g^e = u^-1 v^-1  =>  g = (v u)^-e
    Word u(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(at));
    Word v(r.begin() + static_cast<std::ptrdiff_t>(at) + 1, r.end());
    Word image = concat({v, u});
    if (r[at] > 0) image = inverse(image);
    auto subst = [&](const Word& w) {
      Word out;
      for (int x : w) {
        if (std::abs(x) == g) {
          Word piece = x > 0 ? image : inverse(image);
          out.insert(out.end(), piece.begin(), piece.end());
        } else {
          out.push_back(x);
        }
      }
      for (int& x : out)
        if (std::abs(x) > g) x += x > 0 ? -1 : 1;
      return free_reduce(out);
    };
    std::vector<Word> rel;
    for (std::size_t k = 0; k < p.relators.size(); ++k)
      if (k != i) rel.push_back(subst(p.relators[k]));
    p.relators = std::move(rel);
    if (p.mu) p.mu = subst(*p.mu);
    if (p.lambda) p.lambda = subst(*p.lambda);
    --p.generators;
    return true;
  }
  return false;
}

/// Cyclically reduce, drop trivial relators, and eliminate generators while possible.
inline GroupPresentation simplify(GroupPresentation p) {
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<Word> rel;
    for (Word r : p.relators) {
      r = free_reduce(r);
      while (r.size() >= 2 && r.front() == -r.back()) r = Word(r.begin() + 1, r.end() - 1);
      if (!r.empty()) rel.push_back(r);
    }
    p.relators = std::move(rel);
    for (int g = p.generators; g >= 1; --g)
      if (tietze_eliminate(p, g)) {
        progress = true;
        break;
      }
  }
  return p;
}

// ---------------------------------------------------------------------------
// amalgams

inline Word shifted(const Word& w, int by) {
  Word out = w;
  for (int& x : out) x += x > 0 ? by : -by;
  return out;
}

/// P1 * P2 / <<mu1 = mu_image, lambda1 = lambda_image>>, images given as words in P2.
inline GroupPresentation amalgamate(const GroupPresentation& p1, const GroupPresentation& p2, const Word& mu_image,
                                    const Word& lambda_image) {
  if (!p1.mu || !p1.lambda) fail(ErrorKind::UndefinedPeripheral, "first factor needs mu and lambda");
  for (int x : mu_image)
    if (std::abs(x) > p2.generators) fail(ErrorKind::UndefinedPeripheral, "mu image is not a word in the second factor");
  for (int x : lambda_image)
    if (std::abs(x) > p2.generators)
      fail(ErrorKind::UndefinedPeripheral, "lambda image is not a word in the second factor");
  GroupPresentation out;
  out.generators = p1.generators + p2.generators;
  for (const Word& r : p1.relators) out.add_relator(r);
  for (const Word& r : p2.relators) out.add_relator(shifted(r, p1.generators));
  out.add_relator(concat({*p1.mu, inverse(shifted(mu_image, p1.generators))}));
  out.add_relator(concat({*p1.lambda, inverse(shifted(lambda_image, p1.generators))}));
  out.mu = p1.mu;
  return out;
}

/// P x Z with the new generator appended last (it commutes with everything).
inline GroupPresentation product_with_z(const GroupPresentation& p) {
  GroupPresentation out = p;
  const int l = ++out.generators;
  for (int g = 1; g < l; ++g) out.add_relator(commutator({g}, {l}));
  out.lambda = Word{l};
  return out;
}

/// Knot group with the longitude class declared trivial (the lambda = 1 relator enters at gluing).
inline GroupPresentation lambda_trivialized(GroupPresentation p) {
  if (!p.mu) fail(ErrorKind::UndefinedPeripheral, "knot group needs mu");
  p.lambda = Word{};
  return p;
}

/// <mu | >: the complement of an unknotted torus, whose meridian generates.
inline GroupPresentation unknotted_complement() {
  GroupPresentation p;
  p.generators = 1;
  p.mu = Word{1};
  p.lambda = Word{};
  return p;
}

inline GroupPresentation connected_sum_group(const GroupPresentation& p1, const GroupPresentation& p2) {
  if (!p1.mu || !p2.mu) fail(ErrorKind::UndefinedPeripheral, "both factors need mu");
  GroupPresentation out;
  out.generators = p1.generators + p2.generators;
  for (const Word& r : p1.relators) out.add_relator(r);
  for (const Word& r : p2.relators) out.add_relator(shifted(r, p1.generators));
  out.add_relator(concat({*p1.mu, inverse(shifted(*p2.mu, p1.generators))}));
  out.mu = p1.mu;
  return out;
}

/// pi_1 of the complement of K_1 (lambda trivial) glued to pi_1(S^3 - K_A) x Z_lambda.
inline GroupPresentation svk_gluing(const GroupPresentation& u1, const GroupPresentation& knot_a) {
  if (!knot_a.mu) fail(ErrorKind::UndefinedPeripheral, "second factor needs mu");
  GroupPresentation u2 = product_with_z(knot_a);
  return amalgamate(u1, u2, *knot_a.mu, *u2.lambda);
}

// ---------------------------------------------------------------------------
// distinguishing

struct GroupInvariants {
  AbelianInvariants h1;
  LaurentPolynomial alexander;
};

inline GroupInvariants invariants_of(const GroupPresentation& p) { return {abelianization(p), alexander(p)}; }

/// Class index per input; equal indices mean equal invariants, not isomorphic groups.
inline std::vector<int> distinguish(const std::vector<KnotDiagram>& diagrams) {
  std::vector<GroupInvariants> inv;
  for (const auto& d : diagrams) inv.push_back(invariants_of(wirtinger(d)));
  std::vector<int> cls(diagrams.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < inv.size(); ++i) {
    for (std::size_t j = 0; j < i && cls[i] < 0; ++j)
      if (inv[j].h1 == inv[i].h1 && inv[j].alexander == inv[i].alexander) cls[i] = cls[j];
    if (cls[i] < 0) cls[i] = next++;
  }
  return cls;
}

}  // namespace lagconc
