#include "knotforge/invariants.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace knotforge::invariants {

LaurentPoly::LaurentPoly(int lo, std::vector<long long> coeffs)
    : lo_(lo), c_(std::move(coeffs)) {
  strip();
}

LaurentPoly LaurentPoly::constant(long long c) { return LaurentPoly(0, {c}); }

LaurentPoly LaurentPoly::monomial(long long c, int exponent) {
  return LaurentPoly(exponent, {c});
}

void LaurentPoly::strip() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead] == 0) ++lead;
  if (lead > 0) {
    c_.erase(c_.begin(), c_.begin() + lead);
    lo_ += static_cast<int>(lead);
  }
  if (c_.empty()) lo_ = 0;
}

long long LaurentPoly::coeff(int exponent) const {
  int idx = exponent - lo_;
  if (idx < 0 || idx >= static_cast<int>(c_.size())) return 0;
  return c_[idx];
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  int lo = std::min(lo_, o.lo_);
  int hi = std::max(this->hi(), o.hi());
  std::vector<long long> c(hi - lo + 1, 0);
  for (int e = lo; e <= hi; ++e) c[e - lo] = coeff(e) + o.coeff(e);
  return LaurentPoly(lo, std::move(c));
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  if (o.is_zero()) return *this;
  int lo = std::min(lo_, o.lo_);
  int hi = std::max(is_zero() ? o.hi() : this->hi(), o.hi());
  if (is_zero()) lo = o.lo_;
  std::vector<long long> c(hi - lo + 1, 0);
  for (int e = lo; e <= hi; ++e) c[e - lo] = coeff(e) - o.coeff(e);
  return LaurentPoly(lo, std::move(c));
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  if (is_zero() || o.is_zero()) return LaurentPoly();
  std::vector<long long> c(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) {
      __int128 acc = static_cast<__int128>(c[i + j]) +
                     static_cast<__int128>(c_[i]) * static_cast<__int128>(o.c_[j]);
      if (acc > INT64_MAX / 2 || acc < INT64_MIN / 2)
        throw SingularMatrix("coefficient overflow in Laurent multiplication");
      c[i + j] = static_cast<long long>(acc);
    }
  return LaurentPoly(lo_ + o.lo_, std::move(c));
}

long long LaurentPoly::eval_at_one() const {
  return std::accumulate(c_.begin(), c_.end(), 0LL);
}

long long LaurentPoly::eval_at_minus_one() const {
  long long acc = 0;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    int e = lo_ + static_cast<int>(i);
    acc += (e % 2 == 0 ? 1 : -1) * c_[i];
  }
  return acc;
}

LaurentPoly LaurentPoly::normalized() const {
  if (is_zero()) throw SingularMatrix("zero Alexander polynomial");
  int span = hi() - lo();
  if ((hi() + lo()) % 2 != 0)
    throw SingularMatrix("Alexander polynomial cannot be centered");
  int shift = -(hi() + lo()) / 2;
  LaurentPoly out(lo() + shift, c_);
  for (int e = 1; e <= span / 2; ++e)
    if (out.coeff(e) != out.coeff(-e))
      throw SingularMatrix("Alexander polynomial is not symmetric");
  long long at_one = out.eval_at_one();
  if (at_one == 1) return out;
  if (at_one == -1) {
    for (auto& x : out.c_) x = -x;
    return out;
  }
  throw SingularMatrix("Alexander polynomial is not a unit at t=1");
}

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int e = lo(); e <= hi(); ++e) {
    long long c = coeff(e);
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    if (first && c < 0) os << "-";
    long long a = std::llabs(c);
    first = false;
    if (a != 1 || e == 0) os << a;
    if (e != 0) {
      if (a != 1) os << "*";
      os << "t";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

namespace {

// dense integer polynomial used only inside the fraction-free elimination
using IPoly = std::vector<long long>;

void istrip(IPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

IPoly imul(const IPoly& a, const IPoly& b) {
  if (a.empty() || b.empty()) return {};
  IPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      __int128 acc = static_cast<__int128>(c[i + j]) +
                     static_cast<__int128>(a[i]) * static_cast<__int128>(b[j]);
      if (acc > INT64_MAX / 4 || acc < INT64_MIN / 4)
        throw SingularMatrix("integer overflow in determinant elimination");
      c[i + j] = static_cast<long long>(acc);
    }
  istrip(c);
  return c;
}

IPoly isub(const IPoly& a, const IPoly& b) {
  IPoly c(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
  istrip(c);
  return c;
}

// exact division; Bareiss guarantees divisibility
IPoly idiv_exact(IPoly num, const IPoly& den) {
  if (den.empty()) throw SingularMatrix("division by zero polynomial");
  if (num.empty()) return {};
  if (num.size() < den.size()) throw SingularMatrix("inexact polynomial division");
  IPoly q(num.size() - den.size() + 1, 0);
  long long lead = den.back();
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    long long top = num[k + den.size() - 1];
    if (top % lead != 0) throw SingularMatrix("inexact polynomial division");
    long long f = top / lead;
    q[k] = f;
    if (f != 0)
      for (std::size_t i = 0; i < den.size(); ++i) num[k + i] -= f * den[i];
  }
  for (long long x : num)
    if (x != 0) throw SingularMatrix("inexact polynomial division");
  return q;
}

// determinant of a square matrix of integer polynomials (may permute rows;
// the result is only used up to units, which normalization fixes)
IPoly bareiss_determinant(std::vector<std::vector<IPoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return {1};
  IPoly prev = {1};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].empty()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k].empty()) ++swap_row;
      if (swap_row == n) throw SingularMatrix("pivot column vanished");
      std::swap(m[k], m[swap_row]);
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = idiv_exact(isub(imul(m[i][j], m[k][k]), imul(m[i][k], m[k][j])), prev);
    prev = m[k][k];
  }
  return m[n - 1][n - 1];
}

}  // namespace

LaurentPoly alexander_polynomial(const diagram::KnotDiagram& d) {
  const int n = d.crossing_count();
  if (n == 0) {
    if (d.component_count() > 1) throw NotAKnot("diagram traces more than one component");
    return LaurentPoly::constant(1);
  }
  auto seq = d.gauss_sequence();  // raises NotAKnot on multiple components

  // arcs are broken at underpasses; arc k starts after the k-th underpass
  std::vector<int> over_arc(n, -1), under_in(n, -1), under_out(n, -1);
  int cur = n - 1;  // arc in progress when the walk starts (before underpass 0)
  int seen_under = 0;
  for (auto [c, over] : seq) {
    if (over) {
      over_arc[c] = cur;
    } else {
      under_in[c] = cur;
      cur = seen_under++;
      under_out[c] = cur;
    }
  }

  // crossing relations: one row per crossing over Z[t]
  // positive: (1-t) o + t a - b ; negative: (1-t) o + t b - a
  const IPoly one_minus_t = {1, -1};
  const IPoly t = {0, 1};
  const IPoly minus_one = {-1};
  std::vector<std::vector<IPoly>> m(n, std::vector<IPoly>(n));
  auto accumulate = [](IPoly& dst, const IPoly& src) {
    IPoly neg(src);
    for (auto& x : neg) x = -x;
    dst = isub(dst, neg);
  };
  for (int c = 0; c < n; ++c) {
    bool positive = d.nodes()[c].sign > 0;
    int a = positive ? under_in[c] : under_out[c];
    int b = positive ? under_out[c] : under_in[c];
    accumulate(m[c][over_arc[c]], one_minus_t);
    accumulate(m[c][a], t);
    accumulate(m[c][b], minus_one);
  }

  // delete the last row and column
  std::vector<std::vector<IPoly>> minor(n - 1, std::vector<IPoly>(n - 1));
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j + 1 < n; ++j) minor[i][j] = m[i][j];

  IPoly det = bareiss_determinant(std::move(minor));
  if (det.empty()) throw SingularMatrix("Alexander determinant vanished");
  return LaurentPoly(0, det).normalized();
}

long long determinant(const diagram::KnotDiagram& d) {
  return std::llabs(alexander_polynomial(d).eval_at_minus_one());
}

LaurentPoly torus_alexander(int p, int q) {
  if (p < 2 || q <= p || std::gcd(p, q) != 1) throw InvalidTorusType("need coprime 2 <= p < q");
  auto cyclo_quotient = [](int a, int b) {
    // (t^{ab} - 1) / (t^a - 1) = sum_{k<b} t^{ak}
    IPoly r(static_cast<std::size_t>(a) * (b - 1) + 1, 0);
    for (int k = 0; k < b; ++k) r[static_cast<std::size_t>(a) * k] = 1;
    return r;
  };
  // (t^{pq}-1)(t-1) / ((t^p-1)(t^q-1))
  IPoly num = imul(cyclo_quotient(p, q), IPoly{-1, 1});  // (t^{pq}-1)/(t^p-1) * (t-1)
  IPoly den(static_cast<std::size_t>(q) + 1, 0);
  den[0] = -1;
  den[q] = 1;
  IPoly res = idiv_exact(num, den);
  return LaurentPoly(0, res).normalized();
}

LaurentPoly two_bridge_alexander(long p, long q) {
  if (p < 3 || p % 2 == 0 || q <= 0 || q >= p || std::gcd(p, q) != 1)
    throw FixtureError("invalid two-bridge fraction");
  if (q % 2 == 0) q = p - q;  // mirror; the sum formula needs q odd
  std::map<long, long long> acc;
  long eps = 0;
  acc[0] += 1;
  for (long i = 1; i < p; ++i) {
    eps += ((i * q / p) % 2 == 0) ? 1 : -1;
    acc[eps] += (i % 2 == 0) ? 1 : -1;
  }
  long lo = acc.begin()->first;
  long hi = acc.rbegin()->first;
  std::vector<long long> c(hi - lo + 1, 0);
  for (auto [e, v] : acc) c[e - lo] = v;
  return LaurentPoly(static_cast<int>(lo), std::move(c)).normalized();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

LaurentPoly parse_alexander(const std::string& field) {
  std::istringstream in(field);
  std::vector<long long> coeffs;
  long long x;
  while (in >> x) coeffs.push_back(x);
  if (coeffs.empty() || coeffs.size() % 2 == 0)
    throw FixtureError("alexander_coeffs must hold an odd count of integers");
  int lo = -static_cast<int>(coeffs.size() - 1) / 2;
  return LaurentPoly(lo, std::move(coeffs));
}

}  // namespace

KnotTable KnotTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open knot table '" + path + "'");
  KnotTable table;
  std::string line;
  bool header_seen = false;
  static const std::vector<std::string> kMarkers = {"star", "diamond",   "times",
                                                    "circ", "circ_star", "circ_diamond"};
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // first non-comment line is the header
      continue;
    }
    auto f = split_csv_line(line);
    if (f.size() != 11) throw FixtureError("knot table row needs 11 fields: " + line);
    KnotTableEntry e;
    e.name = f[0];
    e.crossing_number = std::stoi(f[1]);
    e.bridge_index = std::stoi(f[2]);
    e.marker = f[3];
    e.two_bridge = f[4] == "1";
    if (!f[5].empty() != !f[6].empty())
      throw FixtureError("torus_p and torus_q must both be set or both empty");
    if (!f[5].empty()) e.torus = {std::stoi(f[5]), std::stoi(f[6])};
    e.edge_bound = std::stoi(f[7]);
    e.alexander = parse_alexander(f[8]);
    e.range_lo = std::stoi(f[9]);
    e.range_hi = std::stoi(f[10]);

    // ingestion validation
    if (std::find(kMarkers.begin(), kMarkers.end(), e.marker) == kMarkers.end())
      throw FixtureError(e.name + ": unknown marker " + e.marker);
    if (e.range_lo > e.range_hi) throw FixtureError(e.name + ": lo > hi");
    if (e.alexander.normalized() != e.alexander)
      throw FixtureError(e.name + ": alexander polynomial is not in normalized form");
    if (std::llabs(e.alexander.eval_at_minus_one()) % 2 == 0)
      throw FixtureError(e.name + ": knot determinant must be odd");
    if (e.torus) {
      auto [p, q] = *e.torus;
      int s = std::min(2 * p, q);
      if (e.range_lo != s || e.range_hi != s)
        throw FixtureError(e.name + ": torus superbridge entry inconsistent");
      if (!(torus_alexander(p, q) == e.alexander))
        throw FixtureError(e.name + ": alexander does not match the torus closed form");
    }
    table.entries_.push_back(std::move(e));
  }
  if (table.entries_.empty()) throw FixtureError("knot table is empty");

  // classes of entries sharing a polynomial
  std::map<std::string, std::vector<std::string>> by_poly;
  for (const auto& e : table.entries_) by_poly[e.alexander.to_string()].push_back(e.name);
  for (auto& [poly, names] : by_poly)
    if (names.size() >= 2) table.dups_.push_back(names);
  return table;
}

const KnotTableEntry* KnotTable::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

std::vector<KnotTableEntry> identify_by_polynomial(const LaurentPoly& normalized,
                                                   const KnotTable& table) {
  std::vector<KnotTableEntry> out;
  for (const auto& e : table.entries())
    if (e.alexander == normalized) out.push_back(e);
  return out;
}

std::vector<KnotTableEntry> identify(const diagram::KnotDiagram& d, const KnotTable& table) {
  return identify_by_polynomial(alexander_polynomial(d), table);
}

}  // namespace knotforge::invariants
