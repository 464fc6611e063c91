#include "knotforge/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "knotforge/errors.hpp"

namespace knotforge {

Rat parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw FixtureError("empty rational literal");
  try {
    Rat r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw FixtureError("bad rational literal '" + text + "'");
  }
}

std::string rational_to_string(const Rat& r) {
  return r.get_str();
}

long double mpz_to_long_double(const mpz_class& z) {
  const mpz_srcptr p = z.get_mpz_t();
  size_t n = mpz_size(p);
  long double v = 0.0L;
  for (size_t i = n; i-- > 0;) v = v * 0x1.0p64L + static_cast<long double>(mpz_getlimbn(p, i));
  return mpz_sgn(p) < 0 ? -v : v;
}

long double rat_to_long_double(const Rat& r) {
  return mpz_to_long_double(r.get_num()) / mpz_to_long_double(r.get_den());
}

RatPoly::RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { strip(); }

RatPoly RatPoly::constant(const Rat& c) { return RatPoly({c}); }

RatPoly RatPoly::linear(const Rat& a, const Rat& b) { return RatPoly({a, b}); }

void RatPoly::strip() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rat& RatPoly::coeff(int i) const {
  static const Rat zero(0);
  if (i < 0 || i >= static_cast<int>(c_.size())) return zero;
  return c_[i];
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
  std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return RatPoly(std::move(r));
}

RatPoly RatPoly::operator-(const RatPoly& o) const {
  std::vector<Rat> r(std::max(c_.size(), o.c_.size()), Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return RatPoly(std::move(r));
}

RatPoly RatPoly::operator*(const RatPoly& o) const {
  if (is_zero() || o.is_zero()) return RatPoly();
  std::vector<Rat> r(c_.size() + o.c_.size() - 1, Rat(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return RatPoly(std::move(r));
}

RatPoly RatPoly::operator*(const Rat& s) const {
  std::vector<Rat> r(c_);
  for (auto& x : r) x *= s;
  return RatPoly(std::move(r));
}

Rat RatPoly::eval(const Rat& t) const {
  Rat acc(0);
  for (size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
  return acc;
}

long double RatPoly::eval_ld(long double t) const {
  long double acc = 0.0L;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * t + rat_to_long_double(c_[i]);
  return acc;
}

RatPoly RatPoly::derivative() const {
  if (c_.size() <= 1) return RatPoly();
  std::vector<Rat> r(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat(static_cast<long>(i));
  return RatPoly(std::move(r));
}

std::pair<RatPoly, RatPoly> RatPoly::divrem(const RatPoly& divisor) const {
  if (divisor.is_zero()) throw std::invalid_argument("polynomial division by zero");
  std::vector<Rat> rem(c_);
  int dd = divisor.degree();
  int dq = degree() - dd;
  if (dq < 0) return {RatPoly(), *this};
  std::vector<Rat> quot(dq + 1, Rat(0));
  const Rat& lead = divisor.c_.back();
  for (int k = dq; k >= 0; --k) {
    if (static_cast<int>(rem.size()) < k + dd + 1) continue;
    Rat f = rem[k + dd] / lead;
    if (f == 0) continue;
    quot[k] = f;
    for (int i = 0; i <= dd; ++i) rem[k + i] -= f * divisor.c_[i];
  }
  return {RatPoly(std::move(quot)), RatPoly(std::move(rem))};
}

RatPoly RatPoly::gcd(const RatPoly& a, const RatPoly& b) {
  RatPoly x = a, y = b;
  while (!y.is_zero()) {
    RatPoly r = x.divrem(y).second;
    // monic normalization keeps coefficient growth in check
    if (!r.is_zero()) r = r * (Rat(1) / r.c_.back());
    x = std::move(y);
    y = std::move(r);
  }
  if (!x.is_zero()) x = x * (Rat(1) / x.c_.back());
  return x;
}

RatPoly RatPoly::squarefree_part() const {
  if (degree() <= 0) return *this;
  RatPoly g = gcd(*this, derivative());
  if (g.degree() <= 0) return *this;
  return divrem(g).first;
}

RatPoly RatPoly::primitive_integer_form() const {
  if (is_zero()) return *this;
  mpz_class den_lcm(1);
  for (const auto& c : c_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<Rat> r(c_);
  for (auto& x : r) x *= Rat(den_lcm);
  mpz_class content(0);
  for (const auto& x : r) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_num().get_mpz_t());
  if (content != 0)
    for (auto& x : r) x /= Rat(content);
  if (r.back() < 0)
    for (auto& x : r) x = -x;
  return RatPoly(std::move(r));
}

namespace {

int sign_of(const Rat& r) { return mpq_sgn(r.get_mpq_t()); }

// Number of sign changes of the Sturm chain at t.
int sturm_variations(const std::vector<RatPoly>& chain, const Rat& t) {
  int vars = 0, prev = 0;
  for (const auto& p : chain) {
    int s = sign_of(p.eval(t));
    if (s != 0) {
      if (prev != 0 && s != prev) ++vars;
      prev = s;
    }
  }
  return vars;
}

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain;
  chain.push_back(p);
  chain.push_back(p.derivative());
  while (!chain.back().is_zero() && chain.back().degree() >= 0) {
    RatPoly r = chain[chain.size() - 2].divrem(chain.back()).second;
    if (r.is_zero()) break;
    r = r * Rat(-1);
    // scale to unit leading coefficient; sign of the scale must stay positive
    r = r * (Rat(1) / abs(r.coeffs().back()));
    chain.push_back(std::move(r));
    if (chain.back().degree() == 0) break;
  }
  return chain;
}

}  // namespace

std::vector<Rat> isolate_real_roots(const RatPoly& p, const Rat& lo, const Rat& hi,
                                    const Rat& width) {
  std::vector<Rat> roots;
  if (p.is_zero()) throw std::invalid_argument("cannot isolate roots of zero polynomial");
  RatPoly sq = p.squarefree_part();
  if (sq.degree() <= 0) return roots;

  // roots exactly at the left endpoint are in [lo, hi); Sturm counts (a, b]
  if (sq.eval(lo) == 0) roots.push_back(lo);

  auto chain = sturm_chain(sq);
  auto count = [&](const Rat& a, const Rat& b) {
    return sturm_variations(chain, a) - sturm_variations(chain, b);
  };

  struct Span {
    Rat a, b;
    int n;
  };
  std::vector<Span> work;
  {
    // shrink b slightly if hi itself is a root: half-open interval
    Rat b = hi;
    if (sq.eval(b) == 0) {
      // nudge inside; width/4 keeps the exclusion below the reporting width
      b = hi - width / 4;
      if (b <= lo) return roots;
    }
    int n = count(lo, b);
    if (n > 0) work.push_back({lo, b, n});
  }

  while (!work.empty()) {
    Span s = work.back();
    work.pop_back();
    if (s.n == 1 && s.b - s.a < width) {
      roots.push_back((s.a + s.b) / 2);
      continue;
    }
    Rat mid = (s.a + s.b) / 2;
    if (sq.eval(mid) == 0) {
      roots.push_back(mid);
      Rat eps = (s.b - s.a) / 1024;
      int nl = count(s.a, mid - eps);
      int nr = count(mid + eps, s.b);
      if (nl > 0) work.push_back({s.a, mid - eps, nl});
      if (nr > 0) work.push_back({mid + eps, s.b, nr});
      continue;
    }
    int nl = count(s.a, mid);
    int nr = s.n - nl;
    if (nl > 0) work.push_back({s.a, mid, nl});
    if (nr > 0) work.push_back({mid, s.b, nr});
  }

  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace knotforge
