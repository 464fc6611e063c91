#pragma once

#include <utility>
#include <vector>

#include "knotforge/rational.hpp"

namespace knotforge {

/// Dense univariate polynomial with exact rational coefficients.
/// coeff(i) is the coefficient of t^i; the representation never carries a
/// trailing zero, so degree() is exact (-1 for the zero polynomial).
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rat> coeffs);
  static RatPoly constant(const Rat& c);
  // a + b*t
  static RatPoly linear(const Rat& a, const Rat& b);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rat& coeff(int i) const;
  const std::vector<Rat>& coeffs() const { return c_; }

  RatPoly operator+(const RatPoly& o) const;
  RatPoly operator-(const RatPoly& o) const;
  RatPoly operator*(const RatPoly& o) const;
  RatPoly operator*(const Rat& s) const;
  bool operator==(const RatPoly& o) const { return c_ == o.c_; }

  Rat eval(const Rat& t) const;
  long double eval_ld(long double t) const;
  RatPoly derivative() const;

  // {quotient, remainder} over the rationals; divisor must be nonzero.
  std::pair<RatPoly, RatPoly> divrem(const RatPoly& divisor) const;

  // Monic generator of the ideal (a, b); zero if both are zero.
  static RatPoly gcd(const RatPoly& a, const RatPoly& b);

  // p / gcd(p, p'): same roots, all simple.
  RatPoly squarefree_part() const;

  // Integer-scaled copy with content 1 and positive leading coefficient.
  RatPoly primitive_integer_form() const;

 private:
  void strip();
  std::vector<Rat> c_;
};

/// Exact real-root isolation on a half-open interval [lo, hi) via Sturm
/// sequences, then bisection refinement of each isolated root until the
/// enclosing interval is narrower than `width`. Returned midpoints are
/// exact rationals sorted increasingly.
std::vector<Rat> isolate_real_roots(const RatPoly& p, const Rat& lo, const Rat& hi,
                                    const Rat& width);

}  // namespace knotforge
