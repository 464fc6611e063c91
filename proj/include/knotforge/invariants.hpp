#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knotforge/diagram.hpp"

namespace knotforge::invariants {

/// Integer Laurent polynomial, exponents [lo, lo + coeffs.size() - 1].
/// Leading and trailing coefficients are nonzero unless the polynomial is
/// zero.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(int lo, std::vector<long long> coeffs);
  static LaurentPoly constant(long long c);
  static LaurentPoly monomial(long long c, int exponent);

  bool is_zero() const { return c_.empty(); }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
  long long coeff(int exponent) const;
  const std::vector<long long>& coeffs() const { return c_; }

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  bool operator==(const LaurentPoly& o) const { return lo_ == o.lo_ && c_ == o.c_; }

  long long eval_at_one() const;
  long long eval_at_minus_one() const;

  /// Multiply by the unit +-t^k so that the exponent range is symmetric
  /// about zero and the value at t=1 is +1. Knot Alexander polynomials
  /// always admit this form; anything else raises SingularMatrix.
  LaurentPoly normalized() const;

  std::string to_string() const;  // e.g. "-t^-1 + 3 - t"

 private:
  void strip();
  int lo_ = 0;
  std::vector<long long> c_;
};

/// Alexander polynomial of a knot diagram: Wirtinger-style crossing
/// relations over the arcs broken at underpasses give an n x n matrix over
/// Z[t, 1/t]; one row and column are deleted and the determinant is taken by
/// fraction-free (Bareiss) elimination, then normalized.
LaurentPoly alexander_polynomial(const diagram::KnotDiagram& d);

/// |Alexander(-1)|.
long long determinant(const diagram::KnotDiagram& d);

/// min{2p,q} torus knot Alexander polynomial (t^{pq}-1)(t-1) /
/// ((t^p-1)(t^q-1)), normalized. Used as an ingestion cross-check.
LaurentPoly torus_alexander(int p, int q);

/// Alexander polynomial of the 2-bridge knot b(p, q) from the Minkus sum
/// formula, normalized. Exercised by the fixture generator and ingestion
/// tests.
LaurentPoly two_bridge_alexander(long p, long q);

struct KnotTableEntry {
  std::string name;
  int crossing_number = 0;
  int bridge_index = 0;
  std::string marker;  // star | diamond | times | circ | circ_star | circ_diamond
  bool two_bridge = false;
  std::optional<std::pair<int, int>> torus;
  int edge_bound = 0;
  LaurentPoly alexander;
  int range_lo = 0, range_hi = 0;
};

class KnotTable {
 public:
  /// CSV: name,crossings,bridge,marker,two_bridge,torus_p,torus_q,
  /// edge_bound,alexander_coeffs,range_lo,range_hi. Ingestion validates the
  /// entry invariants, cross-checks torus rows against the closed form, and
  /// precomputes the classes of entries sharing an Alexander polynomial.
  static KnotTable load_csv(const std::string& path);

  const std::vector<KnotTableEntry>& entries() const { return entries_; }
  const KnotTableEntry* find(const std::string& name) const;
  /// Groups (size >= 2) of names sharing a normalized Alexander polynomial.
  const std::vector<std::vector<std::string>>& duplicate_classes() const { return dups_; }

 private:
  std::vector<KnotTableEntry> entries_;
  std::vector<std::vector<std::string>> dups_;
};

/// All table entries whose normalized Alexander polynomial matches the
/// diagram's. A non-singleton result is a genuine ambiguity class; an empty
/// result means the knot is not in the table (or has more than 9 crossings).
std::vector<KnotTableEntry> identify(const diagram::KnotDiagram& d, const KnotTable& table);
std::vector<KnotTableEntry> identify_by_polynomial(const LaurentPoly& normalized,
                                                   const KnotTable& table);

}  // namespace knotforge::invariants
