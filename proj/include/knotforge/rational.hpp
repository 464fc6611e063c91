#pragma once

#include <gmpxx.h>

#include <string>

namespace knotforge {

using Rat = mpq_class;

// "p/q", "-p/q" or a plain integer string.
Rat parse_rational(const std::string& text);
std::string rational_to_string(const Rat& r);

// Conversion preserving the full 64-bit long double mantissa (mpq_get_d
// would round through a 53-bit double first).
long double mpz_to_long_double(const mpz_class& z);
long double rat_to_long_double(const Rat& r);
inline double rat_to_double(const Rat& r) {
  return static_cast<double>(rat_to_long_double(r));
}

}  // namespace knotforge
