#pragma once

#include <stdexcept>
#include <string>

namespace knotforge {

// Domain errors carry a stable name that the CLI surfaces verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define KNOTFORGE_ERROR(NAME)                              \
  class NAME : public Error {                              \
   public:                                                 \
    explicit NAME(const std::string& what = "")            \
        : Error(#NAME, what) {}                            \
  }

KNOTFORGE_ERROR(DegenerateSample);
KNOTFORGE_ERROR(DegeneratePolygon);
KNOTFORGE_ERROR(NonGenericDirection);
KNOTFORGE_ERROR(SuspectGrid);
KNOTFORGE_ERROR(DegenerateAngle);
KNOTFORGE_ERROR(InvalidTorusType);
KNOTFORGE_ERROR(Degenerate);
KNOTFORGE_ERROR(NotPolynomial);
KNOTFORGE_ERROR(NotR2Eligible);
KNOTFORGE_ERROR(NotAKnot);
KNOTFORGE_ERROR(SingularMatrix);
KNOTFORGE_ERROR(BudgetExceeded);
KNOTFORGE_ERROR(InconsistentRules);
KNOTFORGE_ERROR(FixtureError);

#undef KNOTFORGE_ERROR

}  // namespace knotforge
