#pragma once

#include <stdexcept>
#include <string>

namespace hofent {

// Base class for every failure reported by the library. Subclasses name the
// failure category so callers (and the CLI) can react per kind.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HOFENT_DEFINE_ERROR(Name)                \
  class Name : public Error {                    \
   public:                                       \
    using Error::Error;                          \
  }

HOFENT_DEFINE_ERROR(DomainError);
HOFENT_DEFINE_ERROR(UnsupportedOrderError);
HOFENT_DEFINE_ERROR(RepresentationError);
HOFENT_DEFINE_ERROR(ResolutionError);
HOFENT_DEFINE_ERROR(BudgetError);
HOFENT_DEFINE_ERROR(PartitionMismatchError);
HOFENT_DEFINE_ERROR(AdmissibilityError);
HOFENT_DEFINE_ERROR(BoundaryHitError);
HOFENT_DEFINE_ERROR(ConnectivityError);
HOFENT_DEFINE_ERROR(NoCycleError);
HOFENT_DEFINE_ERROR(GeometryError);
HOFENT_DEFINE_ERROR(PrecisionError);
HOFENT_DEFINE_ERROR(HorizonError);
HOFENT_DEFINE_ERROR(InvalidArgument);
HOFENT_DEFINE_ERROR(FormatError);
HOFENT_DEFINE_ERROR(FileNotFoundError);

#undef HOFENT_DEFINE_ERROR

}  // namespace hofent
