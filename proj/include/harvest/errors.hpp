#pragma once

#include <stdexcept>
#include <string>

namespace harvest {

// Failures split into two families so the CLI can map them onto exit codes:
// misuse (bad parameters, configuration) versus numerical failure.
enum class ErrorClass { Validation, Computation };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

#define HARVEST_DEFINE_ERROR(Name, Cls)                                      \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(ErrorClass::Cls, what) {} \
  };

HARVEST_DEFINE_ERROR(InvalidParams, Validation)
HARVEST_DEFINE_ERROR(StabilityViolation, Validation)
HARVEST_DEFINE_ERROR(DomainError, Validation)
HARVEST_DEFINE_ERROR(ConfigError, Validation)
HARVEST_DEFINE_ERROR(UsageError, Validation)
HARVEST_DEFINE_ERROR(CoincidentDetectorsUnregularized, Validation)
HARVEST_DEFINE_ERROR(UnstableSpectrum, Computation)
HARVEST_DEFINE_ERROR(NoInstability, Computation)
HARVEST_DEFINE_ERROR(MaxSubdivisions, Computation)
HARVEST_DEFINE_ERROR(NonFiniteIntegrand, Computation)
HARVEST_DEFINE_ERROR(SlowConvergence, Computation)
HARVEST_DEFINE_ERROR(EmptyResult, Computation)

#undef HARVEST_DEFINE_ERROR

}  // namespace harvest
