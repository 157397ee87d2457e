#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slicer {

enum class Errc {
  InvalidArgument,
  NotFound,
  Duplicate,
  // model
  EmptySlice,
  InvalidProfile,
  UnknownService,
  MissingServiceSla,
  SlaViolatesProfile,
  // template
  SyntaxError,
  DanglingReference,
  MissingSizing,
  // lifecycle
  RoleDenied,
  TemplateRejected,
  InvalidTransition,
  UncertifiedVf,
  EmptyService,
  PlanInvalid,
  PartialFailure,
  // infra
  InsufficientCapacity,
  UnknownAllocation,
  Unreachable,
  // placement
  MissingFootprint,
  // store
  IoFailure,
  SchemaMismatch,
  SequenceGap,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace slicer
