#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lw {

enum class Errc {
  DegenerateFrame,
  Syntax,
  UnknownIdentifier,
  Domain,
  QuadratureFailure,
  SingularSystem,
  AllDegenerate,
  RatioNotHolomorphic,
  CaseViolation,
  NotSolvable,
  PoleContact,
  NotUmbilicalData,
  DegenerateNormal,
  HypothesisViolation,
  FamilyPole,
  ZeroSolution,
  NotLightlikeH,
  NoSeedSolutions,
  NonConformalGrid,
  GridMismatch,
  ProjectionInvalid,
  Parse,
  Config,
};

const char* errc_name(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above. Parser
// failures additionally carry a byte offset, file readers a 1-based line.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Error(Errc code, const std::string& message, std::size_t location);

  Errc code() const noexcept { return code_; }
  bool has_location() const noexcept { return has_location_; }
  std::size_t location() const noexcept { return location_; }

 private:
  Errc code_;
  bool has_location_ = false;
  std::size_t location_ = 0;
};

}  // namespace lw
