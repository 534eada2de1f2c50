#include "lw/errors.hpp"

namespace lw {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DegenerateFrame: return "DegenerateFrame";
    case Errc::Syntax: return "SyntaxError";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::Domain: return "DomainError";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::AllDegenerate: return "AllDegenerate";
    case Errc::RatioNotHolomorphic: return "RatioNotHolomorphic";
    case Errc::CaseViolation: return "CaseViolation";
    case Errc::NotSolvable: return "NotSolvable";
    case Errc::PoleContact: return "PoleContact";
    case Errc::NotUmbilicalData: return "NotUmbilicalData";
    case Errc::DegenerateNormal: return "DegenerateNormal";
    case Errc::HypothesisViolation: return "HypothesisViolation";
    case Errc::FamilyPole: return "FamilyPole";
    case Errc::ZeroSolution: return "ZeroSolution";
    case Errc::NotLightlikeH: return "NotLightlikeH";
    case Errc::NoSeedSolutions: return "NoSeedSolutions";
    case Errc::NonConformalGrid: return "NonConformalGrid";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::ProjectionInvalid: return "ProjectionInvalid";
    case Errc::Parse: return "ParseError";
    case Errc::Config: return "ConfigError";
  }
  return "Error";
}

static std::string decorate(Errc code, const std::string& message) {
  return std::string(errc_name(code)) + ": " + message;
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(decorate(code, message)), code_(code) {}

Error::Error(Errc code, const std::string& message, std::size_t location)
    : std::runtime_error(decorate(code, message)),
      code_(code),
      has_location_(true),
      location_(location) {}

}  // namespace lw
