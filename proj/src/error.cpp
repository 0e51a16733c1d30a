#include "tpagg/error.hpp"

namespace tpagg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::MissingTest: return "MissingTest";
    case ErrorKind::DuplicateTest: return "DuplicateTest";
    case ErrorKind::UnknownTest: return "UnknownTest";
    case ErrorKind::EmptyDelta: return "EmptyDelta";
    case ErrorKind::NonPositiveCost: return "NonPositiveCost";
    case ErrorKind::MissingCost: return "MissingCost";
    case ErrorKind::EmptyTrace: return "EmptyTrace";
    case ErrorKind::MissingTraces: return "MissingTraces";
    case ErrorKind::SuiteMismatch: return "SuiteMismatch";
    case ErrorKind::SingletonEnsemble: return "SingletonEnsemble";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NoFailures: return "NoFailures";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

ErrorClass classify(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams:
    case ErrorKind::TooLarge:
      return ErrorClass::Config;
    case ErrorKind::Internal:
      return ErrorClass::Internal;
    default:
      return ErrorClass::Input;
  }
}

static std::string decorate(ErrorKind kind, const std::string& message,
                            std::optional<std::uint32_t> test) {
  std::string out(to_string(kind));
  if (test) out += "(" + std::to_string(*test) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

Error::Error(ErrorKind kind, std::string message,
             std::optional<std::uint32_t> test)
    : std::runtime_error(decorate(kind, message, test)),
      kind_(kind),
      test_(test) {}

}  // namespace tpagg
