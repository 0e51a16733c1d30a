#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tpagg {

enum class ErrorKind {
  MalformedFile,
  MissingTest,
  DuplicateTest,
  UnknownTest,
  EmptyDelta,
  NonPositiveCost,
  MissingCost,
  EmptyTrace,
  MissingTraces,
  SuiteMismatch,
  SingletonEnsemble,
  InvalidParams,
  TooLarge,
  NoFailures,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Broad class of an error, used by the CLI to pick an exit code.
enum class ErrorClass { Input, Config, Internal };

ErrorClass classify(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message,
        std::optional<std::uint32_t> test = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  /// The offending test id, for the per-test validation kinds.
  std::optional<std::uint32_t> test() const noexcept { return test_; }

 private:
  ErrorKind kind_;
  std::optional<std::uint32_t> test_;
};

}  // namespace tpagg
