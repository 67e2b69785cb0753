#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace chipmap {

enum class ErrorKind {
  Validation,
  Infeasible,
  NoFit,
  NoRoute,
  StrictPatchViolation,
  StageOrder,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for every pipeline failure. `stage` names the
/// pipeline stage that raised it and `entity` the offending partition,
/// qubit or link id when one exists.
class CompileError : public std::runtime_error {
 public:
  CompileError(ErrorKind kind, std::string stage, const std::string& message,
               std::optional<long> entity = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }
  std::optional<long> entity() const noexcept { return entity_; }

 private:
  ErrorKind kind_;
  std::string stage_;
  std::optional<long> entity_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& stage, const std::string& message,
                              std::optional<long> entity = std::nullopt) {
  throw CompileError(kind, stage, message, entity);
}

}  // namespace chipmap
