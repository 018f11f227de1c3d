#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ltlrec {

/// Failure classes. The CLI maps each one to its own exit code.
enum class ErrorKind {
  Parse,
  Validation,
  Infeasible,
  InfiniteDistance,
  NotInJumpSet,
  NotHurwitz,
  Numerical,
  InitialStateOutsideDomain,
  PolicyViolation,
  DepthExceeded,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::InfiniteDistance: return "InfiniteDistance";
    case ErrorKind::NotInJumpSet: return "NotInJumpSet";
    case ErrorKind::NotHurwitz: return "NotHurwitz";
    case ErrorKind::Numerical: return "NumericalError";
    case ErrorKind::InitialStateOutsideDomain: return "InitialStateOutsideDomain";
    case ErrorKind::PolicyViolation: return "PolicyViolation";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Aggregates every violated invariant found while loading or validating.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(ErrorKind::Validation, join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace ltlrec
