#pragma once

#include <stdexcept>
#include <string>

namespace vsuq {

// Exit codes used by the command-line tool.
enum class ExitCode : int {
  Ok = 0,
  Numerical = 1,
  Usage = 2,
  Dependency = 3,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ExitCode code = ExitCode::Numerical)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Parameter outside the admissible set of a family.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what, ExitCode::Usage) {}
};

/// Requested quantity outside what a family can attain (e.g. Kendall tau).
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& what) : Error(what, ExitCode::Usage) {}
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, ExitCode::Usage) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what, ExitCode::Usage) {}
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class DependencyError : public Error {
 public:
  explicit DependencyError(const std::string& what) : Error(what, ExitCode::Dependency) {}
};

}  // namespace vsuq
