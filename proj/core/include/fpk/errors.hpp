#ifndef FPK_ERRORS_HPP
#define FPK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fpk {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violated precondition or malformed configuration.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error("config: " + msg) {}
};

/// Non-finite value or unstable evaluation encountered.
class NumericError : public Error {
public:
  explicit NumericError(const std::string& msg) : Error("numeric: " + msg) {}
};

/// Iteration exhausted its budget without meeting the tolerance.
class ConvergenceError : public Error {
public:
  explicit ConvergenceError(const std::string& msg) : Error("no convergence: " + msg) {}
};

/// A converged stationary vector had a nonpositive component.
class NonpositiveError : public Error {
public:
  explicit NonpositiveError(const std::string& msg) : Error("nonpositive: " + msg) {}
};

/// Sparse factorization failed.
class SingularError : public Error {
public:
  explicit SingularError(const std::string& msg) : Error("singular: " + msg) {}
};

/// Problem exceeds the dense-path size limit.
class SizeError : public Error {
public:
  explicit SizeError(const std::string& msg) : Error("size: " + msg) {}
};

/// Two eigenvalues tie for the largest real part.
class DegenerateError : public Error {
public:
  explicit DegenerateError(const std::string& msg) : Error("degenerate: " + msg) {}
};

/// Decay-fit window contains too few usable samples.
class EmptyWindowError : public Error {
public:
  explicit EmptyWindowError(const std::string& msg) : Error("empty window: " + msg) {}
};

/// Required input artifact is absent (report assembly).
class MissingInputError : public Error {
public:
  explicit MissingInputError(const std::string& msg) : Error("missing input: " + msg) {}
};

/// Three-state outcome of a hypothesis or property check.
enum class Verdict { PASS, FAIL, SKIPPED };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PASS: return "PASS";
    case Verdict::FAIL: return "FAIL";
    default: return "SKIPPED";
  }
}

}  // namespace fpk

#endif
