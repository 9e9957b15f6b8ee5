#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mtmod {

/// Base of every error raised by the toolkit. Each subclass names one
/// failure category that callers may want to tell apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error { using Error::Error; };
class SchemaError : public Error { using Error::Error; };
class MissingBaselineError : public Error { using Error::Error; };
class ParamError : public Error { using Error::Error; };
class InvalidTextError : public Error { using Error::Error; };
class CloudInfeasibleError : public Error { using Error::Error; };
class CompositionError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class DecodeError : public Error { using Error::Error; };
class ProtocolError : public Error { using Error::Error; };
class AuthError : public Error { using Error::Error; };
class BindError : public Error { using Error::Error; };

class GlyphCoverageError : public Error {
 public:
  explicit GlyphCoverageError(char32_t codepoint);
  char32_t codepoint() const noexcept { return codepoint_; }

 private:
  char32_t codepoint_;
};

/// Network-level failure talking to a moderation target. `status` is the
/// HTTP status when one was received, 0 otherwise.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int status, bool retryable)
      : Error(what), status_(status), retryable_(retryable) {}
  int status() const noexcept { return status_; }
  bool retryable() const noexcept { return retryable_; }

 private:
  int status_;
  bool retryable_;
};

}  // namespace mtmod
