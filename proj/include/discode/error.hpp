#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace discode {

enum class ErrorKind {
  Parse,      // unparseable text
  Range,      // value outside the allowed domain
  Dimension,  // vector/matrix sizes disagree
  Input,      // malformed or missing input data
  Config,     // inconsistent options or flags
  Numeric,    // non-finite values during computation
  Metric,     // statistic undefined for the given data
  Io,         // filesystem failures
};

/// Short machine-readable tag for an error kind ("parse", "range", ...).
std::string_view error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace discode
