#include "discode/error.hpp"

namespace discode {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Range: return "range";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Input: return "input";
    case ErrorKind::Config: return "config";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Metric: return "metric";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace discode
