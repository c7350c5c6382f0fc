#include "idslab/error.hpp"

namespace idslab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Argument: return "argument error";
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Codec: return "codec error";
    case ErrorKind::Format: return "format error";
    case ErrorKind::Io: return "io error";
    case ErrorKind::Training: return "training error";
    case ErrorKind::Numeric: return "numeric error";
    case ErrorKind::Capacity: return "capacity error";
    case ErrorKind::Config: return "config error";
  }
  return "error";
}

}  // namespace idslab
