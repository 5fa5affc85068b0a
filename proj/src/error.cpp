#include "streamfilt/error.hpp"

namespace streamfilt {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::invalid_spec: return "invalid filter spec";
    case Errc::nyquist_violation: return "Nyquist violation";
    case Errc::invariant_violation: return "invariant violation";
    case Errc::shape_mismatch: return "shape mismatch";
    case Errc::rate_mismatch: return "sampling-rate mismatch";
    case Errc::plan_mismatch: return "packet plan mismatch";
    case Errc::undefined_correlation: return "undefined correlation";
    case Errc::file_missing: return "file missing";
    case Errc::malformed_header: return "malformed header";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::io_failure: return "I/O failure";
  }
  return "unknown error";
}

}  // namespace streamfilt
