#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace streamfilt {

enum class Errc {
  invalid_argument,
  invalid_spec,
  nyquist_violation,
  invariant_violation,
  shape_mismatch,
  rate_mismatch,
  plan_mismatch,
  undefined_correlation,
  file_missing,
  malformed_header,
  dimension_mismatch,
  io_failure,
};

std::string_view to_string(Errc code) noexcept;

// Validation errors map to CLI exit code 1, I/O errors to exit code 2.
constexpr bool is_io_error(Errc code) noexcept {
  return code == Errc::file_missing || code == Errc::malformed_header ||
         code == Errc::dimension_mismatch || code == Errc::io_failure;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace streamfilt
