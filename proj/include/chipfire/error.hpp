#pragma once

#include <stdexcept>
#include <string>

namespace chipfire {

enum class Errc {
  invalid_parameter,
  invalid_divisor,
  invalid_input,
  parse_error,
  resource_limit,
  out_of_domain,
  no_sequence,
  invalid_pair,
};

inline const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::invalid_divisor:   return "invalid-divisor";
    case Errc::invalid_input:     return "invalid-input";
    case Errc::parse_error:       return "parse-error";
    case Errc::resource_limit:    return "resource-limit";
    case Errc::out_of_domain:     return "out-of-domain";
    case Errc::no_sequence:       return "no-sequence";
    case Errc::invalid_pair:      return "invalid-pair";
  }
  return "unknown";
}

/// Every recoverable failure in the library is reported as an Error carrying
/// one of the codes above; the CLI maps codes onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

namespace detail {

// Internal consistency checks that must hold for every input. These stay
// active in release builds.
inline void ensure(bool cond, const char* what) {
  if (!cond) throw std::logic_error(std::string("chipfire invariant violated: ") + what);
}

}  // namespace detail
}  // namespace chipfire
