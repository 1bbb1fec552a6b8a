#pragma once

#include <stdexcept>
#include <string>

namespace orient {

// Caller misuse: malformed files, out-of-range arguments, contract violations.
// The CLI maps this to exit code 2; domain failures (graph lacks the structure
// an operation needs) are ordinary return values, never exceptions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline auto require_input(bool ok, const std::string& what) -> void {
  if (!ok) throw InputError(what);
}

}  // namespace orient
