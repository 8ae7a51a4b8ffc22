#pragma once

#include <stdexcept>
#include <string>

namespace ttm {

/// Base class for all errors raised by the library. `kind()` is a stable
/// machine-readable tag (e.g. "DegenerateInterval") used by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

inline Error make_error(const char* kind, const std::string& what) {
  return Error(kind, std::string(kind) + ": " + what);
}

}  // namespace ttm
