#pragma once

#include <stdexcept>
#include <string>

namespace dcflowgen {

// Raised for invalid inputs and failed pipeline stages. The message is
// prefixed with the stage that failed, e.g. "deconvolve: ...".
class Error : public std::runtime_error {
 public:
  Error(const std::string& stage, const std::string& detail)
      : std::runtime_error(stage + ": " + detail),
        stage_(stage),
        detail_(detail) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string stage_;
  std::string detail_;
};

}  // namespace dcflowgen
