#pragma once

#include <stdexcept>
#include <string>

namespace usikit {

// Every failure raised by the library carries the module that produced it so
// the CLI can attribute errors ("corpus: duplicate ...").
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message);

  const std::string& module() const noexcept { return module_; }
  // what() without the "module: " prefix
  const std::string& message() const noexcept { return message_; }

 private:
  std::string module_;
  std::string message_;
};

}  // namespace usikit
