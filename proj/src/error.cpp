#include "usikit/error.hpp"

#include <utility>

namespace usikit {

Error::Error(std::string module, const std::string& message)
    : std::runtime_error(module + ": " + message), module_(std::move(module)), message_(message) {}

}  // namespace usikit
