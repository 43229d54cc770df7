#include "qlc/diag.hpp"

#include <utility>

namespace qlc {

namespace {
std::function<void(const std::string&)>& handler_slot() {
  static std::function<void(const std::string&)> handler;
  return handler;
}
}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) {
  handler_slot() = std::move(handler);
}

void warn(const std::string& message) {
  auto& handler = handler_slot();
  if (handler) handler(message);
}

}  // namespace qlc
