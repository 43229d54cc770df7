#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace qlc {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* Non-fatal diagnostics (for example, evaluating a localized map outside its
 * ball). Default handler discards; the CLI installs a stderr sink. */
void set_warning_handler(std::function<void(const std::string&)> handler);
void warn(const std::string& message);

}  // namespace qlc
