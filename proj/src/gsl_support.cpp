#include "gsl_support.hpp"

#include <mutex>

namespace vmd::detail {

void disable_gsl_abort() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

}  // namespace vmd::detail
