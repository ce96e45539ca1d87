#pragma once

#include <exception>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_math.h>

namespace vmd::detail {

/// GSL aborts on error by default; every entry point into GSL calls this first.
void disable_gsl_abort();

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
struct QawoTableDeleter {
  void operator()(gsl_integration_qawo_table* t) const { gsl_integration_qawo_table_free(t); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;
using QawoTable = std::unique_ptr<gsl_integration_qawo_table, QawoTableDeleter>;

/// Adapts a C++ callable to gsl_function. Exceptions thrown by the callable are parked
/// and rethrown by `rethrow_if_failed` after GSL returns (they must not cross C frames).
template <class F>
class GslCallback {
 public:
  explicit GslCallback(const F& fn) : fn_(fn) {
    gsl_.function = &GslCallback::trampoline;
    gsl_.params = this;
  }
  gsl_function* get() { return &gsl_; }
  void rethrow_if_failed() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  static double trampoline(double x, void* params) {
    auto* self = static_cast<GslCallback*>(params);
    if (self->error_) return 0.0;
    try {
      return self->fn_(x);
    } catch (...) {
      self->error_ = std::current_exception();
      return 0.0;
    }
  }

  const F& fn_;
  gsl_function gsl_{};
  std::exception_ptr error_;
};

}  // namespace vmd::detail
