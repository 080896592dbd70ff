#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairwork {

enum class ErrorKind {
  parse,
  invalid_instance,
  equal_to_demand_with_zero_demand,
  assumption_violated,
  infeasible,
  domain_guard_violated,
  not_converged,
  missing_prices,
  instance_mismatch,
  bad_gamma,
  shape_mismatch,
  unsatisfiable_config,
  precondition,
};

std::string_view error_kind_name(ErrorKind kind);

/// Domain error raised by the solvers and I/O layer. The CLI turns these into
/// exit code 1 with a JSON error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fairwork
