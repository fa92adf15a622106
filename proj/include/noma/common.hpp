#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#define NOMA_VERSION "0.1.0"

namespace noma {

/// Thrown when a problem instance has no feasible solution (rate targets
/// exceeding a power cap, unsatisfiable SINR constraints, not enough
/// antennas for zero-forcing, ...). Distinct from argument errors so
/// callers can map it to a dedicated exit code.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what_arg)
      : std::runtime_error(what_arg) {}
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// 2^x - 1 without cancellation for small x.
inline double exp2m1(double x) { return std::expm1(x * std::numbers::ln2); }

/// log2(1 + x) without cancellation for small x.
inline double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

}  // namespace noma
