#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace curalg {

/// Error codes used across the library. Every throwing operation documents
/// which of these it can raise; the CLI maps them to machine-readable reports.
namespace errc {
inline constexpr const char* AMBIENT_MISMATCH = "AMBIENT_MISMATCH";
inline constexpr const char* NOT_ANTISYMMETRIC = "NOT_ANTISYMMETRIC";
inline constexpr const char* JACOBI_FAILS = "JACOBI_FAILS";
inline constexpr const char* BAD_RANK = "BAD_RANK";
inline constexpr const char* NO_FORM = "NO_FORM";
inline constexpr const char* NOT_UNIQUE = "NOT_UNIQUE";
inline constexpr const char* DEGENERATE = "DEGENERATE";
inline constexpr const char* SIZE_LIMIT = "SIZE_LIMIT";
inline constexpr const char* NOT_IN_F = "NOT_IN_F";
inline constexpr const char* NOT_PERFECT = "NOT_PERFECT";
inline constexpr const char* C1_FAILS = "C1_FAILS";
inline constexpr const char* C2_FAILS = "C2_FAILS";
inline constexpr const char* C3_FAILS = "C3_FAILS";
inline constexpr const char* NO_PREIMAGE = "NO_PREIMAGE";
inline constexpr const char* UNCOVERED_DEGREE = "UNCOVERED_DEGREE";
inline constexpr const char* NO_TRIANGULAR_DATA = "NO_TRIANGULAR_DATA";
inline constexpr const char* IRRATIONAL_EIGENVALUE = "IRRATIONAL_EIGENVALUE";
inline constexpr const char* KER_TAU_NOT_CONTAINED = "KER_TAU_NOT_CONTAINED";
inline constexpr const char* ORBIT_NOT_STABLE = "ORBIT_NOT_STABLE";
inline constexpr const char* NOT_SKEW = "NOT_SKEW";
inline constexpr const char* NOT_CLOSED = "NOT_CLOSED";
inline constexpr const char* NOT_IN_E = "NOT_IN_E";
inline constexpr const char* PRECONDITION = "PRECONDITION";
inline constexpr const char* PARSE_ERROR = "PARSE_ERROR";
inline constexpr const char* DIV_BY_ZERO = "DIV_BY_ZERO";
}  // namespace errc

/// Exception carrying a stable error code plus an integer witness (indices of
/// the offending basis pair, degree, ...) and an optional free-form detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message,
        std::vector<long long> witness = {}, std::string detail = {})
      : std::runtime_error(code + ": " + message),
        code_(std::move(code)),
        witness_(std::move(witness)),
        detail_(std::move(detail)) {}

  const std::string& code() const noexcept { return code_; }
  const std::vector<long long>& witness() const noexcept { return witness_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string code_;
  std::vector<long long> witness_;
  std::string detail_;
};

}  // namespace curalg
