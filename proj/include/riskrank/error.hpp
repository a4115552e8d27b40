#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace riskrank {

enum class ErrorCode {
  structural,          // malformed or incomplete data structure
  dimension_mismatch,  // vector length differs from ground-set size
  invalid_weights,     // weight vector outside the simplex
  invalid_argument,    // parameter outside its documented domain
  no_capacity,         // target has nothing to aggregate
  invalid_network,     // hierarchy violations or structural drift
  degenerate_fit,      // logistic fit on single-class data
  insufficient_data,   // not enough history for a backtest
  parse,               // input file does not match its schema
  io,                  // file could not be opened or written
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::structural: return "structural";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::invalid_weights: return "invalid_weights";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::no_capacity: return "no_capacity";
    case ErrorCode::invalid_network: return "invalid_network";
    case ErrorCode::degenerate_fit: return "degenerate_fit";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

/// Exception type thrown by every operation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class Severity { warning, error };

struct Violation {
  Severity severity = Severity::error;
  std::string kind;     // short machine-readable tag, e.g. "monotonicity"
  std::string message;  // human-readable detail
};

/// Accumulates violations found by a validation pass. Warnings do not make
/// a report invalid.
class ValidationReport {
 public:
  void add(std::string kind, std::string message, Severity severity = Severity::error) {
    violations_.push_back({severity, std::move(kind), std::move(message)});
  }

  void merge(const ValidationReport& other) {
    violations_.insert(violations_.end(), other.violations_.begin(), other.violations_.end());
  }

  bool valid() const {
    for (const auto& v : violations_) {
      if (v.severity == Severity::error) return false;
    }
    return true;
  }

  bool has(std::string_view kind) const {
    for (const auto& v : violations_) {
      if (v.kind == kind) return true;
    }
    return false;
  }

  std::size_t error_count() const {
    std::size_t count = 0;
    for (const auto& v : violations_) count += v.severity == Severity::error ? 1 : 0;
    return count;
  }

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace riskrank
