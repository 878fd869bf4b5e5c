#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sps {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

enum class ErrorKind {
  SyntaxError,
  UnknownVariable,
  NotHomogeneous,
  ZeroPolynomial,
  DimensionMismatch,
  BudgetExceeded,
  EmptyAlphabet,
  AxiomViolation,
  InsufficientLevels,
  OutOfRange,
  NotTemperleyLieb,
  TraceBelowTwo,
  InconsistentCharacterizations,
  QOutOfRange,
  DecompositionMismatch,
  NotGeneric,
  NonUnitalSeries,
  NotUnitary,
  ZeroRowOrColumn,
  InvariantViolation,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorKind::AxiomViolation: return "AxiomViolation";
    case ErrorKind::InsufficientLevels: return "InsufficientLevels";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NotTemperleyLieb: return "NotTemperleyLieb";
    case ErrorKind::TraceBelowTwo: return "TraceBelowTwo";
    case ErrorKind::InconsistentCharacterizations: return "InconsistentCharacterizations";
    case ErrorKind::QOutOfRange: return "QOutOfRange";
    case ErrorKind::DecompositionMismatch: return "DecompositionMismatch";
    case ErrorKind::NotGeneric: return "NotGeneric";
    case ErrorKind::NonUnitalSeries: return "NonUnitalSeries";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::ZeroRowOrColumn: return "ZeroRowOrColumn";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` carries the error class.
/// Parse errors also carry a 1-based line and column when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  Error(ErrorKind kind, const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(std::string(to_string(kind)) + " at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        kind_(kind),
        line_(line),
        column_(column) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

struct ToleranceConfig {
  double rank_rel_tol = 1e-10;
  double check_abs_tol = 1e-8;

  void validate() const {
    if (!(rank_rel_tol > 0.0) || !(check_abs_tol > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
    }
  }
};

/// Integer power with overflow guard; returns std::nullopt on overflow.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base) return std::nullopt;
    result *= base;
  }
  return result;
}

inline Index ipow(Index base, int exp) {
  Index result = 1;
  for (int i = 0; i < exp; ++i) result *= base;
  return result;
}

/// Frobenius norm; an upper bound for the operator norm used in residual checks.
inline double residual_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.norm(); }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace sps
