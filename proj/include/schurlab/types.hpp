#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schurlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Malformed matrix / dimension mismatch.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid argument value (negative time, p < 1, complex where real required, ...).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured size cap would be exceeded.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested Hilbert-space embedding does not exist; carries the coefficient
// vector violating the defining quadratic form when one is known.
struct EmbeddingInfeasibleError : std::runtime_error {
  explicit EmbeddingInfeasibleError(const std::string& msg,
                                    std::optional<ComplexVector> witness = {})
      : std::runtime_error(msg), cnd_witness(std::move(witness)) {}
  std::optional<ComplexVector> cnd_witness;
};

// Schatten exponent p in [1, inf]; infinity is encoded explicitly.
class SchattenIndex {
 public:
  SchattenIndex() : p_(2.0) {}
  explicit SchattenIndex(double p) : p_(p) {
    if (std::isnan(p) || p < 1.0) {
      throw InputError("Schatten index requires p >= 1");
    }
  }
  static SchattenIndex infinity() {
    return SchattenIndex(std::numeric_limits<double>::infinity());
  }
  double p() const { return p_; }
  bool is_infinite() const { return std::isinf(p_); }
  bool is(double v) const { return p_ == v; }
  bool operator==(const SchattenIndex& o) const { return p_ == o.p_; }

 private:
  double p_;
};

// Tolerances are absolute slacks. The default eigenvalue slack for a given
// matrix is 1e-9 times its max-abs entry; classification is never exact-zero.
struct ToleranceConfig {
  double eig_tol = 1e-9;
  double residual_tol = 1e-6;
  int max_iter = 20000;

  void validate() const {
    if (eig_tol < 0 || residual_tol < 0) {
      throw InputError("tolerances must be nonnegative");
    }
    if (max_iter < 1) {
      throw InputError("max_iter must be at least 1");
    }
  }

  static ToleranceConfig defaults_for(double max_abs_entry) {
    ToleranceConfig tol;
    tol.eig_tol = 1e-9 * max_abs_entry;
    return tol;
  }
};

// Verdict of a kernel / symbol classification. On "no" the witness is a
// coefficient vector realising a strict violation of the defining quadratic
// form (when the form is real-valued); margin is the signed slack, positive
// meaning the property holds with room to spare.
struct ClassificationResult {
  bool yes = false;
  double margin = 0.0;
  std::optional<ComplexVector> witness;
};

// Certified two-sided bound on a multiplier norm. lower always comes from an
// explicitly evaluated test matrix (attached when available), upper from an
// explicit factorization; exact is set when the two meet.
struct NormReport {
  SchattenIndex p;
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  std::optional<ComplexMatrix> lower_witness;
};

}  // namespace schurlab
