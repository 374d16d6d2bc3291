#ifndef DISCLOCUS_NUMCORE_HPP
#define DISCLOCUS_NUMCORE_HPP

#include <Eigen/Dense>

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>

namespace disclocus {

using Complex = std::complex<double>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using CVec = Vector<Complex>;
using CMat = Matrix<Complex>;
using RVec = Vector<double>;
using RMat = Matrix<double>;

enum class ErrorCode {
  SingularMatrix,
  DimensionMismatch,
  InvalidN,
  DegenerateGamma,
  GenericStartFailed,
  CountUnreliable,
  LabelFailed,
  PointOutsideBox,
  WitnessFailed,
  LineDiscarded,
  InvalidClasses,
  EmptyBank,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Largest entry modulus; 0 for an empty vector.
template <typename Derived>
double inf_norm(const Eigen::MatrixBase<Derived>& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v(i)));
  return m;
}

/// Induced infinity norm (max absolute row sum).
template <typename Derived>
double matrix_inf_norm(const Eigen::MatrixBase<Derived>& a) {
  double m = 0.0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) s += std::abs(a(r, c));
    m = std::max(m, s);
  }
  return m;
}

inline constexpr double kPivotThreshold = 1e-14;

/// Solves A y = b by LU with partial pivoting. Throws SingularMatrix when a
/// pivot falls below kPivotThreshold * ||A||_inf.
template <typename Scalar>
Vector<Scalar> lu_solve(const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "lu_solve expects a square matrix and matching rhs");
  const Eigen::Index n = a.rows();
  if (n == 0) return Vector<Scalar>(0);
  const double scale = matrix_inf_norm(a);
  const double floor = kPivotThreshold * scale;
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw Error(ErrorCode::SingularMatrix, "matrix is zero or non-finite");

  Eigen::PartialPivLU<Matrix<Scalar>> lu(a);
  const auto& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(packed(i, i)) >= floor))
      throw Error(ErrorCode::SingularMatrix, "pivot below threshold at column " + std::to_string(i));
  }
  return lu.solve(b);
}

bool all_finite(const CVec& v);

}  // namespace disclocus

#endif  // DISCLOCUS_NUMCORE_HPP
