#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace gptt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Absolute tolerance for equality of probabilities and coordinates.
inline constexpr double kTol = 1e-9;
/// Vectors below this norm are treated as zero states.
inline constexpr double kZeroNorm = 1e-12;
/// Eigenvalues closer than this are grouped into one degenerate block.
inline constexpr double kDegeneracyGap = 1e-8;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerance scaled to the magnitude of the compared quantities.
inline double scaled_tol(double magnitude, double tol = kTol) {
  return magnitude > 1.0 ? tol * magnitude : tol;
}

/// Kronecker product of two dense matrices.
template <typename Derived1, typename Derived2>
auto kron(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  using Scalar = typename Derived1::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                           a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Orthonormal basis of the null space of `m` (columns), via full SVD.
Mat null_space(const Mat& m, double tol = 1e-10);

/// Eigenpairs of a Hermitian matrix, eigenvalues descending. When `real` is
/// set the matrix is treated as real symmetric and eigenvectors stay real.
struct HermitianEig {
  Vec values;
  CMat vectors;
};
HermitianEig hermitian_eig(const CMat& h, bool real = false);

/// Sorted copy, descending.
Vec sorted_desc(const Vec& v);

}  // namespace gptt
