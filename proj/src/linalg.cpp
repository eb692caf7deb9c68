#include "gptt/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace gptt {

Mat null_space(const Mat& m, double tol) {
  if (m.rows() == 0) return Mat::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * scale) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

HermitianEig hermitian_eig(const CMat& h, bool real) {
  const Eigen::Index n = h.rows();
  HermitianEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  Vec values;
  CMat vectors;
  if (real) {
    Mat sym = 0.5 * (h.real() + h.real().transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    values = es.eigenvalues();
    vectors = es.eigenvectors().cast<Complex>();
  } else {
    CMat herm = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(herm);
    values = es.eigenvalues();
    vectors = es.eigenvectors();
  }
  // Eigen returns ascending order.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = values(n - 1 - i);
    out.vectors.col(i) = vectors.col(n - 1 - i);
  }
  return out;
}

Vec sorted_desc(const Vec& v) {
  Vec out = v;
  std::sort(out.data(), out.data() + out.size(), std::greater<>());
  return out;
}

}  // namespace gptt
