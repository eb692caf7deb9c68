#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gptt/linalg.hpp"

namespace oracle {

using gptt::CMat;
using gptt::Complex;
using gptt::Mat;
using gptt::Vec;

// Cyclic Jacobi rotations on a real symmetric matrix; eigenvalues descending.
inline Vec jacobi_eigenvalues(Mat a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  Vec d = a.diagonal();
  std::sort(d.data(), d.data() + n, std::greater<double>());
  return d;
}

// Eigenvalues of a Hermitian matrix through its real 2n x 2n embedding
// [[Re, -Im], [Im, Re]], whose spectrum repeats each eigenvalue twice.
inline Vec hermitian_eigenvalues(const CMat& h) {
  const Eigen::Index n = h.rows();
  Mat big(2 * n, 2 * n);
  big << h.real(), -h.imag(), h.imag(), h.real();
  const Vec all = jacobi_eigenvalues(big);
  Vec out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = all(2 * i);
  return out;
}

inline CMat random_density(int n, std::mt19937_64& rng, bool real = false) {
  std::normal_distribution<double> g;
  CMat w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = real ? Complex(g(rng), 0) : Complex(g(rng), g(rng));
  CMat rho = w * w.adjoint();
  return rho / rho.trace().real();
}

// f(H) for Hermitian H through an eigendecomposition done here.
template <typename F>
CMat matrix_function(const CMat& h, F f) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  Vec v = es.eigenvalues();
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f(v(i));
  return es.eigenvectors() * v.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

// Relative entropy tr rho (log rho - log sigma) for full-rank sigma.
inline double quantum_relative_entropy(const CMat& rho, const CMat& sigma) {
  auto xlog = [](double x) { return x > 1e-300 ? std::log(x) : 0.0; };
  const CMat lr = matrix_function(rho, xlog);
  const CMat ls = matrix_function(sigma, [](double x) { return std::log(x); });
  return (rho * (lr - ls)).trace().real();
}

inline double shannon(const Vec& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0) h -= p(i) * std::log(p(i));
  return h;
}

// q lies in the convex hull of the permutations of p (d = 3), tested on
// triangles of permuted points in the plane sum = 1.
inline bool in_permutohedron3(const Vec& p, const Vec& q) {
  std::vector<Vec> pts;
  std::vector<int> idx{0, 1, 2};
  do {
    Vec x(3);
    x << p(idx[0]), p(idx[1]), p(idx[2]);
    pts.push_back(x);
  } while (std::next_permutation(idx.begin(), idx.end()));
  if ((p - Vec::Constant(3, p.mean())).norm() < 1e-12) return (q - p).norm() < 1e-9;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      for (std::size_t c = b + 1; c < pts.size(); ++c) {
        Mat m(3, 3);
        m << pts[a](0), pts[b](0), pts[c](0), pts[a](1), pts[b](1), pts[c](1), 1, 1, 1;
        if (std::abs(m.determinant()) < 1e-14) continue;
        Vec rhs(3);
        rhs << q(0), q(1), 1;
        const Vec w = m.fullPivLu().solve(rhs);
        if (w.minCoeff() >= -1e-10) return true;
      }
  return false;
}

}  // namespace oracle
