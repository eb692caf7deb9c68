#include "gptt/lp.hpp"

#include <limits>
#include <vector>

namespace gptt::lp {
namespace {

constexpr double kPivotEps = 1e-11;

// Tableau: rows 0..m-1 constraints, row m objective (reduced costs).
// Columns 0..cols-1 variables, last column right-hand side.
struct Tableau {
  Mat t;
  std::vector<int> basis;
  int rows() const { return static_cast<int>(basis.size()); }
  int rhs() const { return static_cast<int>(t.cols()) - 1; }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[r] = c;
  }

  // Bland's rule; `allowed` caps the entering columns. Returns false when
  // the objective is unbounded below.
  bool run(int allowed) {
    const int m = rows();
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (t(m, j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t(i, enter) > kPivotEps) {
          const double ratio = t(i, rhs()) / t(i, enter);
          if (ratio < best - 1e-14 ||
              (ratio <= best + 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

Result minimize(const Mat& a, const Vec& b, const Vec& c, double feas_tol) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  Result out;
  out.x = Vec::Zero(n);

  Tableau tab;
  tab.t = Mat::Zero(m + 1, n + m + 1);
  tab.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    const double sign = b(i) < 0 ? -1.0 : 1.0;
    tab.t.block(i, 0, 1, n) = sign * a.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = sign * b(i);
    tab.basis[i] = n + i;
  }
  // Phase one: minimize the sum of artificials.
  for (int i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (int i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;
  tab.run(n + m);
  out.infeasibility = -tab.t(m, n + m);
  if (out.infeasibility > feas_tol) {
    out.status = Status::Infeasible;
    return out;
  }

  // Drive artificials out of the basis; drop redundant rows.
  for (int i = 0; i < tab.rows(); ++i) {
    if (tab.basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > 1e-9) {
        col = j;
        break;
      }
    }
    if (col >= 0) tab.pivot(i, col);
  }
  std::vector<int> keep;
  for (int i = 0; i < tab.rows(); ++i)
    if (tab.basis[i] < n) keep.push_back(i);

  Tableau p2;
  const int m2 = static_cast<int>(keep.size());
  p2.t = Mat::Zero(m2 + 1, n + 1);
  p2.basis.resize(m2);
  for (int k = 0; k < m2; ++k) {
    p2.t.block(k, 0, 1, n) = tab.t.block(keep[k], 0, 1, n);
    p2.t(k, n) = tab.t(keep[k], n + m);
    p2.basis[k] = tab.basis[keep[k]];
  }
  p2.t.block(m2, 0, 1, n) = c.transpose();
  for (int k = 0; k < m2; ++k) {
    const double cb = c(p2.basis[k]);
    if (cb != 0.0) p2.t.row(m2) -= cb * p2.t.row(k);
  }
  if (!p2.run(n)) {
    out.status = Status::Unbounded;
    return out;
  }
  for (int k = 0; k < m2; ++k) out.x(p2.basis[k]) = std::max(0.0, p2.t(k, n));
  out.objective = c.dot(out.x);
  out.status = Status::Optimal;
  return out;
}

}  // namespace gptt::lp
