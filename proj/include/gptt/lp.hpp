#pragma once

#include "gptt/linalg.hpp"

namespace gptt::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Vec x;
  double objective = 0.0;
  /// Optimum of the phase-one problem: the minimal L1 violation of A x = b
  /// over x >= 0. Zero (within tolerance) iff the system is feasible.
  double infeasibility = 0.0;
};

/// Dense two-phase simplex with Bland's rule for
///   minimize c.x  subject to  A x = b,  x >= 0.
/// Meant for the small problems that come up in cone membership and
/// distinguishability searches (tens of variables).
Result minimize(const Mat& a, const Vec& b, const Vec& c, double feas_tol = 1e-9);

/// Feasibility only; objective is ignored.
inline Result feasible(const Mat& a, const Vec& b, double feas_tol = 1e-9) {
  return minimize(a, b, Vec::Zero(a.cols()), feas_tol);
}

}  // namespace gptt::lp
