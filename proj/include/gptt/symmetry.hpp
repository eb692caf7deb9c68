#pragma once

#include <optional>
#include <vector>

#include "gptt/core.hpp"

namespace gptt {

struct InvariantReport {
  /// Present iff the invariant state is unique.
  std::optional<StateVec> state;
  /// Dimension of the affine set of normalized fixed points (0 when unique).
  int fixed_dimension = 0;
  /// Basis of the linear fixed-point space (columns).
  Mat basis;
};

InvariantReport invariant_state(const ModelPtr& model);

bool is_transitive(const ModelPtr& model);

/// Orbit of a vector under a finite group, deduplicated.
std::vector<Vec> group_orbit(const ModelSpec& model, const Vec& xi);

struct TwirlResult {
  StateVec state;
  /// False when the invariant set is not a single point; the result is then
  /// the projection onto the fixed-point space.
  bool unique = true;
};

TwirlResult twirl(const StateVec& rho);

struct EquilibriumCheck {
  bool pass = false;
  double residual = 0.0;
};

/// chi_A (x) chi_B against the invariant state of the composite.
EquilibriumCheck informational_equilibrium_check(const ModelPtr& a, const ModelPtr& b);

/// Perfectly distinguishing test for `states`: one effect per state plus the
/// complement (last), or nullopt when none exists.
std::optional<std::vector<EffectVec>> perfectly_distinguishable_search(
    const ModelPtr& model, const std::vector<StateVec>& states);

}  // namespace gptt
