#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gptt/core.hpp"
#include "gptt/zoo.hpp"

namespace gptt {

struct SpectralLevel {
  double value = 0.0;
  int multiplicity = 0;
  /// Sum of the eigenstates sharing this eigenvalue.
  Vec projector;
};

struct Diagonalization {
  ModelPtr model;
  /// Descending; sums to the trace of the input.
  Vec eigenvalues;
  std::vector<StateVec> eigenstates;
  std::vector<EffectVec> dagger_effects;
  std::vector<SpectralLevel> reduced;
  /// Hilbert-space eigenvectors (quantum-like models only), each supported
  /// in a single sector.
  std::vector<CVec> vectors;

  /// sum_i lambda_i alpha_i
  Vec reconstruct() const;
};

enum class DiagMethod { Auto, Fast, Peel };

/// Spectral decomposition of a state. Peel runs the generic
/// maximum-eigenvalue loop; Fast uses per-sector Hermitian eigensolvers and
/// is only available for quantum-like models. Polytope models always peel and
/// throw DiagonalizationFailure when the loop does not end in a set of
/// perfectly distinguishable pure states.
Diagonalization diagonalize(const StateVec& rho, DiagMethod method = DiagMethod::Auto);

/// Same for an arbitrary real combination of states of a quantum-like model
/// (observables, differences of states). Eigenvalues may be negative.
Diagonalization diagonalize_vector(const ModelPtr& model, const Vec& xi);

struct Peel {
  double p = 0.0;
  StateVec alpha;
  /// (rho - p alpha) / (1 - p); absent when rho is pure.
  std::optional<StateVec> rest;
};

Peel max_eigenvalue_peel(const StateVec& rho);

/// The normalized pure effect pairing to one with a normalized pure state.
EffectVec dagger(const StateVec& pure);
/// sum_i x_i alpha_i^dagger for xi = sum_i x_i alpha_i.
EffectVec dagger_extend(const ModelPtr& model, const Vec& xi);

/// sum_i f(x_i) alpha_i^dagger. Throws DomainError where f is not finite.
EffectVec functional_calculus(const Diagonalization& x, const std::function<double(double)>& f);

/// T_ij = (a_i^dagger | b_j)
Mat transition_matrix(const MaximalSet& a, const MaximalSet& b);
Mat transition_matrix(const Diagonalization& a, const Diagonalization& b);

struct SchmidtDecomposition {
  /// Squared Schmidt coefficients, descending, strictly positive.
  Vec coefficients;
  std::vector<StateVec> states_a, states_b;
  /// Pure effects a_i, b_i with (a_i (x) b_j | Psi) = p_i delta_ij.
  std::vector<EffectVec> measurement_a, measurement_b;
};

SchmidtDecomposition schmidt(const StateVec& psi);

/// Unit vector psi with rho = |psi><psi|; throws InvalidArgument if rho is
/// not pure.
CVec state_vector(const StateVec& rho);

bool is_pure(const StateVec& rho, double tol = 1e-9);

}  // namespace gptt
