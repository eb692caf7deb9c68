#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "gptt/core.hpp"
#include "gptt/spectral.hpp"
#include "gptt/zoo.hpp"

namespace gptt {

/// Renyi entropy (natural log) of a probability vector; alpha in [0, inf].
double renyi(const Vec& p, double alpha);
double entropy(const StateVec& rho, double alpha = 1.0);

/// Relative entropy value that may be +infinity when the support of rho
/// meets the kernel of sigma.
struct RelativeEntropy {
  double value = 0.0;
  bool infinite = false;
};

RelativeEntropy relative_entropy(const StateVec& rho, const StateVec& sigma);

struct BipartiteEntropies {
  double s_ab = 0.0, s_a = 0.0, s_b = 0.0;
  double mutual = 0.0;       // S_A + S_B - S_AB
  double conditional = 0.0;  // S_AB - S_B
};

BipartiteEntropies bipartite_entropies(const StateVec& rho_ab);

/// Outcome probabilities of a test; throws InvalidArgument unless the effects
/// sum to the unit effect.
Vec measurement_distribution(const std::vector<EffectVec>& test, const StateVec& rho);

struct MonotoneAudit {
  double spectral_value = 0.0;   // f(spectrum)
  double spectral_measured = 0.0;  // f of the spectral measurement outcome
  double min_measured = 0.0;     // smallest f(q) over sampled pure tests
  double min_prepared = 0.0;     // smallest f(q) over sampled pure decompositions
  double worst_violation = 0.0;  // max(0, f(p) - f(q)) over all samples
  int trials = 0;
  bool pass = false;
};

/// Samples random rank-one tests and pure decompositions of rho and checks
/// that the Renyi-alpha value of every outcome distribution stays at or above
/// the value on the spectrum, which the spectral test attains.
MonotoneAudit monotone_audit(const StateVec& rho, double alpha, int trials, Rng& rng);

/// Diagonal observable: energies attached to a maximal set.
struct Observable {
  ModelPtr model;
  Vec energies;
  std::vector<StateVec> states;
  std::vector<EffectVec> daggers;

  EffectVec effect() const;
  double expectation(const StateVec& rho) const;
};

/// Energies on the canonical maximal set of the model.
Observable observable(const ModelPtr& model, const Vec& energies);
/// Observable from an element of the effect space of a quantum-like model.
Observable observable_from_effect(const ModelPtr& model, const Vec& coords);

struct ThermoConfig {
  double boltzmann_k = 1.0;
};

/// Gibbs weights e^{-beta E_i} / Z, with beta = +-inf giving the uniform
/// distribution over the lowest / highest level.
Vec gibbs_weights(const Vec& energies, double beta);
StateVec gibbs_state(const Observable& h, double beta);
/// ln Z, computed with the minimum energy shifted out.
double log_partition(const Vec& energies, double beta);
double mean_energy(const Vec& energies, double beta);
/// Inverse of mean_energy; |E(beta) - E| <= 1e-10, +-inf at the boundaries.
double beta_from_energy(const Vec& energies, double e);

struct MaxEntropyAudit {
  double beta = 0.0;
  double gibbs_entropy = 0.0;
  double identity_residual = 0.0;  // S(gamma) - (beta E + ln Z)
  double max_violation = 0.0;      // max(0, S(rho) - S(gamma))
  double max_shell_error = 0.0;    // max |<H>_rho - E|
  int trials = 0;
  bool pass = false;
};

MaxEntropyAudit max_entropy_audit(const Observable& h, double e, int trials, Rng& rng);

struct ThermoLedger {
  double beta = 0.0;
  double kt = 0.0;           // 1 / beta
  double temperature = 0.0;  // 1 / (k beta)
  double delta_e_env = 0.0;
  double ds_system = 0.0;  // S(rho_S) - S(rho'_S)
  double mutual_term = 0.0;
  RelativeEntropy relent_term;
  /// Delta E - kT (dS + I + D); at beta = 0 the energy side is multiplied by
  /// beta, leaving -(dS + I + D).
  double equality_residual = 0.0;
  bool equality_checked = true;
  /// Delta E - kT dS; non-negative up to tolerance.
  double bound_slack = 0.0;
  /// (S'_S - S_S) + (S'_E - S_E)
  double second_law_sum = 0.0;
};

/// Runs rho_S (x) gamma_E through a reversible channel on the composite
/// S x E and evaluates every term of the Landauer equality.
ThermoLedger landauer_ledger(const StateVec& rho_s, const Observable& h_env, double beta,
                             const ChannelMap& u, const ThermoConfig& cfg = {});

struct ErasureReport {
  /// Ledger of the joint system SM against the environment.
  ThermoLedger ledger;
  double delta_e_env = 0.0;
  double s_system_before = 0.0, s_system_after = 0.0;
  double s_memory_before = 0.0, s_memory_after = 0.0;
  double cond_before = 0.0, cond_after = 0.0;  // S(S|M)
  /// kT (S(S|M)_before - S(S|M)_after)
  double bound_rhs = 0.0;
  bool memory_ok = false;
  bool bound_ok = false;
};

/// Erases rho_S by purifying it into a memory copy of the system and
/// rotating the purification onto a fixed pure product state; the
/// environment is left untouched.
ErasureReport erasure_demo(const StateVec& rho_s, const Observable& h_env, double beta,
                           const ThermoConfig& cfg = {});

}  // namespace gptt
