#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gptt/core.hpp"
#include "gptt/spectral.hpp"

namespace gptt {

struct MajorizationCheck {
  bool holds = false;
  /// First prefix length k (1-based) with sum_{i<=k} p < sum_{i<=k} q; 0 if none.
  int violated_prefix = 0;
  /// Smallest prefix-sum difference.
  double slack = 0.0;
};

/// Prefix-sum comparison of the decreasing rearrangements; the shorter
/// vector is padded with zeros. Throws InvalidArgument on a sum mismatch.
MajorizationCheck majorization(const Vec& p, const Vec& q, double tol = kTol);
inline bool majorizes(const Vec& p, const Vec& q, double tol = kTol) { return majorization(p, q, tol).holds; }

/// Doubly stochastic D with q = D p for p, q sorted descending and p
/// majorizing q, built as a product of T-transforms.
Mat t_transform_chain(const Vec& p, const Vec& q);

struct BirkhoffTerm {
  double weight = 0.0;
  /// perm[j] = row of the 1 in column j.
  std::vector<int> perm;
};

Mat permutation_matrix(const std::vector<int>& perm);
bool is_doubly_stochastic(const Mat& d, double tol = 1e-8);
/// sum_k w_k P_k = D with at most (d-1)^2 + 1 terms.
std::vector<BirkhoffTerm> birkhoff_decompose(const Mat& d);

/// Measure-and-prepare unital channel sending rho to sigma, or nullopt when
/// the spectrum of rho does not majorize that of sigma.
std::optional<ChannelMap> build_unital_channel(const StateVec& rho, const StateVec& sigma);

/// Mixture of reversible channels sending rho to sigma with its witness.
/// Needs unrestricted reversibility (UnsupportedError otherwise); nullopt
/// when majorization fails.
std::optional<ChannelMap> build_rare_channel(const StateVec& rho, const StateVec& sigma);

enum class Theory { Rare, Noisy, Unital };
enum class Answer { Yes, No, Unknown };
std::string to_string(Theory t);
std::string to_string(Answer a);
Theory parse_theory(const std::string& s);

struct ConvertibilityVerdict {
  Theory theory = Theory::Unital;
  Answer answer = Answer::Unknown;
  std::optional<ChannelMap> channel;
  /// Human-readable certificate (no) or reason (unknown).
  std::string certificate;
  int violated_prefix = 0;
  /// Per-sector weights of rho and sigma for invariant-mismatch certificates.
  std::optional<Vec> weights_rho, weights_sigma;
};

ConvertibilityVerdict convertible(const StateVec& rho, const StateVec& sigma, Theory theory);

/// Whether a reversible channel of the doubled quantum theory maps rho to
/// sigma: equal spectra and equal per-sector spectra up to the sector swap.
bool rare_equivalent_doubled(const StateVec& rho, const StateVec& sigma);

/// Same invariant for any sectorized model whose reversible maps are block
/// unitaries composed with sector permutations. Returns the unitary when one
/// exists.
std::optional<CMat> sector_equivalence(const StateVec& rho, const StateVec& sigma);

struct UnrestrictedReport {
  std::optional<bool> permutability;
  std::optional<bool> strong_symmetry;
  std::string note;
  /// Two states with equal spectra that no reversible channel connects.
  std::optional<std::pair<StateVec, StateVec>> counterexample;
};

UnrestrictedReport check_unrestricted_reversibility(const ModelPtr& model);

/// rho = 1/2 (|0,0><0,0| + |0,1><0,1|) and sigma = 1/2 |0,0><0,0| + 1/2
/// |1,0><1,0| on a sectorized model with sectors of dimension >= 2.
std::pair<StateVec, StateVec> sector_counterexample(const ModelPtr& model);

}  // namespace gptt
