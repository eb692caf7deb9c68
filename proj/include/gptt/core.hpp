#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gptt/error.hpp"
#include "gptt/linalg.hpp"

namespace gptt {

enum class Family {
  Classical,
  Quantum,
  Rebit,
  DoubledQuantum,
  ExtendedClassical,
  Hybrid,  // Kronecker composite mixing classical and quantum factors
  SquareBit,
  RestrictedTrit,
  DiamondBit,
  Polytope,
};

std::string to_string(Family f);

/// How two systems of a family combine into a composite.
enum class CompositionKind {
  None,       // single-system models
  Kronecker,  // ordinary tensor product, sectors multiply
  Residue,    // sectors grouped by (i + j) mod max(N, M)
};

/// Block structure of a quantum-like system: the full Hilbert space is split
/// into superselection sectors, and states are block-diagonal Hermitian
/// matrices. Coordinates are laid out sector by sector; inside a sector of
/// size n the first n coordinates are the diagonal entries, followed by
/// sqrt(2)*Re and sqrt(2)*Im (the latter omitted for real layouts) of each
/// upper-triangle entry in row-major order. With this layout the Euclidean
/// dot product equals the trace inner product.
class SectorLayout {
 public:
  SectorLayout(std::vector<std::vector<int>> sectors, bool real);

  int hilbert_dim() const { return hilbert_dim_; }
  int sector_count() const { return static_cast<int>(sectors_.size()); }
  /// Dimension of sector k (all built-in layouts use isomorphic sectors).
  int sector_dim(int k = 0) const { return static_cast<int>(sectors_[k].size()); }
  const std::vector<int>& sector(int k) const { return sectors_[k]; }
  const std::vector<std::vector<int>>& sectors() const { return sectors_; }
  int sector_of(int basis_index) const { return sector_of_[basis_index]; }
  int offset(int k) const { return offsets_[k]; }
  int block_coords(int k) const;
  int vector_dim() const { return vector_dim_; }
  bool real() const { return real_; }

  /// Hermitian matrix -> coordinates. Entries outside the sector blocks are
  /// ignored; see off_block_norm.
  Vec to_coords(const CMat& h) const;
  CMat to_matrix(const Vec& coords) const;
  /// Frobenius norm of the part of `h` outside the sector blocks (or of the
  /// imaginary part for real layouts).
  double off_block_norm(const CMat& h) const;
  /// The k-th sector block of a coordinate vector as a small Hermitian matrix.
  CMat block(const Vec& coords, int k) const;

 private:
  std::vector<std::vector<int>> sectors_;
  std::vector<int> sector_of_;
  std::vector<int> offsets_;
  int hilbert_dim_ = 0;
  int vector_dim_ = 0;
  bool real_ = false;
};

struct ConeSpec {
  enum class Kind { VertexGenerated, BlockPositive };
  Kind kind = Kind::VertexGenerated;
  Mat generators;  // D x k extreme rays (vertex kind)
  std::shared_ptr<const SectorLayout> layout;  // block kind

  static ConeSpec vertices(Mat generators);
  static ConeSpec blocks(std::shared_ptr<const SectorLayout> layout);
};

struct GroupSpec {
  enum class Kind { Finite, Parametric, Structured };
  Kind kind = Kind::Finite;
  std::vector<Mat> generators;  // finite groups only
  std::string sampler;          // parametric/structured tag
};

struct ModelFlags {
  bool sharp_with_purification = false;
  bool unrestricted_reversibility = false;
  bool sectorized = false;
};

class ModelSpec;
using ModelPtr = std::shared_ptr<const ModelSpec>;

struct CompositeInfo {
  ModelPtr a;
  ModelPtr b;
  CompositionKind rule = CompositionKind::Kronecker;
};

/// A finite-dimensional system of some theory. Immutable once built; shared
/// through ModelPtr. Only the group closure is computed lazily and cached.
class ModelSpec {
 public:
  std::string id;
  Family family = Family::Polytope;
  std::map<std::string, int> params;
  int vector_dim = 0;
  int capacity = 0;
  Vec unit_effect;
  ConeSpec state_cone;
  ConeSpec effect_cone;
  /// Normalized pure states as columns; empty for continuous families.
  Mat pure_vertices;
  GroupSpec group;
  ModelFlags flags;
  CompositionKind composes_by = CompositionKind::None;
  std::shared_ptr<const SectorLayout> layout;  // quantum-like models
  std::optional<CompositeInfo> composite;
  /// Unique invariant state when it exists.
  std::optional<Vec> invariant;

  bool quantum_like() const { return layout != nullptr; }
  const SectorLayout& sectors() const;

  /// All elements of a finite group, computed once (BFS over generators).
  const std::vector<Mat>& group_elements() const;

 private:
  mutable std::once_flag closure_once_;
  mutable std::vector<Mat> closure_;
};

bool same_system(const ModelSpec& a, const ModelSpec& b);
inline bool same_system(const ModelPtr& a, const ModelPtr& b) { return same_system(*a, *b); }

class StateVec {
 public:
  /// Rejects wrong dimensions and vectors of norm below kZeroNorm.
  StateVec(ModelPtr model, Vec coords);

  const ModelPtr& model() const { return model_; }
  const Vec& coords() const { return coords_; }
  /// Pairing with the unit effect.
  double trace() const;
  bool normalized(double tol = kTol) const;

 private:
  ModelPtr model_;
  Vec coords_;
};

class EffectVec {
 public:
  EffectVec(ModelPtr model, Vec coords);

  const ModelPtr& model() const { return model_; }
  const Vec& coords() const { return coords_; }

 private:
  ModelPtr model_;
  Vec coords_;
};

EffectVec unit_effect(const ModelPtr& model);

enum ChannelTag : unsigned {
  kReversible = 1u << 0,
  kUnital = 1u << 1,
  kRare = 1u << 2,
  kMeasureAndPrepare = 1u << 3,
};

/// One element of a random-reversible mixture.
struct RareTerm {
  double weight = 0.0;
  Mat matrix;
  std::optional<CMat> unitary;
};

class ChannelMap {
 public:
  /// Checks the channel condition and every claimed tag; throws
  /// InvalidArgument on violation. `kraus` (full Hilbert-space operators) is
  /// optional and enables tensoring on non-locally-tomographic composites.
  static ChannelMap make(ModelPtr in, ModelPtr out, Mat matrix, unsigned tags = 0,
                         std::vector<RareTerm> witness = {}, std::vector<CMat> kraus = {});

  static ChannelMap identity(const ModelPtr& model);
  /// Unitary channel rho -> U rho U^dagger on a quantum-like model. Throws if
  /// U does not respect the sector structure.
  static ChannelMap unitary(const ModelPtr& model, const CMat& u);
  /// Channel given by Kraus operators between quantum-like models.
  static ChannelMap from_kraus(const ModelPtr& in, const ModelPtr& out,
                               const std::vector<CMat>& kraus, unsigned tags = 0);

  const ModelPtr& input() const { return in_; }
  const ModelPtr& output() const { return out_; }
  const Mat& matrix() const { return matrix_; }
  unsigned tags() const { return tags_; }
  bool has(ChannelTag t) const { return (tags_ & t) != 0; }
  const std::vector<RareTerm>& witness() const { return witness_; }
  const std::vector<CMat>& kraus() const { return kraus_; }
  /// Inverse matrix for reversible channels.
  const std::optional<Mat>& inverse() const { return inverse_; }

  /// max_j |(u_out M)_j - (u_in)_j|
  double channel_residual() const;

 private:
  ModelPtr in_, out_;
  Mat matrix_;
  unsigned tags_ = 0;
  std::vector<RareTerm> witness_;
  std::vector<CMat> kraus_;
  std::optional<Mat> inverse_;
};

/// Superoperator of X -> sum_k K X K^dagger in coordinates. Throws
/// InvalidArgument if the map leaks outside the output sector blocks.
Mat superoperator(const SectorLayout& in, const SectorLayout& out, const std::vector<CMat>& kraus);

double pairing(const EffectVec& a, const StateVec& rho);
double pairing(const EffectVec& a, const Vec& xi);

/// Operational (base) norm of a vector in the span of states.
double state_norm(const ModelSpec& model, const Vec& xi);
/// Operational norm of an element of the effect span: sup |(X|rho)|.
double effect_norm(const ModelSpec& model, const Vec& x);

StateVec apply(const ChannelMap& c, const StateVec& rho);
ChannelMap compose(const ChannelMap& second, const ChannelMap& first);
ChannelMap tensor(const ChannelMap& c1, const ChannelMap& c2);

enum class Factor { A, B };
StateVec marginal(const StateVec& rho_ab, Factor keep);
/// Same for raw coordinates (used for signed vectors).
Vec partial_trace(const ModelSpec& composite, const Vec& coords, Factor keep);

struct Membership {
  bool inside = false;
  /// Zero when inside; otherwise the separation margin (L1 violation for
  /// vertex cones, most negative block eigenvalue for positivity cones).
  double distance = 0.0;
};
Membership cone_membership(const Vec& xi, const ConeSpec& cone, double tol = kTol);

/// Basis of { x : G x = x for all generators } (columns).
Mat fixed_point_space(const std::vector<Mat>& generators, int dim);

/// Perfectly distinguishing test for `states` in a vertex-generated effect
/// cone: effects a_1..a_m plus a complement a_0, all in the effect cone,
/// summing to u, with (a_i|rho_j) = delta_ij. Returns nullopt if infeasible.
std::optional<std::vector<Vec>> distinguishing_test_lp(const ModelSpec& model,
                                                       const std::vector<Vec>& states);

}  // namespace gptt
