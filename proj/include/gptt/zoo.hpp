#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gptt/core.hpp"

namespace gptt {

// Built-in theories.
ModelPtr classical(int d);
ModelPtr quantum(int n);
/// Real quantum theory on R^n; rebit() is the n = 2 case.
ModelPtr real_quantum(int n);
inline ModelPtr rebit() { return real_quantum(2); }
/// Two isomorphic quantum sectors of dimension n, parity composition.
ModelPtr doubled_quantum(int n);
/// N isomorphic sectors of dimension n, residue-class composition. N sectors
/// of dimension 1 look exactly like a classical N-level system.
ModelPtr extended_classical(int sectors, int sector_dim);
ModelPtr square_bit();
ModelPtr restricted_trit();
ModelPtr diamond_bit();

/// User polytope model. Vertices and effect generators are columns.
ModelPtr polytope(std::string id, Vec unit_effect, Mat state_vertices, Mat effect_generators,
                  std::vector<Mat> group_generators);

/// kind in {classical, quantum, rebit, real_quantum, doubled_quantum,
/// extended_classical, square_bit, restricted_trit, diamond_bit}; params
/// named d, n, N as in the builders.
ModelPtr build_model(const std::string& kind, const std::map<std::string, int>& params);

/// Model-spec JSON: {"kind": ..., "params": {...}} or a full polytope
/// description with vector_dim/unit_effect/state_vertices/effect_generators/
/// group_generators (row-major matrices).
ModelPtr model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const ModelSpec& m);

/// "quantum:3", "classical:2", "doubled_quantum:2", "extended_classical:3:1",
/// "rebit", "square_bit", ..., or a path to a model JSON file.
ModelPtr parse_model_ref(const std::string& ref);

ModelPtr compose_systems(const ModelPtr& a, const ModelPtr& b);

/// Probability carried by each superselection sector.
Vec sector_weights(const StateVec& rho);

struct MaximalSet {
  std::vector<StateVec> states;
  std::vector<EffectVec> daggers;
};
/// A set of d perfectly distinguishable pure states with the effects of
/// their distinguishing test (summing to u).
MaximalSet pure_maximal_set(const ModelPtr& model);

// Helpers for quantum-like models.
StateVec state_from_matrix(const ModelPtr& model, const CMat& rho);
EffectVec effect_from_matrix(const ModelPtr& model, const CMat& e);
CMat to_matrix(const StateVec& rho);
CMat to_matrix(const EffectVec& e);
/// |psi><psi| for a unit vector psi supported in a single sector.
StateVec pure_state(const ModelPtr& model, const CVec& psi);
/// Normalized invariant state; throws StructureError if not unique.
StateVec chi(const ModelPtr& model);

StateVec product_state(const ModelPtr& composite, const StateVec& a, const StateVec& b);
EffectVec product_effect(const ModelPtr& composite, const EffectVec& a, const EffectVec& b);
/// Exchange of the two factors of A x A.
ChannelMap swap_channel(const ModelPtr& composite);

// Seeded samplers.
using Rng = std::mt19937_64;
CMat random_unitary(int n, Rng& rng, bool real = false);
/// Random reversible transformation of a quantum-like model in the
/// structured form (block unitaries composed with a sector permutation), or
/// a random element of a finite group.
CMat random_reversible_unitary(const ModelSpec& model, Rng& rng);
ChannelMap random_reversible(const ModelPtr& model, Rng& rng);
StateVec random_state(const ModelPtr& model, Rng& rng);
StateVec random_pure_state(const ModelPtr& model, Rng& rng);
Vec random_distribution(int d, Rng& rng);

}  // namespace gptt
