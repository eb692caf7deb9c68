#include "gptt/symmetry.hpp"

#include "gptt/zoo.hpp"

namespace gptt {

InvariantReport invariant_state(const ModelPtr& model) {
  InvariantReport out;
  if (model->quantum_like()) {
    out.state = StateVec(model, *model->invariant);
    out.basis = *model->invariant;
    return out;
  }
  out.basis = fixed_point_space(model->group.generators, model->vector_dim);
  if (out.basis.cols() == 0) throw Error("group has no fixed points in the state space");
  out.fixed_dimension = static_cast<int>(out.basis.cols()) - 1;
  if (model->invariant) out.state = StateVec(model, *model->invariant);
  return out;
}

std::vector<Vec> group_orbit(const ModelSpec& model, const Vec& xi) {
  std::vector<Vec> orbit;
  for (const Mat& g : model.group_elements()) {
    Vec y = g * xi;
    bool seen = false;
    for (const Vec& o : orbit) seen = seen || (o - y).cwiseAbs().maxCoeff() < 1e-9;
    if (!seen) orbit.push_back(std::move(y));
  }
  return orbit;
}

bool is_transitive(const ModelPtr& model) {
  if (model->quantum_like()) return true;
  const Mat& v = model->pure_vertices;
  return group_orbit(*model, v.col(0)).size() == static_cast<std::size_t>(v.cols());
}

TwirlResult twirl(const StateVec& rho) {
  const ModelPtr& model = rho.model();
  if (model->quantum_like()) {
    // Per-sector unitary twirl, then averaging over sector permutations.
    return {StateVec(model, rho.trace() * *model->invariant), true};
  }
  const auto& elems = model->group_elements();
  Vec acc = Vec::Zero(model->vector_dim);
  for (const Mat& g : elems) acc += g * rho.coords();
  acc /= static_cast<double>(elems.size());
  return {StateVec(model, acc), model->invariant.has_value()};
}

EquilibriumCheck informational_equilibrium_check(const ModelPtr& a, const ModelPtr& b) {
  const ModelPtr ab = compose_systems(a, b);
  const StateVec prod = product_state(ab, chi(a), chi(b));
  const StateVec target = chi(ab);
  EquilibriumCheck out;
  out.residual = (prod.coords() - target.coords()).cwiseAbs().maxCoeff();
  out.pass = out.residual <= 1e-8;
  return out;
}

namespace {

// Projector onto the support of a positive block-diagonal operator, built
// sector by sector so it stays inside the effect space.
CMat support_projector(const SectorLayout& layout, const Vec& coords) {
  const int h = layout.hilbert_dim();
  CMat p = CMat::Zero(h, h);
  for (int k = 0; k < layout.sector_count(); ++k) {
    const auto eig = hermitian_eig(layout.block(coords, k), layout.real());
    const auto& idx = layout.sector(k);
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
      if (eig.values(j) <= 1e-10) continue;
      const CVec v = eig.vectors.col(j);
      for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) p(idx[r], idx[c]) += v(r) * std::conj(v(c));
    }
  }
  return p;
}

}  // namespace

std::optional<std::vector<EffectVec>> perfectly_distinguishable_search(
    const ModelPtr& model, const std::vector<StateVec>& states) {
  for (const auto& s : states)
    if (!same_system(s.model(), model)) throw DimensionError("state from another system");
  std::vector<EffectVec> out;
  if (model->quantum_like()) {
    const auto& layout = model->sectors();
    std::vector<CMat> projectors;
    for (const auto& s : states) projectors.push_back(support_projector(layout, s.coords()));
    for (std::size_t i = 0; i < projectors.size(); ++i)
      for (std::size_t j = i + 1; j < projectors.size(); ++j)
        if ((projectors[i] * projectors[j]).cwiseAbs().maxCoeff() > 1e-8) return std::nullopt;
    const int h = layout.hilbert_dim();
    CMat rest = CMat::Identity(h, h);
    for (const auto& p : projectors) {
      out.push_back(effect_from_matrix(model, p));
      rest -= p;
    }
    out.push_back(effect_from_matrix(model, rest));
    return out;
  }
  std::vector<Vec> raw;
  for (const auto& s : states) raw.push_back(s.coords());
  auto test = distinguishing_test_lp(*model, raw);
  if (!test) return std::nullopt;
  for (auto& e : *test) out.emplace_back(model, std::move(e));
  return out;
}

}  // namespace gptt
