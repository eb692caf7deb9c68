#include "gptt/thermo.hpp"

#include <algorithm>
#include <cmath>

namespace gptt {

// Spectra come out of eigensolvers with ~1e-16 noise on zero eigenvalues; for
// alpha < 1 that noise would show up as sqrt-sized terms.
constexpr double kSupportCutoff = 1e-13;

double renyi(const Vec& p, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("Renyi order must be non-negative");
  const Vec q = (p.array() > kSupportCutoff).select(p, 0.0);
  if (alpha == 0.0) {
    int support = 0;
    for (Eigen::Index i = 0; i < q.size(); ++i) support += q(i) > 0.0 ? 1 : 0;
    return std::log(static_cast<double>(std::max(support, 1)));
  }
  if (std::isinf(alpha)) return -std::log(q.maxCoeff());
  if (alpha == 1.0) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i)
      if (q(i) > 0.0) h -= q(i) * std::log(q(i));
    return h;
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (q(i) > 0.0) s += std::pow(q(i), alpha);
  return std::log(s) / (1.0 - alpha);
}

double entropy(const StateVec& rho, double alpha) { return renyi(diagonalize(rho).eigenvalues, alpha); }

RelativeEntropy relative_entropy(const StateVec& rho, const StateVec& sigma) {
  if (!same_system(rho.model(), sigma.model())) throw DimensionError("relative entropy across systems");
  const Diagonalization dr = diagonalize(rho);
  const Diagonalization ds = diagonalize(sigma);
  const Mat t = transition_matrix(ds, dr);
  const Vec& p = dr.eigenvalues;
  const Vec& q = ds.eigenvalues;
  RelativeEntropy out;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    if (p(j) <= 1e-12) continue;
    acc += p(j) * std::log(p(j));
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (t(i, j) <= 1e-12) continue;
      if (q(i) <= 1e-12) {
        out.infinite = true;
        out.value = kInf;
        return out;
      }
      acc -= p(j) * t(i, j) * std::log(q(i));
    }
  }
  out.value = acc;
  return out;
}

BipartiteEntropies bipartite_entropies(const StateVec& rho_ab) {
  BipartiteEntropies e;
  e.s_ab = entropy(rho_ab);
  e.s_a = entropy(marginal(rho_ab, Factor::A));
  e.s_b = entropy(marginal(rho_ab, Factor::B));
  e.mutual = e.s_a + e.s_b - e.s_ab;
  e.conditional = e.s_ab - e.s_b;
  return e;
}

Vec measurement_distribution(const std::vector<EffectVec>& test, const StateVec& rho) {
  if (test.empty()) throw InvalidArgument("empty test");
  Vec sum = Vec::Zero(rho.model()->vector_dim);
  Vec q(static_cast<Eigen::Index>(test.size()));
  for (std::size_t k = 0; k < test.size(); ++k) {
    sum += test[k].coords();
    q(static_cast<Eigen::Index>(k)) = pairing(test[k], rho);
  }
  if ((sum - rho.model()->unit_effect).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidArgument("test effects do not sum to the unit effect");
  return q;
}

namespace {

// Rows of a random isometry restricted to one sector: vectors e_r with
// sum_r e_r e_r^dagger = identity on the sector.
std::vector<CVec> random_rank_one_resolution(const SectorLayout& layout, int k, Rng& rng) {
  const auto& idx = layout.sector(k);
  const int n = static_cast<int>(idx.size());
  std::uniform_int_distribution<int> extra(0, n);
  const int m = n + extra(rng);
  const CMat w = random_unitary(m, rng, layout.real()).leftCols(n);
  std::vector<CVec> out;
  for (int r = 0; r < m; ++r) {
    CVec e = CVec::Zero(layout.hilbert_dim());
    for (int i = 0; i < n; ++i) e(idx[i]) = std::conj(w(r, i));
    out.push_back(std::move(e));
  }
  return out;
}

CMat psd_sqrt(const CMat& h, bool real) {
  const auto eig = hermitian_eig(h, real);
  const Vec s = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * s.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace

MonotoneAudit monotone_audit(const StateVec& rho, double alpha, int trials, Rng& rng) {
  const ModelPtr& model = rho.model();
  if (!model->quantum_like()) throw UnsupportedError("monotone audit needs a quantum-like model");
  const auto& layout = model->sectors();
  const Diagonalization d = diagonalize(rho);
  MonotoneAudit out;
  out.trials = trials;
  out.spectral_value = renyi(d.eigenvalues, alpha);
  out.spectral_measured = renyi(measurement_distribution(d.dagger_effects, rho), alpha);
  out.min_measured = out.min_prepared = kInf;
  const CMat r = to_matrix(rho);
  const CMat root = psd_sqrt(r, layout.real());
  double reconstruction = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<CVec> vecs;
    for (int k = 0; k < layout.sector_count(); ++k)
      for (auto& v : random_rank_one_resolution(layout, k, rng)) vecs.push_back(std::move(v));
    std::vector<EffectVec> test;
    for (const auto& v : vecs) test.push_back(effect_from_matrix(model, v * v.adjoint()));
    const double fm = renyi(measurement_distribution(test, rho), alpha);

    // Pure decomposition rho = sum_r |phi_r><phi_r| with phi_r = sqrt(rho) e_r.
    Vec q(static_cast<Eigen::Index>(vecs.size()));
    CMat rebuilt = CMat::Zero(r.rows(), r.cols());
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      const CVec phi = root * vecs[i];
      q(static_cast<Eigen::Index>(i)) = phi.squaredNorm();
      rebuilt += phi * phi.adjoint();
    }
    reconstruction = std::max(reconstruction, (rebuilt - r).cwiseAbs().maxCoeff());
    const double fp = renyi(q, alpha);
    out.min_measured = std::min(out.min_measured, fm);
    out.min_prepared = std::min(out.min_prepared, fp);
    out.worst_violation = std::max({out.worst_violation, out.spectral_value - fm, out.spectral_value - fp});
  }
  out.pass = out.worst_violation <= 1e-8 && reconstruction <= 1e-9 &&
             std::abs(out.spectral_measured - out.spectral_value) <= 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// Observables and Gibbs states

EffectVec Observable::effect() const {
  Vec acc = Vec::Zero(model->vector_dim);
  for (std::size_t i = 0; i < daggers.size(); ++i) acc += energies(static_cast<Eigen::Index>(i)) * daggers[i].coords();
  return EffectVec(model, acc);
}

double Observable::expectation(const StateVec& rho) const { return pairing(effect(), rho); }

Observable observable(const ModelPtr& model, const Vec& energies) {
  const MaximalSet set = pure_maximal_set(model);
  if (static_cast<std::size_t>(energies.size()) != set.states.size())
    throw DimensionError("expected " + std::to_string(set.states.size()) + " energies for " + model->id);
  return Observable{model, energies, set.states, set.daggers};
}

Observable observable_from_effect(const ModelPtr& model, const Vec& coords) {
  const Diagonalization d = diagonalize_vector(model, coords);
  return Observable{model, d.eigenvalues, d.eigenstates, d.dagger_effects};
}

Vec gibbs_weights(const Vec& energies, double beta) {
  if (std::isnan(beta)) throw InvalidArgument("beta is NaN");
  const double lo = energies.minCoeff();
  const double hi = energies.maxCoeff();
  Vec w(energies.size());
  if (std::isinf(beta)) {
    const double target = beta > 0 ? lo : hi;
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::abs(energies(i) - target) <= 1e-12 ? 1.0 : 0.0;
  } else {
    const double shift = beta >= 0 ? lo : hi;
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * (energies(i) - shift));
  }
  return w / w.sum();
}

double log_partition(const Vec& energies, double beta) {
  if (!std::isfinite(beta)) throw DomainError("ln Z diverges at infinite beta", beta);
  const double shift = beta >= 0 ? energies.minCoeff() : energies.maxCoeff();
  double z = 0.0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) z += std::exp(-beta * (energies(i) - shift));
  return -beta * shift + std::log(z);
}

double mean_energy(const Vec& energies, double beta) { return gibbs_weights(energies, beta).dot(energies); }

StateVec gibbs_state(const Observable& h, double beta) {
  const Vec w = gibbs_weights(h.energies, beta);
  Vec acc = Vec::Zero(h.model->vector_dim);
  for (std::size_t i = 0; i < h.states.size(); ++i) acc += w(static_cast<Eigen::Index>(i)) * h.states[i].coords();
  return StateVec(h.model, acc);
}

double beta_from_energy(const Vec& energies, double e) {
  const double lo = energies.minCoeff();
  const double hi = energies.maxCoeff();
  if (hi - lo < 1e-12) throw InvalidArgument("observable is fully degenerate");
  if (e < lo - 1e-12 || e > hi + 1e-12) throw DomainError("energy outside [E_min, E_max]", e);
  if (e <= lo + 1e-12) return kInf;
  if (e >= hi - 1e-12) return -kInf;
  // mean_energy decreases in beta.
  double a = -1.0, b = 1.0;
  while (mean_energy(energies, a) < e) a *= 2.0;
  while (mean_energy(energies, b) > e) b *= 2.0;
  for (int it = 0; it < 500 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double mid = 0.5 * (a + b);
    const double m = mean_energy(energies, mid);
    if (m == e) return mid;
    (m > e ? a : b) = mid;
  }
  const double mid = 0.5 * (a + b);
  return std::abs(mid) < 1e-15 ? 0.0 : mid;
}

MaxEntropyAudit max_entropy_audit(const Observable& h, double e, int trials, Rng& rng) {
  MaxEntropyAudit out;
  out.trials = trials;
  out.beta = beta_from_energy(h.energies, e);
  const StateVec gamma = gibbs_state(h, out.beta);
  out.gibbs_entropy = entropy(gamma);
  if (std::isfinite(out.beta)) {
    out.identity_residual = out.gibbs_entropy - (out.beta * e + log_partition(h.energies, out.beta));
  } else {
    const Vec w = gibbs_weights(h.energies, out.beta);
    out.identity_residual = out.gibbs_entropy - std::log(static_cast<double>((w.array() > 0).count()));
  }
  Eigen::Index imin = 0, imax = 0;
  h.energies.minCoeff(&imin);
  h.energies.maxCoeff(&imax);
  const Vec ground = h.states[static_cast<std::size_t>(imin)].coords();
  const Vec top = h.states[static_cast<std::size_t>(imax)].coords();
  const double e_lo = h.energies(imin), e_hi = h.energies(imax);
  const EffectVec he = h.effect();
  for (int t = 0; t < trials; ++t) {
    Vec x;
    if (t % 2 == 0 || !h.model->quantum_like()) {
      const Vec w = random_distribution(static_cast<int>(h.energies.size()), rng);
      x = Vec::Zero(h.model->vector_dim);
      for (std::size_t i = 0; i < h.states.size(); ++i) x += w(static_cast<Eigen::Index>(i)) * h.states[i].coords();
    } else {
      x = random_state(h.model, rng).coords();
    }
    // Mix toward the lowest or highest level; the energy is affine in the
    // mixing weight, so the shell is hit exactly.
    const double er = pairing(he, x);
    if (er > e) {
      const double s = (er - e) / (er - e_lo);
      x = (1.0 - s) * x + s * ground;
    } else if (er < e) {
      const double s = (e - er) / (e_hi - er);
      x = (1.0 - s) * x + s * top;
    }
    const StateVec rho(h.model, x);
    out.max_shell_error = std::max(out.max_shell_error, std::abs(pairing(he, rho) - e));
    out.max_violation = std::max(out.max_violation, entropy(rho) - out.gibbs_entropy);
  }
  out.pass = out.max_violation <= 1e-8 && std::abs(out.identity_residual) <= 1e-9 && out.max_shell_error <= 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// Landauer

namespace {

double inverse_beta(double beta) { return std::isinf(beta) ? 0.0 : 1.0 / beta; }

// Every term of the ledger from the initial system state, the initial
// environment state and the final joint state.
ThermoLedger ledger_from(const StateVec& rho_s, const StateVec& gamma, const StateVec& joint_after,
                         const Observable& h_env, double beta, const ThermoConfig& cfg) {
  if (!(cfg.boltzmann_k > 0)) throw InvalidArgument("Boltzmann constant must be positive");
  ThermoLedger l;
  l.beta = beta;
  const StateVec s_after = marginal(joint_after, Factor::A);
  const StateVec e_after = marginal(joint_after, Factor::B);
  const double s_before = entropy(rho_s);
  const double s_after_v = entropy(s_after);
  const double env_before = entropy(gamma);
  const double env_after = entropy(e_after);
  l.delta_e_env = h_env.expectation(e_after) - h_env.expectation(gamma);
  l.ds_system = s_before - s_after_v;
  l.mutual_term = s_after_v + env_after - entropy(joint_after);
  l.relent_term = relative_entropy(e_after, gamma);
  l.second_law_sum = (s_after_v - s_before) + (env_after - env_before);
  const double sum = l.ds_system + l.mutual_term + l.relent_term.value;
  if (beta == 0.0) {
    l.kt = kInf;
    l.temperature = kInf;
    l.equality_residual = -sum;
    l.bound_slack = -l.ds_system;
  } else {
    l.kt = inverse_beta(beta);
    l.temperature = l.kt / cfg.boltzmann_k;
    l.equality_residual = l.relent_term.infinite ? 0.0 : l.delta_e_env - l.kt * sum;
    l.bound_slack = l.delta_e_env - l.kt * l.ds_system;
  }
  l.equality_checked = !l.relent_term.infinite;
  return l;
}

}  // namespace

ThermoLedger landauer_ledger(const StateVec& rho_s, const Observable& h_env, double beta,
                             const ChannelMap& u, const ThermoConfig& cfg) {
  const ModelPtr& joint = u.input();
  if (!u.has(kReversible)) throw InvalidArgument("interaction must be a reversible channel");
  if (!same_system(u.input(), u.output())) throw InvalidArgument("interaction must act on one system");
  if (!joint->composite || !same_system(joint->composite->a, rho_s.model()) ||
      !same_system(joint->composite->b, h_env.model))
    throw DimensionError("interaction does not act on system x environment");
  const StateVec gamma = gibbs_state(h_env, beta);
  const StateVec after = apply(u, product_state(joint, rho_s, gamma));
  return ledger_from(rho_s, gamma, after, h_env, beta, cfg);
}

ErasureReport erasure_demo(const StateVec& rho_s, const Observable& h_env, double beta,
                           const ThermoConfig& cfg) {
  const ModelPtr& sys = rho_s.model();
  const bool kron_family = sys->family == Family::Quantum || sys->family == Family::Rebit;
  const bool residue_family = sys->family == Family::DoubledQuantum || sys->family == Family::ExtendedClassical;
  if (!kron_family && !residue_family)
    throw UnsupportedError("no constructive purification for model " + sys->id);
  if (!h_env.model->quantum_like()) throw UnsupportedError("environment must be quantum-like");
  const Diagonalization d = diagonalize(rho_s);
  if (d.eigenvalues(0) > 1.0 - 1e-9) throw InvalidArgument("state is pure: nothing to erase");

  const auto& layout = sys->sectors();
  const int h = layout.hilbert_dim();
  const int n_sec = layout.sector_count();
  const ModelPtr sm = compose_systems(sys, sys);

  // Purification: each eigenvector is paired with its conjugate, moved to the
  // memory sector that brings the total back to sector 0.
  CVec psi = CVec::Zero(h * h);
  for (std::size_t k = 0; k < d.vectors.size(); ++k) {
    const double lambda = d.eigenvalues(static_cast<Eigen::Index>(k));
    if (lambda <= 1e-14) continue;
    const CVec& v = d.vectors[k];
    CVec m = v.conjugate();
    if (residue_family) {
      Eigen::Index top = 0;
      v.cwiseAbs().maxCoeff(&top);
      const int s = layout.sector_of(static_cast<int>(top));
      const int t = (n_sec - s) % n_sec;
      m.setZero();
      const auto& src = layout.sector(s);
      const auto& dst = layout.sector(t);
      for (std::size_t i = 0; i < src.size(); ++i) m(dst[i]) = std::conj(v(src[i]));
    }
    psi += std::sqrt(lambda) * kron(v, m);
  }
  psi.normalize();
  CVec target = CVec::Zero(h * h);
  target(0) = 1.0;
  const Complex overlap = target.dot(psi);
  const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0, 0.0);
  const CVec w = psi - phase * target;
  CMat u_sm = CMat::Identity(h * h, h * h) - 2.0 * (w * w.adjoint()) / w.squaredNorm();

  const ModelPtr full = compose_systems(sm, h_env.model);
  const StateVec gamma = gibbs_state(h_env, beta);
  const CMat g = to_matrix(gamma);
  const CMat before = kron(CMat(psi * psi.adjoint()), g);
  const CMat u_full = kron(u_sm, CMat::Identity(g.rows(), g.cols()));
  const StateVec joint_before = state_from_matrix(full, before);
  const StateVec joint_after = state_from_matrix(full, u_full * before * u_full.adjoint());

  ErasureReport r;
  const StateVec sm_before = marginal(joint_before, Factor::A);
  const StateVec sm_after = marginal(joint_after, Factor::A);
  r.ledger = ledger_from(sm_before, gamma, joint_after, h_env, beta, cfg);
  r.delta_e_env = r.ledger.delta_e_env;
  r.s_system_before = entropy(marginal(sm_before, Factor::A));
  r.s_system_after = entropy(marginal(sm_after, Factor::A));
  r.s_memory_before = entropy(marginal(sm_before, Factor::B));
  r.s_memory_after = entropy(marginal(sm_after, Factor::B));
  r.cond_before = entropy(sm_before) - r.s_memory_before;
  r.cond_after = entropy(sm_after) - r.s_memory_after;
  const double diff = r.cond_before - r.cond_after;
  if (beta == 0.0) {
    r.bound_rhs = diff < 0 ? -kInf : (diff > 0 ? kInf : 0.0);
  } else {
    r.bound_rhs = inverse_beta(beta) * diff;
  }
  r.memory_ok = r.s_memory_after <= r.s_memory_before + 1e-9;
  r.bound_ok = r.delta_e_env >= r.bound_rhs - 1e-9;
  return r;
}

}  // namespace gptt
