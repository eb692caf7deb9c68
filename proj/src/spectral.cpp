#include "gptt/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "gptt/lp.hpp"

namespace gptt {
namespace {

struct Entry {
  double value;
  Vec state;
  Vec dagger;
  CVec vector;  // empty for polytope models
};

// Lexicographic order on coordinates, larger entries first.
bool lex_before(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) > b(i) + 1e-12) return true;
    if (a(i) < b(i) - 1e-12) return false;
  }
  return false;
}

Diagonalization finish(const ModelPtr& model, std::vector<Entry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.value > b.value; });
  // Within degenerate runs order eigenstates lexicographically.
  for (std::size_t start = 0; start < entries.size();) {
    std::size_t end = start + 1;
    while (end < entries.size() && entries[end - 1].value - entries[end].value < kDegeneracyGap) ++end;
    std::stable_sort(entries.begin() + static_cast<long>(start), entries.begin() + static_cast<long>(end),
                     [](const Entry& a, const Entry& b) { return lex_before(a.state, b.state); });
    start = end;
  }
  Diagonalization d;
  d.model = model;
  d.eigenvalues.resize(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    d.eigenvalues(static_cast<Eigen::Index>(i)) = entries[i].value;
    d.eigenstates.emplace_back(model, entries[i].state);
    d.dagger_effects.emplace_back(model, entries[i].dagger);
    if (entries[i].vector.size() > 0) d.vectors.push_back(entries[i].vector);
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i - 1].value - entries[i].value < kDegeneracyGap) {
      auto& level = d.reduced.back();
      level.value = (level.value * level.multiplicity + entries[i].value) / (level.multiplicity + 1);
      ++level.multiplicity;
      level.projector += entries[i].state;
    } else {
      d.reduced.push_back({entries[i].value, 1, entries[i].state});
    }
  }
  return d;
}

CVec embed(const SectorLayout& layout, int sector, const CVec& local) {
  CVec v = CVec::Zero(layout.hilbert_dim());
  const auto& idx = layout.sector(sector);
  for (std::size_t i = 0; i < idx.size(); ++i) v(idx[i]) = local(static_cast<Eigen::Index>(i));
  return v;
}

Entry pure_entry(const SectorLayout& layout, double value, const CVec& v) {
  const Vec coords = layout.to_coords(v * v.adjoint());
  return {value, coords, coords, v};
}

std::vector<Entry> sector_eig(const ModelSpec& model, const Vec& xi) {
  const auto& layout = model.sectors();
  std::vector<Entry> entries;
  for (int k = 0; k < layout.sector_count(); ++k) {
    const auto eig = hermitian_eig(layout.block(xi, k), layout.real());
    for (Eigen::Index j = 0; j < eig.values.size(); ++j)
      entries.push_back(pure_entry(layout, eig.values(j), embed(layout, k, eig.vectors.col(j))));
  }
  return entries;
}

// Largest p with rho - p v in the cone, for one vertex v.
double vertex_weight(const ModelSpec& model, const Vec& rho, const Vec& v) {
  const Mat& verts = model.pure_vertices;
  Mat a(verts.rows(), verts.cols() + 1);
  a << v, verts;
  Vec c = Vec::Zero(a.cols());
  c(0) = -1.0;
  const auto res = lp::minimize(a, rho, c);
  if (res.status != lp::Status::Optimal) return 0.0;
  return std::clamp(res.x(0), 0.0, 1.0);
}

// Orthonormal completion of the chosen eigenvectors inside each sector.
void complete_quantum(const SectorLayout& layout, std::vector<Entry>& entries) {
  for (int k = 0; k < layout.sector_count(); ++k) {
    const auto& idx = layout.sector(k);
    const int n = static_cast<int>(idx.size());
    CMat proj = CMat::Zero(n, n);
    for (const auto& e : entries) {
      CVec local(n);
      for (int i = 0; i < n; ++i) local(i) = e.vector(idx[i]);
      proj += local * local.adjoint();
    }
    const auto eig = hermitian_eig(CMat::Identity(n, n) - proj, layout.real());
    for (Eigen::Index j = 0; j < eig.values.size(); ++j)
      if (eig.values(j) > 0.5) entries.push_back(pure_entry(layout, 0.0, embed(layout, k, eig.vectors.col(j))));
  }
}

// Extends perfectly distinguishable vertices to a maximal set and returns its
// test (complement folded into the last effect).
std::optional<std::vector<Entry>> complete_polytope(const ModelSpec& model, std::vector<Entry> chosen) {
  const Mat& verts = model.pure_vertices;
  std::vector<int> free;
  for (Eigen::Index i = 0; i < verts.cols(); ++i) {
    bool used = false;
    for (const auto& e : chosen) used = used || (e.state - verts.col(i)).cwiseAbs().maxCoeff() < 1e-9;
    if (!used) free.push_back(static_cast<int>(i));
  }
  const int missing = model.capacity - static_cast<int>(chosen.size());
  if (missing < 0 || missing > static_cast<int>(free.size())) return std::nullopt;
  std::vector<bool> pick(free.size(), false);
  std::fill(pick.begin(), pick.begin() + missing, true);
  do {
    std::vector<Entry> all = chosen;
    for (std::size_t i = 0; i < free.size(); ++i)
      if (pick[i]) all.push_back({0.0, verts.col(free[i]), Vec(), CVec()});
    std::vector<Vec> states;
    for (const auto& e : all) states.push_back(e.state);
    if (auto test = distinguishing_test_lp(model, states)) {
      (*test)[states.size() - 1] += test->back();
      for (std::size_t i = 0; i < all.size(); ++i) all[i].dagger = (*test)[i];
      return all;
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return std::nullopt;
}

Diagonalization peel_loop(const StateVec& rho) {
  const ModelPtr& model = rho.model();
  const double total = rho.trace();
  if (total <= kZeroNorm) throw InvalidArgument("cannot diagonalize a zero-trace vector");
  StateVec current(model, rho.coords() / total);
  double remaining = 1.0;
  std::vector<Entry> entries;
  const int max_steps = model->quantum_like() ? model->sectors().hilbert_dim() : model->capacity;
  for (int step = 0;; ++step) {
    if (step >= max_steps)
      throw DiagonalizationFailure("peel loop produced more states than the capacity allows",
                                   current.coords());
    Peel peel = max_eigenvalue_peel(current);
    Entry e{total * remaining * peel.p, peel.alpha.coords(), peel.alpha.coords(), CVec()};
    if (model->quantum_like()) e.vector = state_vector(peel.alpha);
    entries.push_back(std::move(e));
    remaining *= 1.0 - peel.p;
    if (!peel.rest || remaining < 1e-14) break;
    current = *peel.rest;
  }
  if (model->quantum_like()) {
    complete_quantum(model->sectors(), entries);
    return finish(model, std::move(entries));
  }
  auto full = complete_polytope(*model, entries);
  if (!full) {
    Vec residue = rho.coords();
    for (const auto& e : entries) residue -= e.value * e.state;
    throw DiagonalizationFailure("peeled pure states are not perfectly distinguishable", residue);
  }
  return finish(model, std::move(*full));
}

}  // namespace

Vec Diagonalization::reconstruct() const {
  Vec acc = Vec::Zero(model->vector_dim);
  for (std::size_t i = 0; i < eigenstates.size(); ++i)
    acc += eigenvalues(static_cast<Eigen::Index>(i)) * eigenstates[i].coords();
  return acc;
}

Diagonalization diagonalize(const StateVec& rho, DiagMethod method) {
  const ModelPtr& model = rho.model();
  if (method == DiagMethod::Fast && !model->quantum_like())
    throw UnsupportedError("no direct eigensolver for model " + model->id);
  if (model->quantum_like() && method != DiagMethod::Peel)
    return finish(model, sector_eig(*model, rho.coords()));
  return peel_loop(rho);
}

Diagonalization diagonalize_vector(const ModelPtr& model, const Vec& xi) {
  if (xi.size() != model->vector_dim) throw DimensionError("vector dimension does not match " + model->id);
  if (model->quantum_like()) return finish(model, sector_eig(*model, xi));
  if (!cone_membership(xi, model->state_cone).inside)
    throw UnsupportedError("signed vectors of polytope models cannot be diagonalized");
  return peel_loop(StateVec(model, xi));
}

Peel max_eigenvalue_peel(const StateVec& rho) {
  const ModelPtr& model = rho.model();
  if (!rho.normalized(1e-8)) throw InvalidArgument("max_eigenvalue_peel needs a normalized state");
  double best = -1.0;
  Vec alpha;
  if (model->quantum_like()) {
    for (const auto& e : sector_eig(*model, rho.coords())) {
      if (e.value > best + 1e-12 || (e.value > best - 1e-12 && lex_before(e.state, alpha))) {
        best = e.value;
        alpha = e.state;
      }
    }
  } else {
    const Mat& verts = model->pure_vertices;
    for (Eigen::Index i = 0; i < verts.cols(); ++i) {
      const double p = vertex_weight(*model, rho.coords(), verts.col(i));
      if (p > best + 1e-9 || (p > best - 1e-9 && lex_before(verts.col(i), alpha))) {
        best = std::max(best, p);
        alpha = verts.col(i);
      }
    }
  }
  best = std::min(best, 1.0);
  Peel out{best, StateVec(model, alpha), std::nullopt};
  if (best < 1.0 - 1e-9) out.rest = StateVec(model, (rho.coords() - best * alpha) / (1.0 - best));
  else out.p = 1.0;
  return out;
}

bool is_pure(const StateVec& rho, double tol) {
  if (!rho.normalized(tol)) return false;
  const ModelSpec& m = *rho.model();
  if (m.quantum_like()) {
    if (!cone_membership(rho.coords(), m.state_cone).inside) return false;
    return std::abs(rho.coords().squaredNorm() - 1.0) <= 10 * tol;
  }
  for (Eigen::Index i = 0; i < m.pure_vertices.cols(); ++i)
    if ((m.pure_vertices.col(i) - rho.coords()).cwiseAbs().maxCoeff() <= tol) return true;
  return false;
}

CVec state_vector(const StateVec& rho) {
  if (!rho.model()->quantum_like()) throw UnsupportedError("state vectors need a quantum-like model");
  if (!is_pure(rho, 1e-8)) throw InvalidArgument("state is not pure");
  const auto& layout = rho.model()->sectors();
  for (int k = 0; k < layout.sector_count(); ++k) {
    const auto eig = hermitian_eig(layout.block(rho.coords(), k), layout.real());
    if (eig.values(0) > 0.5) return embed(layout, k, eig.vectors.col(0));
  }
  throw InvalidArgument("state is not pure");
}

EffectVec dagger(const StateVec& pure) {
  const ModelPtr& model = pure.model();
  if (!is_pure(pure, 1e-8)) throw InvalidArgument("dagger needs a normalized pure state");
  if (model->quantum_like()) return EffectVec(model, pure.coords());
  if (model->capacity < 2) throw UnsupportedError("model " + model->id + " has no maximal sets of size >= 2");
  auto full = complete_polytope(*model, {{1.0, pure.coords(), Vec(), CVec()}});
  if (!full) throw UnsupportedError("no maximal set contains this pure state");
  return EffectVec(model, full->front().dagger);
}

EffectVec dagger_extend(const ModelPtr& model, const Vec& xi) {
  const Diagonalization d = diagonalize_vector(model, xi);
  return functional_calculus(d, [](double x) { return x; });
}

EffectVec functional_calculus(const Diagonalization& x, const std::function<double(double)>& f) {
  Vec acc = Vec::Zero(x.model->vector_dim);
  for (std::size_t i = 0; i < x.dagger_effects.size(); ++i) {
    const double lambda = x.eigenvalues(static_cast<Eigen::Index>(i));
    const double y = f(lambda);
    if (!std::isfinite(y)) throw DomainError("function is not finite at an eigenvalue", lambda);
    acc += y * x.dagger_effects[i].coords();
  }
  return EffectVec(x.model, acc);
}

Mat transition_matrix(const MaximalSet& a, const MaximalSet& b) {
  if (a.daggers.size() != b.states.size()) throw DimensionError("maximal sets of different sizes");
  const auto n = static_cast<Eigen::Index>(a.daggers.size());
  Mat t(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) t(i, j) = pairing(a.daggers[i], b.states[j]);
  return t;
}

Mat transition_matrix(const Diagonalization& a, const Diagonalization& b) {
  return transition_matrix(MaximalSet{a.eigenstates, a.dagger_effects},
                           MaximalSet{b.eigenstates, b.dagger_effects});
}

SchmidtDecomposition schmidt(const StateVec& psi) {
  const ModelSpec& m = *psi.model();
  if (!m.composite || !m.quantum_like()) throw StructureError("schmidt needs a quantum-like composite");
  const CVec v = state_vector(psi);
  const ModelPtr& a = m.composite->a;
  const ModelPtr& b = m.composite->b;
  const auto& la = a->sectors();
  const auto& lb = b->sectors();
  const int hb = lb.hilbert_dim();
  const bool real = la.real() && lb.real();

  struct Term {
    double p;
    CVec u, w;
  };
  std::vector<Term> terms;
  for (int i = 0; i < la.sector_count(); ++i) {
    for (int j = 0; j < lb.sector_count(); ++j) {
      const auto& ri = la.sector(i);
      const auto& cj = lb.sector(j);
      CMat block(static_cast<Eigen::Index>(ri.size()), static_cast<Eigen::Index>(cj.size()));
      for (std::size_t r = 0; r < ri.size(); ++r)
        for (std::size_t c = 0; c < cj.size(); ++c) block(r, c) = v(ri[r] * hb + cj[c]);
      if (block.norm() < 1e-12) continue;
      CMat u, w;
      Vec s;
      if (real) {
        Eigen::JacobiSVD<Mat> svd(block.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
        u = svd.matrixU().cast<Complex>();
        w = svd.matrixV().cast<Complex>();
        s = svd.singularValues();
      } else {
        Eigen::JacobiSVD<CMat> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
        u = svd.matrixU();
        w = svd.matrixV();
        s = svd.singularValues();
      }
      for (Eigen::Index l = 0; l < s.size(); ++l) {
        if (s(l) * s(l) <= 1e-12) continue;
        terms.push_back({s(l) * s(l), embed(la, i, u.col(l)), embed(lb, j, w.col(l).conjugate())});
      }
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.p > y.p; });
  SchmidtDecomposition out;
  out.coefficients.resize(static_cast<Eigen::Index>(terms.size()));
  for (std::size_t t = 0; t < terms.size(); ++t) {
    out.coefficients(static_cast<Eigen::Index>(t)) = terms[t].p;
    out.states_a.push_back(pure_state(a, terms[t].u.normalized()));
    out.states_b.push_back(pure_state(b, terms[t].w.normalized()));
    out.measurement_a.emplace_back(a, out.states_a.back().coords());
    out.measurement_b.emplace_back(b, out.states_b.back().coords());
  }
  return out;
}

}  // namespace gptt
