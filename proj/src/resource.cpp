#include "gptt/resource.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "gptt/lp.hpp"
#include "gptt/symmetry.hpp"
#include "gptt/zoo.hpp"

namespace gptt {

MajorizationCheck majorization(const Vec& p, const Vec& q, double tol) {
  const Eigen::Index n = std::max(p.size(), q.size());
  Vec a = Vec::Zero(n), b = Vec::Zero(n);
  a.head(p.size()) = p;
  b.head(q.size()) = q;
  if (std::abs(a.sum() - b.sum()) > std::max(tol, 1e-9) * static_cast<double>(n))
    throw InvalidArgument("majorization: vectors have different sums");
  a = sorted_desc(a);
  b = sorted_desc(b);
  MajorizationCheck out;
  out.holds = true;
  out.slack = kInf;
  double pa = 0.0, pb = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    pa += a(k);
    pb += b(k);
    out.slack = std::min(out.slack, pa - pb);
    if (pa < pb - tol && out.holds) {
      out.holds = false;
      out.violated_prefix = static_cast<int>(k) + 1;
    }
  }
  return out;
}

Mat t_transform_chain(const Vec& p, const Vec& q) {
  const Eigen::Index n = p.size();
  if (q.size() != n) throw DimensionError("t_transform_chain: length mismatch");
  Mat d = Mat::Identity(n, n);
  Vec x = p;
  for (Eigen::Index step = 0; step < 4 * n + 8; ++step) {
    Eigen::Index j = -1;
    for (Eigen::Index i = n - 1; i >= 0; --i)
      if (x(i) > q(i) + 1e-14) {
        j = i;
        break;
      }
    if (j < 0) break;
    Eigen::Index k = -1;
    for (Eigen::Index i = j + 1; i < n; ++i)
      if (x(i) < q(i) - 1e-14) {
        k = i;
        break;
      }
    if (k < 0) break;
    const double delta = std::min(x(j) - q(j), q(k) - x(k));
    const double t = delta / (x(j) - x(k));
    Mat tm = Mat::Identity(n, n);
    tm(j, j) = tm(k, k) = 1.0 - t;
    tm(j, k) = tm(k, j) = t;
    x = tm * x;
    d = tm * d;
  }
  return d;
}

Mat permutation_matrix(const std::vector<int>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Mat m = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m(perm[static_cast<std::size_t>(j)], j) = 1.0;
  return m;
}

bool is_doubly_stochastic(const Mat& d, double tol) {
  if (d.rows() != d.cols() || d.rows() == 0) return false;
  if (d.minCoeff() < -tol) return false;
  return (d.rowwise().sum().array() - 1.0).abs().maxCoeff() <= tol &&
         (d.colwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
}

namespace {

// Perfect matching of columns to rows using only allowed entries (Kuhn).
std::optional<std::vector<int>> perfect_matching(const std::vector<std::vector<bool>>& allowed) {
  const int n = static_cast<int>(allowed.size());
  std::vector<int> row_of_col(n, -1), col_of_row(n, -1);
  std::function<bool(int, std::vector<bool>&)> augment = [&](int col, std::vector<bool>& seen) {
    for (int r = 0; r < n; ++r) {
      if (!allowed[r][col] || seen[r]) continue;
      seen[r] = true;
      if (col_of_row[r] < 0 || augment(col_of_row[r], seen)) {
        col_of_row[r] = col;
        row_of_col[col] = r;
        return true;
      }
    }
    return false;
  };
  for (int c = 0; c < n; ++c) {
    std::vector<bool> seen(n, false);
    if (!augment(c, seen)) return std::nullopt;
  }
  return row_of_col;
}

// Matching maximizing its smallest entry.
std::optional<std::vector<int>> bottleneck_matching(const Mat& r, double floor) {
  const int n = static_cast<int>(r.rows());
  std::vector<double> values;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (r(i, j) > floor) values.push_back(r(i, j));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  auto at = [&](double threshold) {
    std::vector<std::vector<bool>> allowed(n, std::vector<bool>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) allowed[i][j] = r(i, j) >= threshold && r(i, j) > floor;
    return perfect_matching(allowed);
  };
  if (values.empty()) return std::nullopt;
  auto best = at(values.front());
  if (!best) return std::nullopt;
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi + 1) / 2;
    if (auto m = at(values[mid])) {
      best = m;
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return best;
}

// Caratheodory reduction to at most (d-1)^2 + 1 terms.
void reduce_terms(std::vector<BirkhoffTerm>& terms, int d) {
  const std::size_t limit = static_cast<std::size_t>((d - 1) * (d - 1) + 1);
  while (terms.size() > limit) {
    const auto m = static_cast<Eigen::Index>(terms.size());
    Mat a(d * d + 1, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const Mat p = permutation_matrix(terms[static_cast<std::size_t>(k)].perm);
      a.col(k).head(d * d) = Eigen::Map<const Vec>(p.data(), d * d);
      a(d * d, k) = 1.0;
    }
    const Mat ns = null_space(a);
    if (ns.cols() == 0) break;
    Vec c = ns.col(0);
    if (c.maxCoeff() <= 1e-12) c = -c;
    double t = kInf;
    Eigen::Index arg = -1;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (c(k) <= 1e-12) continue;
      const double ratio = terms[static_cast<std::size_t>(k)].weight / c(k);
      if (ratio < t) {
        t = ratio;
        arg = k;
      }
    }
    if (arg < 0) break;
    for (Eigen::Index k = 0; k < m; ++k) terms[static_cast<std::size_t>(k)].weight -= t * c(k);
    terms[static_cast<std::size_t>(arg)].weight = 0.0;
    terms.erase(std::remove_if(terms.begin(), terms.end(),
                               [](const BirkhoffTerm& b) { return b.weight <= 1e-15; }),
                terms.end());
  }
}

}  // namespace

std::vector<BirkhoffTerm> birkhoff_decompose(const Mat& d) {
  if (!is_doubly_stochastic(d)) throw InvalidArgument("matrix is not doubly stochastic");
  const int n = static_cast<int>(d.rows());
  Mat r = d.cwiseMax(0.0);
  std::vector<BirkhoffTerm> terms;
  const double floor = 1e-13;
  for (int iter = 0; iter < n * n + 4 && r.maxCoeff() > floor; ++iter) {
    auto perm = bottleneck_matching(r, floor);
    if (!perm) break;
    double w = kInf;
    for (int j = 0; j < n; ++j) w = std::min(w, r((*perm)[j], j));
    for (int j = 0; j < n; ++j) r((*perm)[j], j) -= w;
    terms.push_back({w, *perm});
  }
  reduce_terms(terms, n);
  return terms;
}

// ---------------------------------------------------------------------------
// Channel construction

namespace {

void require_same(const StateVec& rho, const StateVec& sigma) {
  if (!same_system(rho.model(), sigma.model())) throw DimensionError("states live on different systems");
  if (!rho.normalized(1e-8) || !sigma.normalized(1e-8)) throw InvalidArgument("states must be normalized");
}

int sector_of_vector(const SectorLayout& layout, const CVec& v) {
  Eigen::Index top = 0;
  v.cwiseAbs().maxCoeff(&top);
  return layout.sector_of(static_cast<int>(top));
}

CVec local_part(const SectorLayout& layout, int k, const CVec& v) {
  const auto& idx = layout.sector(k);
  CVec out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

// Orthonormal basis of the complement of the columns of `a` (orthonormal).
CMat complement(const CMat& a, int n, bool real) {
  CMat proj = CMat::Identity(n, n) - a * a.adjoint();
  const auto eig = hermitian_eig(proj, real);
  const int r = n - static_cast<int>(a.cols());
  return eig.vectors.leftCols(r);
}

// Block unitary composed with a sector permutation that sends a_j to b_j for
// every listed pair; nullopt if the pairs cross sectors inconsistently.
std::optional<CMat> structured_unitary(const SectorLayout& layout, const std::vector<CVec>& from,
                                       const std::vector<CVec>& to) {
  const int count = layout.sector_count();
  std::vector<int> target(count, -1);
  std::vector<bool> used(count, false);
  std::vector<std::vector<std::size_t>> members(count);
  for (std::size_t i = 0; i < from.size(); ++i) {
    const int s = sector_of_vector(layout, from[i]);
    const int t = sector_of_vector(layout, to[i]);
    if (target[s] >= 0 && target[s] != t) return std::nullopt;
    if (target[s] < 0) {
      if (used[t] || layout.sector_dim(s) != layout.sector_dim(t)) return std::nullopt;
      target[s] = t;
      used[t] = true;
    }
    members[s].push_back(i);
  }
  for (int s = 0; s < count; ++s) {
    if (target[s] >= 0) continue;
    for (int t = 0; t < count; ++t)
      if (!used[t] && layout.sector_dim(t) == layout.sector_dim(s)) {
        target[s] = t;
        used[t] = true;
        break;
      }
    if (target[s] < 0) return std::nullopt;
  }
  const int h = layout.hilbert_dim();
  CMat u = CMat::Zero(h, h);
  for (int s = 0; s < count; ++s) {
    const int t = target[s];
    const int n = layout.sector_dim(s);
    const auto r = static_cast<Eigen::Index>(members[s].size());
    CMat a(n, r), b(n, r);
    for (Eigen::Index c = 0; c < r; ++c) {
      a.col(c) = local_part(layout, s, from[members[s][static_cast<std::size_t>(c)]]);
      b.col(c) = local_part(layout, t, to[members[s][static_cast<std::size_t>(c)]]);
    }
    CMat local = b * a.adjoint();
    if (r < n) local += complement(b, n, layout.real()) * complement(a, n, layout.real()).adjoint();
    const auto& src = layout.sector(s);
    const auto& dst = layout.sector(t);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) u(dst[i], src[j]) = local(i, j);
  }
  return u;
}

// RaRe channel from Birkhoff terms; each term maps the eigenvectors of rho
// with positive weight onto permuted eigenvectors of sigma.
std::optional<ChannelMap> rare_from_birkhoff(const Diagonalization& dr, const Diagonalization& ds,
                                             const std::vector<BirkhoffTerm>& terms) {
  const ModelPtr& model = dr.model;
  const auto& layout = model->sectors();
  std::vector<RareTerm> witness;
  std::vector<CMat> kraus;
  Mat total = Mat::Zero(model->vector_dim, model->vector_dim);
  for (const auto& term : terms) {
    std::vector<CVec> from, to;
    for (std::size_t j = 0; j < dr.vectors.size(); ++j) {
      if (dr.eigenvalues(static_cast<Eigen::Index>(j)) <= 1e-12) continue;
      from.push_back(dr.vectors[j]);
      to.push_back(ds.vectors[static_cast<std::size_t>(term.perm[j])]);
    }
    auto u = structured_unitary(layout, from, to);
    if (!u) return std::nullopt;
    const ChannelMap c = ChannelMap::unitary(model, *u);
    witness.push_back({term.weight, c.matrix(), *u});
    kraus.push_back(std::sqrt(term.weight) * *u);
    total += term.weight * c.matrix();
  }
  unsigned tags = kRare;
  if (model->invariant) tags |= kUnital;
  return ChannelMap::make(model, model, total, tags, std::move(witness), std::move(kraus));
}

}  // namespace

std::optional<ChannelMap> build_unital_channel(const StateVec& rho, const StateVec& sigma) {
  require_same(rho, sigma);
  const ModelPtr& model = rho.model();
  if (!model->invariant) throw UnsupportedError("model " + model->id + " has no unique invariant state");
  const Diagonalization dr = diagonalize(rho);
  const Diagonalization ds = diagonalize(sigma);
  if (!majorizes(dr.eigenvalues, ds.eigenvalues)) return std::nullopt;
  const Mat d = t_transform_chain(dr.eigenvalues, ds.eigenvalues);
  const auto n = static_cast<Eigen::Index>(dr.eigenstates.size());
  Mat m = Mat::Zero(model->vector_dim, model->vector_dim);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vec prepared = Vec::Zero(model->vector_dim);
    for (Eigen::Index i = 0; i < n; ++i) prepared += d(i, j) * ds.eigenstates[static_cast<std::size_t>(i)].coords();
    m += prepared * dr.dagger_effects[static_cast<std::size_t>(j)].coords().transpose();
  }
  return ChannelMap::make(model, model, m, kUnital | kMeasureAndPrepare);
}

std::optional<ChannelMap> build_rare_channel(const StateVec& rho, const StateVec& sigma) {
  require_same(rho, sigma);
  const ModelPtr& model = rho.model();
  if (!model->flags.unrestricted_reversibility)
    throw UnsupportedError("majorisation is not sufficient here: " + model->id +
                           " lacks unrestricted reversibility");
  if (!model->quantum_like()) throw UnsupportedError("RaRe synthesis needs a quantum-like model");
  const Diagonalization dr = diagonalize(rho);
  const Diagonalization ds = diagonalize(sigma);
  if (!majorizes(dr.eigenvalues, ds.eigenvalues)) return std::nullopt;
  const auto terms = birkhoff_decompose(t_transform_chain(dr.eigenvalues, ds.eigenvalues));
  auto c = rare_from_birkhoff(dr, ds, terms);
  if (!c) throw Error("eigenbasis alignment left the reversible group");
  return c;
}

// ---------------------------------------------------------------------------
// Verdicts

std::string to_string(Theory t) {
  switch (t) {
    case Theory::Rare: return "rare";
    case Theory::Noisy: return "noisy";
    case Theory::Unital: return "unital";
  }
  return "?";
}

std::string to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::Unknown: return "unknown";
  }
  return "?";
}

Theory parse_theory(const std::string& s) {
  if (s == "rare") return Theory::Rare;
  if (s == "noisy") return Theory::Noisy;
  if (s == "unital") return Theory::Unital;
  throw InvalidArgument("unknown theory '" + s + "' (rare|noisy|unital)");
}

std::optional<CMat> sector_equivalence(const StateVec& rho, const StateVec& sigma) {
  const ModelSpec& m = *rho.model();
  if (!m.quantum_like()) throw StructureError("sector equivalence needs a quantum-like model");
  const auto& layout = m.sectors();
  const int count = layout.sector_count();
  std::vector<HermitianEig> er, es;
  for (int k = 0; k < count; ++k) {
    er.push_back(hermitian_eig(layout.block(rho.coords(), k), layout.real()));
    es.push_back(hermitian_eig(layout.block(sigma.coords(), k), layout.real()));
  }
  std::vector<int> target(count, -1);
  std::vector<bool> used(count, false);
  for (int s = 0; s < count; ++s) {
    for (int t = 0; t < count; ++t) {
      if (used[t] || er[s].values.size() != es[t].values.size()) continue;
      if ((er[s].values - es[t].values).cwiseAbs().maxCoeff() <= 1e-8) {
        target[s] = t;
        used[t] = true;
        break;
      }
    }
    if (target[s] < 0) return std::nullopt;
  }
  const int h = layout.hilbert_dim();
  CMat u = CMat::Zero(h, h);
  for (int s = 0; s < count; ++s) {
    const CMat local = es[target[s]].vectors * er[s].vectors.adjoint();
    const auto& src = layout.sector(s);
    const auto& dst = layout.sector(target[s]);
    for (std::size_t i = 0; i < dst.size(); ++i)
      for (std::size_t j = 0; j < src.size(); ++j)
        u(dst[i], src[j]) = local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return u;
}

bool rare_equivalent_doubled(const StateVec& rho, const StateVec& sigma) {
  require_same(rho, sigma);
  if (rho.model()->family != Family::DoubledQuantum)
    throw StructureError("rare_equivalent_doubled needs a doubled quantum system");
  return sector_equivalence(rho, sigma).has_value();
}

namespace {

std::string prefix_certificate(const MajorizationCheck& m) {
  std::ostringstream os;
  os << "majorisation fails at prefix " << m.violated_prefix << " (deficit " << -m.slack << ")";
  return os.str();
}

std::string weights_text(const Vec& w) {
  Vec s = sorted_desc(w);
  std::ostringstream os;
  os << "{";
  for (Eigen::Index i = 0; i < s.size(); ++i) os << (i ? "," : "") << s(i);
  os << "}";
  return os.str();
}

ConvertibilityVerdict unital_verdict(const StateVec& rho, const StateVec& sigma) {
  ConvertibilityVerdict v;
  v.theory = Theory::Unital;
  const ModelPtr& model = rho.model();
  if (!model->invariant) {
    v.certificate = "model has no unique invariant state";
    return v;
  }
  std::optional<Diagonalization> dr, ds;
  try {
    dr = diagonalize(rho);
    ds = diagonalize(sigma);
  } catch (const DiagonalizationFailure& e) {
    v.certificate = std::string("diagonalization failed: ") + e.what();
    return v;
  }
  const auto maj = majorization(dr->eigenvalues, ds->eigenvalues);
  if (!maj.holds) {
    if (model->quantum_like()) {
      v.answer = Answer::No;
      v.violated_prefix = maj.violated_prefix;
      v.certificate = prefix_certificate(maj);
    } else {
      v.certificate = "majorisation fails, but it is only known to be necessary in sharp theories";
    }
    return v;
  }
  v.channel = build_unital_channel(rho, sigma);
  v.answer = Answer::Yes;
  return v;
}

ConvertibilityVerdict orbit_hull_verdict(const StateVec& rho, const StateVec& sigma) {
  ConvertibilityVerdict v;
  v.theory = Theory::Rare;
  const ModelPtr& model = rho.model();
  const auto& elems = model->group_elements();
  Mat images(model->vector_dim, static_cast<Eigen::Index>(elems.size()));
  for (std::size_t g = 0; g < elems.size(); ++g) images.col(static_cast<Eigen::Index>(g)) = elems[g] * rho.coords();
  const auto res = lp::feasible(images, sigma.coords());
  if (res.status == lp::Status::Infeasible) {
    v.answer = Answer::No;
    std::ostringstream os;
    os << "sigma lies outside the convex hull of the reversible orbit of rho (L1 gap "
       << res.infeasibility << ")";
    v.certificate = os.str();
    return v;
  }
  std::vector<RareTerm> witness;
  Mat total = Mat::Zero(model->vector_dim, model->vector_dim);
  const double norm = res.x.sum();
  for (std::size_t g = 0; g < elems.size(); ++g) {
    const double w = res.x(static_cast<Eigen::Index>(g)) / norm;
    if (w <= 1e-14) continue;
    witness.push_back({w, elems[g], std::nullopt});
    total += w * elems[g];
  }
  unsigned tags = kRare;
  if (model->invariant) tags |= kUnital;
  v.channel = ChannelMap::make(model, model, total, tags, std::move(witness));
  v.answer = Answer::Yes;
  return v;
}

ConvertibilityVerdict rare_verdict(const StateVec& rho, const StateVec& sigma) {
  const ModelPtr& model = rho.model();
  if (!model->quantum_like()) {
    if (model->group.kind == GroupSpec::Kind::Finite) return orbit_hull_verdict(rho, sigma);
    ConvertibilityVerdict v;
    v.theory = Theory::Rare;
    v.certificate = "no reversible group available";
    return v;
  }
  ConvertibilityVerdict v;
  v.theory = Theory::Rare;
  const Diagonalization dr = diagonalize(rho);
  const Diagonalization ds = diagonalize(sigma);
  const auto maj = majorization(dr.eigenvalues, ds.eigenvalues);
  if (!maj.holds) {
    v.answer = Answer::No;
    v.violated_prefix = maj.violated_prefix;
    v.certificate = prefix_certificate(maj);
    return v;
  }
  if (model->flags.unrestricted_reversibility) {
    v.channel = build_rare_channel(rho, sigma);
    v.answer = Answer::Yes;
    return v;
  }
  const bool equal_spectra = (dr.eigenvalues - ds.eigenvalues).cwiseAbs().maxCoeff() <= 1e-8;
  if (equal_spectra && model->flags.sectorized) {
    // Equal spectra: a RaRe conversion would have to be reversible.
    if (auto u = sector_equivalence(rho, sigma)) {
      const ChannelMap c = ChannelMap::unitary(model, *u);
      unsigned tags = kRare | kReversible;
      if (model->invariant) tags |= kUnital;
      v.channel = ChannelMap::make(model, model, c.matrix(), tags, {RareTerm{1.0, c.matrix(), *u}}, {*u});
      v.answer = Answer::Yes;
      return v;
    }
    v.answer = Answer::No;
    v.weights_rho = sector_weights(rho);
    v.weights_sigma = sector_weights(sigma);
    v.certificate = "equal spectra but different per-sector spectra; sector weights " +
                    weights_text(*v.weights_rho) + " vs " + weights_text(*v.weights_sigma);
    return v;
  }
  const auto terms = birkhoff_decompose(t_transform_chain(dr.eigenvalues, ds.eigenvalues));
  if (auto c = rare_from_birkhoff(dr, ds, terms)) {
    v.channel = std::move(c);
    v.answer = Answer::Yes;
    return v;
  }
  v.certificate = "majorisation holds but no sector-consistent reversible mixture was found";
  return v;
}

}  // namespace

ConvertibilityVerdict convertible(const StateVec& rho, const StateVec& sigma, Theory theory) {
  require_same(rho, sigma);
  if (theory == Theory::Unital) return unital_verdict(rho, sigma);
  if (theory == Theory::Rare) return rare_verdict(rho, sigma);
  ConvertibilityVerdict rare = rare_verdict(rho, sigma);
  if (rare.answer == Answer::Yes) {
    rare.theory = Theory::Noisy;
    return rare;
  }
  ConvertibilityVerdict unital = unital_verdict(rho, sigma);
  if (unital.answer == Answer::No) {
    unital.theory = Theory::Noisy;
    return unital;
  }
  ConvertibilityVerdict v;
  v.theory = Theory::Noisy;
  v.certificate = "RaRe verdict is '" + to_string(rare.answer) + "' and unital verdict is '" +
                  to_string(unital.answer) + "'; noisy convertibility lies between them";
  return v;
}

// ---------------------------------------------------------------------------
// Unrestricted reversibility

std::pair<StateVec, StateVec> sector_counterexample(const ModelPtr& model) {
  if (!model->quantum_like() || model->sectors().sector_count() < 2 || model->sectors().sector_dim() < 2)
    throw StructureError("counterexample needs at least two sectors of dimension >= 2");
  const auto& layout = model->sectors();
  const int h = layout.hilbert_dim();
  const int a = layout.sector(0)[0], b = layout.sector(0)[1], c = layout.sector(1)[0];
  CMat r = CMat::Zero(h, h), s = CMat::Zero(h, h);
  r(a, a) = r(b, b) = 0.5;
  s(a, a) = s(c, c) = 0.5;
  return {state_from_matrix(model, r), state_from_matrix(model, s)};
}

namespace {

// Index of each vertex image under g.
std::vector<int> vertex_action(const Mat& g, const Mat& verts) {
  std::vector<int> out(static_cast<std::size_t>(verts.cols()), -1);
  for (Eigen::Index i = 0; i < verts.cols(); ++i) {
    const Vec img = g * verts.col(i);
    for (Eigen::Index j = 0; j < verts.cols(); ++j)
      if ((img - verts.col(j)).cwiseAbs().maxCoeff() < 1e-9) out[static_cast<std::size_t>(i)] = static_cast<int>(j);
  }
  return out;
}

}  // namespace

UnrestrictedReport check_unrestricted_reversibility(const ModelPtr& model) {
  UnrestrictedReport r;
  if (model->quantum_like()) {
    const auto& layout = model->sectors();
    if (model->flags.unrestricted_reversibility) {
      r.permutability = r.strong_symmetry = true;
      r.note = "reversible group acts transitively on ordered maximal sets";
    } else if (layout.sector_count() >= 2 && layout.sector_dim() >= 2) {
      r.permutability = r.strong_symmetry = false;
      r.note = "reversible maps preserve per-sector spectra; swapping a state of one sector with one "
               "of another while fixing the rest is impossible";
      r.counterexample = sector_counterexample(model);
    } else {
      r.note = "no decision procedure for this family";
    }
    return r;
  }
  const Mat& verts = model->pure_vertices;
  const int k = static_cast<int>(verts.cols());
  const int c = std::max(model->capacity, 1);
  std::vector<std::vector<int>> sets;
  std::vector<bool> pick(static_cast<std::size_t>(k), false);
  std::fill(pick.begin(), pick.begin() + c, true);
  do {
    std::vector<int> s;
    std::vector<Vec> states;
    for (int i = 0; i < k; ++i)
      if (pick[static_cast<std::size_t>(i)]) {
        s.push_back(i);
        states.push_back(verts.col(i));
      }
    if (c == 1 || distinguishing_test_lp(*model, states)) sets.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));

  std::vector<std::vector<int>> actions;
  for (const Mat& g : model->group_elements()) actions.push_back(vertex_action(g, verts));
  auto reachable = [&](const std::vector<int>& from, const std::vector<int>& to) {
    for (const auto& act : actions) {
      bool ok = true;
      for (std::size_t i = 0; i < from.size() && ok; ++i) ok = act[static_cast<std::size_t>(from[i])] == to[i];
      if (ok) return true;
    }
    return false;
  };
  bool perm = true, strong = true;
  for (const auto& s : sets) {
    std::vector<int> p = s;
    do perm = perm && reachable(s, p);
    while (perm && std::next_permutation(p.begin(), p.end()));
  }
  for (const auto& s : sets) {
    for (const auto& t : sets) {
      std::vector<int> p = t;
      bool all = true;
      do all = all && reachable(s, p);
      while (all && std::next_permutation(p.begin(), p.end()));
      if (all) continue;
      strong = false;
      if (r.counterexample) continue;
      // Uniform mixtures of the two sets share a spectrum; keep them only if
      // no group element maps one onto the other.
      Vec a = Vec::Zero(model->vector_dim), b = Vec::Zero(model->vector_dim);
      for (int i : s) a += verts.col(i) / static_cast<double>(s.size());
      for (int i : t) b += verts.col(i) / static_cast<double>(t.size());
      bool connected = false;
      for (const Mat& g : model->group_elements())
        connected = connected || (g * a - b).cwiseAbs().maxCoeff() < 1e-9;
      if (!connected) r.counterexample = std::make_pair(StateVec(model, a), StateVec(model, b));
    }
  }
  r.permutability = perm;
  r.strong_symmetry = strong;
  r.note = "exhaustive search over " + std::to_string(sets.size()) + " maximal sets and " +
           std::to_string(actions.size()) + " group elements";
  return r;
}

}  // namespace gptt
