#include "gptt/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace gptt {
namespace {

std::shared_ptr<ModelSpec> block_model(std::string id, Family family,
                                       std::shared_ptr<const SectorLayout> layout,
                                       CompositionKind rule, ModelFlags flags,
                                       std::map<std::string, int> params) {
  auto m = std::make_shared<ModelSpec>();
  m->id = std::move(id);
  m->family = family;
  m->params = std::move(params);
  m->layout = layout;
  m->vector_dim = layout->vector_dim();
  m->capacity = layout->hilbert_dim();
  m->unit_effect = layout->to_coords(CMat::Identity(layout->hilbert_dim(), layout->hilbert_dim()));
  m->state_cone = ConeSpec::blocks(layout);
  m->effect_cone = ConeSpec::blocks(layout);
  m->flags = flags;
  m->composes_by = rule;
  m->invariant = m->unit_effect / static_cast<double>(layout->hilbert_dim());
  bool all_singletons = true;
  for (const auto& s : layout->sectors()) all_singletons = all_singletons && s.size() == 1;
  if (all_singletons) m->pure_vertices = Mat::Identity(m->vector_dim, m->vector_dim);

  if (family == Family::Classical) {
    m->group.kind = GroupSpec::Kind::Finite;
    m->group.sampler = "symmetric";
    for (int i = 0; i + 1 < m->vector_dim; ++i) {
      Mat p = Mat::Identity(m->vector_dim, m->vector_dim);
      p.row(i).swap(p.row(i + 1));
      m->group.generators.push_back(p);
    }
  } else if (family == Family::Quantum || family == Family::Rebit) {
    m->group.kind = GroupSpec::Kind::Parametric;
    m->group.sampler = family == Family::Quantum ? "unitary" : "orthogonal";
  } else {
    m->group.kind = GroupSpec::Kind::Structured;
    m->group.sampler = "block-unitary-sector-permutation";
  }
  return m;
}

std::vector<std::vector<int>> equal_sectors(int count, int dim) {
  std::vector<std::vector<int>> s(count);
  for (int k = 0; k < count; ++k)
    for (int i = 0; i < dim; ++i) s[k].push_back(k * dim + i);
  return s;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace

ModelPtr classical(int d) {
  require(d >= 2, "classical(d) needs d >= 2");
  auto layout = std::make_shared<SectorLayout>(equal_sectors(d, 1), true);
  ModelFlags flags;
  flags.unrestricted_reversibility = true;
  return block_model("classical:" + std::to_string(d), Family::Classical, layout,
                     CompositionKind::Kronecker, flags, {{"d", d}});
}

ModelPtr quantum(int n) {
  require(n >= 2, "quantum(n) needs n >= 2");
  auto layout = std::make_shared<SectorLayout>(equal_sectors(1, n), false);
  ModelFlags flags{true, true, false};
  return block_model("quantum:" + std::to_string(n), Family::Quantum, layout,
                     CompositionKind::Kronecker, flags, {{"n", n}});
}

ModelPtr real_quantum(int n) {
  require(n >= 2, "real_quantum(n) needs n >= 2");
  auto layout = std::make_shared<SectorLayout>(equal_sectors(1, n), true);
  ModelFlags flags{true, true, false};
  const std::string id = n == 2 ? "rebit" : "real_quantum:" + std::to_string(n);
  return block_model(id, Family::Rebit, layout, CompositionKind::Kronecker, flags, {{"n", n}});
}

ModelPtr doubled_quantum(int n) {
  require(n >= 1, "doubled_quantum(n) needs n >= 1");
  auto layout = std::make_shared<SectorLayout>(equal_sectors(2, n), false);
  ModelFlags flags{true, false, true};
  return block_model("doubled_quantum:" + std::to_string(n), Family::DoubledQuantum, layout,
                     CompositionKind::Residue, flags, {{"n", n}});
}

ModelPtr extended_classical(int sectors, int sector_dim) {
  require(sectors >= 2 && sector_dim >= 1, "extended_classical(N, n) needs N >= 2, n >= 1");
  auto layout = std::make_shared<SectorLayout>(equal_sectors(sectors, sector_dim), false);
  // With one-dimensional sectors the reversible group is the full symmetric
  // group on the sectors, which permutes every maximal set.
  ModelFlags flags{true, sector_dim == 1, true};
  return block_model("extended_classical:" + std::to_string(sectors) + ":" + std::to_string(sector_dim),
                     Family::ExtendedClassical, layout, CompositionKind::Residue, flags,
                     {{"N", sectors}, {"n", sector_dim}});
}

// ---------------------------------------------------------------------------
// Polytopes

namespace {

bool is_proper(const Mat& generators) {
  for (Eigen::Index i = 0; i < generators.cols(); ++i) {
    if (generators.col(i).norm() < kZeroNorm) return false;
    if (cone_membership(-generators.col(i), ConeSpec::vertices(generators)).inside) return false;
  }
  return true;
}

int polytope_capacity(const ModelSpec& m) {
  const int k = static_cast<int>(m.pure_vertices.cols());
  for (int size = k; size >= 2; --size) {
    std::vector<bool> pick(k, false);
    std::fill(pick.begin(), pick.begin() + size, true);
    do {
      std::vector<Vec> states;
      for (int i = 0; i < k; ++i)
        if (pick[i]) states.push_back(m.pure_vertices.col(i));
      if (distinguishing_test_lp(m, states)) return size;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return 1;
}

std::shared_ptr<ModelSpec> make_polytope(std::string id, Family family, Vec unit, Mat vertices,
                                         Mat effects, std::vector<Mat> group) {
  const int dim = static_cast<int>(unit.size());
  require(dim >= 1, "polytope needs a positive vector dimension");
  require(vertices.rows() == dim && effects.rows() == dim, "polytope data has inconsistent dimensions");
  require(vertices.cols() >= 1, "polytope needs at least one vertex");
  for (Eigen::Index i = 0; i < vertices.cols(); ++i)
    require(std::abs(unit.dot(vertices.col(i)) - 1.0) <= kTol, "polytope vertex is not normalized");
  require(is_proper(vertices), "state cone is not proper");
  require(is_proper(effects), "effect cone is not proper");
  require((effects.transpose() * vertices).minCoeff() >= -kTol,
          "effect generator is negative on a state");
  for (const Mat& g : group) {
    require(g.rows() == dim && g.cols() == dim, "group generator has the wrong shape");
    require((g.transpose() * unit - unit).cwiseAbs().maxCoeff() <= kTol,
            "group generator violates the channel condition");
    require(Eigen::FullPivLU<Mat>(g).isInvertible(), "group generator is not invertible");
    for (Eigen::Index i = 0; i < vertices.cols(); ++i) {
      const Vec image = g * vertices.col(i);
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < vertices.cols(); ++j)
        best = std::min(best, (image - vertices.col(j)).cwiseAbs().maxCoeff());
      require(best <= 1e-9, "group generator does not permute the pure states");
    }
  }

  auto m = std::make_shared<ModelSpec>();
  m->id = std::move(id);
  m->family = family;
  m->vector_dim = dim;
  m->unit_effect = std::move(unit);
  m->state_cone = ConeSpec::vertices(vertices);
  m->effect_cone = ConeSpec::vertices(effects);
  m->pure_vertices = std::move(vertices);
  m->group.kind = GroupSpec::Kind::Finite;
  m->group.generators = std::move(group);
  m->composes_by = CompositionKind::None;
  m->capacity = polytope_capacity(*m);

  const Mat fixed = fixed_point_space(m->group.generators, dim);
  if (fixed.cols() == 1) {
    const double t = m->unit_effect.dot(fixed.col(0));
    if (std::abs(t) > kTol) m->invariant = fixed.col(0) / t;
  }
  return m;
}

Mat columns(std::initializer_list<std::initializer_list<double>> cols) {
  const auto rows = cols.begin()->size();
  Mat m(rows, cols.size());
  Eigen::Index c = 0;
  for (const auto& col : cols) {
    Eigen::Index r = 0;
    for (double x : col) m(r++, c) = x;
    ++c;
  }
  return m;
}

}  // namespace

ModelPtr polytope(std::string id, Vec unit_effect, Mat state_vertices, Mat effect_generators,
                  std::vector<Mat> group_generators) {
  return make_polytope(std::move(id), Family::Polytope, std::move(unit_effect),
                       std::move(state_vertices), std::move(effect_generators),
                       std::move(group_generators));
}

ModelPtr square_bit() {
  Vec u(3);
  u << 0, 0, 1;
  Mat verts = columns({{-1, 1, 1}, {-1, -1, 1}, {1, -1, 1}, {1, 1, 1}});
  Mat effects = 0.5 * columns({{0, 1, 1}, {0, -1, 1}, {1, 0, 1}, {-1, 0, 1}});
  Mat rot(3, 3), refl(3, 3);
  rot << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  refl << -1, 0, 0, 0, 1, 0, 0, 0, 1;
  return make_polytope("square_bit", Family::SquareBit, u, verts, effects, {rot, refl});
}

ModelPtr restricted_trit() {
  Vec u = Vec::Ones(3);
  Mat verts = Mat::Identity(3, 3);
  Mat effects = 0.5 * columns({{1, 1, 0}, {1, 0, 1}, {0, 1, 1}});
  Mat s12(3, 3), s23(3, 3);
  s12 << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  s23 << 1, 0, 0, 0, 0, 1, 0, 1, 0;
  return make_polytope("restricted_trit", Family::RestrictedTrit, u, verts, effects, {s12, s23});
}

ModelPtr diamond_bit() {
  Vec u(3);
  u << 0, 0, 1;
  Mat verts = columns({{2, 0, 1}, {0, 1, 1}, {-2, 0, 1}, {0, -1, 1}});
  Mat effects = 0.5 * columns({{-0.5, -1, 1}, {-0.5, 1, 1}, {0.5, -1, 1}, {0.5, 1, 1}});
  Mat rx(3, 3), ry(3, 3);
  rx << -1, 0, 0, 0, 1, 0, 0, 0, 1;
  ry << 1, 0, 0, 0, -1, 0, 0, 0, 1;
  return make_polytope("diamond_bit", Family::DiamondBit, u, verts, effects, {rx, ry});
}

// ---------------------------------------------------------------------------
// Builders from names / JSON

namespace {

int param(const std::map<std::string, int>& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw InvalidArgument("missing model parameter '" + key + "'");
  return it->second;
}

Mat rows_to_columns(const nlohmann::json& j, int dim, const std::string& what) {
  if (!j.is_array()) throw InvalidArgument(what + " must be an array of vectors");
  Mat m(dim, static_cast<Eigen::Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    if (!j[c].is_array() || static_cast<int>(j[c].size()) != dim)
      throw InvalidArgument(what + " entry has the wrong length");
    for (int r = 0; r < dim; ++r) m(r, static_cast<Eigen::Index>(c)) = j[c][r].get<double>();
  }
  return m;
}

}  // namespace

ModelPtr build_model(const std::string& kind, const std::map<std::string, int>& params) {
  if (kind == "classical") return classical(param(params, "d"));
  if (kind == "quantum") return quantum(param(params, "n"));
  if (kind == "rebit") return rebit();
  if (kind == "real_quantum") return real_quantum(param(params, "n"));
  if (kind == "doubled_quantum") return doubled_quantum(param(params, "n"));
  if (kind == "extended_classical") return extended_classical(param(params, "N"), param(params, "n"));
  if (kind == "square_bit") return square_bit();
  if (kind == "restricted_trit") return restricted_trit();
  if (kind == "diamond_bit") return diamond_bit();
  throw InvalidArgument("unknown model kind '" + kind + "'");
}

ModelPtr model_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("kind")) {
      std::map<std::string, int> params;
      if (j.contains("params"))
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
          params[it.key()] = it.value().get<int>();
      return build_model(j["kind"].get<std::string>(), params);
    }
    const int dim = j.at("vector_dim").get<int>();
    Vec u(dim);
    const auto& ju = j.at("unit_effect");
    if (static_cast<int>(ju.size()) != dim) throw InvalidArgument("unit_effect has the wrong length");
    for (int i = 0; i < dim; ++i) u(i) = ju[i].get<double>();
    Mat verts = rows_to_columns(j.at("state_vertices"), dim, "state_vertices");
    Mat effects = rows_to_columns(j.at("effect_generators"), dim, "effect_generators");
    std::vector<Mat> group;
    if (j.contains("group_generators")) {
      for (const auto& g : j["group_generators"]) {
        Mat m = rows_to_columns(g, dim, "group generator").transpose();
        group.push_back(m);
      }
    }
    return polytope(j.value("id", std::string("polytope")), u, verts, effects, group);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed model JSON: ") + e.what());
  }
}

nlohmann::json model_to_json(const ModelSpec& m) {
  nlohmann::json j;
  if (m.family == Family::Polytope) {
    j["id"] = m.id;
    j["vector_dim"] = m.vector_dim;
    j["unit_effect"] = std::vector<double>(m.unit_effect.data(), m.unit_effect.data() + m.vector_dim);
    auto cols = [](const Mat& mat) {
      nlohmann::json out = nlohmann::json::array();
      for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        Vec col = mat.col(c);
        out.push_back(std::vector<double>(col.data(), col.data() + col.size()));
      }
      return out;
    };
    j["state_vertices"] = cols(m.pure_vertices);
    j["effect_generators"] = cols(m.effect_cone.generators);
    j["group_generators"] = nlohmann::json::array();
    for (const Mat& g : m.group.generators) j["group_generators"].push_back(cols(g.transpose()));
    return j;
  }
  j["kind"] = to_string(m.family);
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : m.params) j["params"][k] = v;
  if (m.id == "rebit") j["kind"] = "rebit";
  return j;
}

ModelPtr parse_model_ref(const std::string& ref) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = ref.find(':', start);
    parts.push_back(ref.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) throw InvalidArgument("model reference '" + ref + "' is missing a parameter");
    try {
      return std::stoi(parts[i]);
    } catch (const std::exception&) {
      throw InvalidArgument("model reference '" + ref + "' has a non-integer parameter");
    }
  };
  const std::string& kind = parts[0];
  if (kind == "classical") return classical(num(1));
  if (kind == "quantum") return quantum(num(1));
  if (kind == "rebit") return rebit();
  if (kind == "real_quantum") return real_quantum(num(1));
  if (kind == "doubled_quantum") return doubled_quantum(num(1));
  if (kind == "extended_classical") return extended_classical(num(1), num(2));
  if (kind == "square_bit") return square_bit();
  if (kind == "restricted_trit") return restricted_trit();
  if (kind == "diamond_bit") return diamond_bit();
  std::ifstream in(ref);
  if (!in) throw InvalidArgument("unknown model '" + ref + "' (not a builtin, no such file)");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("cannot parse model file '" + ref + "': " + e.what());
  }
  return model_from_json(j);
}

// ---------------------------------------------------------------------------
// Composition

ModelPtr compose_systems(const ModelPtr& a, const ModelPtr& b) {
  if (!a->quantum_like() || !b->quantum_like())
    throw CompositionError("composition is not defined for " + a->id + " and " + b->id);
  const auto& la = a->sectors();
  const auto& lb = b->sectors();
  const int hb = lb.hilbert_dim();
  std::vector<std::vector<int>> sectors;
  CompositionKind rule;
  Family family;
  ModelFlags flags;

  if (a->composes_by == CompositionKind::Residue && b->composes_by == CompositionKind::Residue) {
    rule = CompositionKind::Residue;
    const int modulus = std::max(la.sector_count(), lb.sector_count());
    sectors.assign(modulus, {});
    for (int i = 0; i < la.hilbert_dim(); ++i)
      for (int j = 0; j < hb; ++j)
        sectors[(la.sector_of(i) + lb.sector_of(j)) % modulus].push_back(i * hb + j);
    family = (a->family == Family::DoubledQuantum && b->family == Family::DoubledQuantum)
                 ? Family::DoubledQuantum
                 : Family::ExtendedClassical;
    flags = ModelFlags{true, false, true};
  } else if (a->composes_by == CompositionKind::Kronecker && b->composes_by == CompositionKind::Kronecker) {
    const bool a_real_only = a->family == Family::Rebit || (a->family == Family::Hybrid && la.real());
    const bool b_real_only = b->family == Family::Rebit || (b->family == Family::Hybrid && lb.real());
    const bool a_complex = !la.real();
    const bool b_complex = !lb.real();
    if ((a_real_only && b_complex) || (b_real_only && a_complex))
      throw CompositionError("cannot compose real and complex quantum systems");
    rule = CompositionKind::Kronecker;
    for (int p = 0; p < la.sector_count(); ++p)
      for (int q = 0; q < lb.sector_count(); ++q) {
        std::vector<int> s;
        for (int i : la.sector(p))
          for (int j : lb.sector(q)) s.push_back(i * hb + j);
        std::sort(s.begin(), s.end());
        sectors.push_back(std::move(s));
      }
    if (a->family == Family::Classical && b->family == Family::Classical) {
      family = Family::Classical;
      flags.unrestricted_reversibility = true;
    } else if (a->family == b->family && (a->family == Family::Quantum || a->family == Family::Rebit)) {
      family = a->family;
      flags = ModelFlags{true, true, false};
    } else {
      family = Family::Hybrid;
      flags.sectorized = true;
    }
  } else {
    throw CompositionError("unsupported family pair: " + a->id + " and " + b->id);
  }
  const bool real = la.real() && lb.real();
  auto layout = std::make_shared<SectorLayout>(std::move(sectors), real);
  std::map<std::string, int> params{{"N", layout->sector_count()}, {"n", layout->sector_dim()}};
  auto m = block_model("(" + a->id + ")x(" + b->id + ")", family, layout, rule, flags, params);
  m->composite = CompositeInfo{a, b, rule};
  return m;
}

Vec sector_weights(const StateVec& rho) {
  const auto& m = *rho.model();
  if (!m.flags.sectorized) throw StructureError("model " + m.id + " is not sectorized");
  const auto& layout = m.sectors();
  Vec w(layout.sector_count());
  for (int k = 0; k < layout.sector_count(); ++k)
    w(k) = rho.coords().segment(layout.offset(k), layout.sector_dim(k)).sum();
  return w;
}

MaximalSet pure_maximal_set(const ModelPtr& model) {
  MaximalSet out;
  if (model->quantum_like()) {
    const int h = model->sectors().hilbert_dim();
    for (int i = 0; i < h; ++i) {
      CVec e = CVec::Unit(h, i);
      out.states.push_back(pure_state(model, e));
      out.daggers.emplace_back(model, out.states.back().coords());
    }
    return out;
  }
  if (model->capacity < 2)
    throw StructureError("model " + model->id + " has no perfectly distinguishable states");
  const int k = static_cast<int>(model->pure_vertices.cols());
  std::vector<bool> pick(k, false);
  std::fill(pick.begin(), pick.begin() + model->capacity, true);
  do {
    std::vector<Vec> states;
    for (int i = 0; i < k; ++i)
      if (pick[i]) states.push_back(model->pure_vertices.col(i));
    if (auto test = distinguishing_test_lp(*model, states)) {
      // Fold the complement into the last effect so the daggers sum to u.
      (*test)[states.size() - 1] += test->back();
      for (std::size_t i = 0; i < states.size(); ++i) {
        out.states.emplace_back(model, states[i]);
        out.daggers.emplace_back(model, (*test)[i]);
      }
      return out;
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  throw StructureError("no maximal set found for " + model->id);
}

// ---------------------------------------------------------------------------
// Quantum-like helpers

StateVec state_from_matrix(const ModelPtr& model, const CMat& rho) {
  const auto& layout = model->sectors();
  if (rho.rows() != layout.hilbert_dim() || rho.cols() != layout.hilbert_dim())
    throw DimensionError("matrix has the wrong size for " + model->id);
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9) throw InvalidArgument("matrix is not Hermitian");
  if (layout.off_block_norm(rho) > 1e-9)
    throw InvalidArgument("matrix has coherence across superselection sectors");
  return StateVec(model, layout.to_coords(rho));
}

EffectVec effect_from_matrix(const ModelPtr& model, const CMat& e) {
  const auto& layout = model->sectors();
  if (layout.off_block_norm(e) > 1e-9)
    throw InvalidArgument("effect has coherence across superselection sectors");
  return EffectVec(model, layout.to_coords(e));
}

CMat to_matrix(const StateVec& rho) { return rho.model()->sectors().to_matrix(rho.coords()); }
CMat to_matrix(const EffectVec& e) { return e.model()->sectors().to_matrix(e.coords()); }

StateVec pure_state(const ModelPtr& model, const CVec& psi) {
  const auto& layout = model->sectors();
  if (psi.size() != layout.hilbert_dim()) throw DimensionError("vector has the wrong size");
  if (std::abs(psi.norm() - 1.0) > 1e-9) throw InvalidArgument("pure state vector is not normalized");
  return state_from_matrix(model, psi * psi.adjoint());
}

StateVec chi(const ModelPtr& model) {
  if (!model->invariant) throw StructureError("model " + model->id + " has no unique invariant state");
  return StateVec(model, *model->invariant);
}

StateVec product_state(const ModelPtr& composite, const StateVec& a, const StateVec& b) {
  if (!composite->composite) throw StructureError(composite->id + " is not a composite");
  if (!same_system(composite->composite->a, a.model()) || !same_system(composite->composite->b, b.model()))
    throw DimensionError("factors do not match the composite");
  return state_from_matrix(composite, kron(to_matrix(a), to_matrix(b)));
}

EffectVec product_effect(const ModelPtr& composite, const EffectVec& a, const EffectVec& b) {
  if (!composite->composite) throw StructureError(composite->id + " is not a composite");
  if (!same_system(composite->composite->a, a.model()) || !same_system(composite->composite->b, b.model()))
    throw DimensionError("factors do not match the composite");
  return effect_from_matrix(composite, kron(to_matrix(a), to_matrix(b)));
}

ChannelMap swap_channel(const ModelPtr& composite) {
  if (!composite->composite) throw StructureError(composite->id + " is not a composite");
  const auto& info = *composite->composite;
  if (!same_system(info.a, info.b)) throw StructureError("swap needs two identical factors");
  const int h = info.a->sectors().hilbert_dim();
  CMat p = CMat::Zero(h * h, h * h);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) p(j * h + i, i * h + j) = 1.0;
  return ChannelMap::unitary(composite, p);
}

// ---------------------------------------------------------------------------
// Samplers

CMat random_unitary(int n, Rng& rng, bool real) {
  std::normal_distribution<double> gauss;
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = real ? Complex(gauss(rng), 0.0) : Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    if (mag > 0) q.col(i) *= d / mag;
  }
  return q;
}

CMat random_reversible_unitary(const ModelSpec& model, Rng& rng) {
  const auto& layout = model.sectors();
  const int h = layout.hilbert_dim();
  const int count = layout.sector_count();
  std::vector<int> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  CMat u = CMat::Zero(h, h);
  for (int k = 0; k < count; ++k) {
    const auto& src = layout.sector(k);
    const auto& dst = layout.sector(perm[k]);
    const int n = static_cast<int>(src.size());
    const CMat local = random_unitary(n, rng, layout.real());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) u(dst[i], src[j]) = local(i, j);
  }
  return u;
}

ChannelMap random_reversible(const ModelPtr& model, Rng& rng) {
  if (model->quantum_like()) return ChannelMap::unitary(model, random_reversible_unitary(*model, rng));
  const auto& elems = model->group_elements();
  std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
  unsigned tags = kReversible;
  if (model->invariant) tags |= kUnital;
  return ChannelMap::make(model, model, elems[pick(rng)], tags);
}

Vec random_distribution(int d, Rng& rng) {
  std::exponential_distribution<double> ex(1.0);
  Vec p(d);
  for (int i = 0; i < d; ++i) p(i) = ex(rng);
  return p / p.sum();
}

StateVec random_state(const ModelPtr& model, Rng& rng) {
  if (!model->quantum_like()) {
    const Vec w = random_distribution(static_cast<int>(model->pure_vertices.cols()), rng);
    return StateVec(model, model->pure_vertices * w);
  }
  const auto& layout = model->sectors();
  const int h = layout.hilbert_dim();
  const Vec weights = random_distribution(layout.sector_count(), rng);
  std::normal_distribution<double> gauss;
  CMat rho = CMat::Zero(h, h);
  for (int k = 0; k < layout.sector_count(); ++k) {
    const auto& idx = layout.sector(k);
    const int n = static_cast<int>(idx.size());
    CMat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g(i, j) = layout.real() ? Complex(gauss(rng), 0.0) : Complex(gauss(rng), gauss(rng));
    CMat block = g * g.adjoint();
    block /= block.trace().real();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rho(idx[i], idx[j]) = weights(k) * block(i, j);
  }
  return state_from_matrix(model, rho);
}

StateVec random_pure_state(const ModelPtr& model, Rng& rng) {
  if (!model->quantum_like()) {
    std::uniform_int_distribution<Eigen::Index> pick(0, model->pure_vertices.cols() - 1);
    return StateVec(model, model->pure_vertices.col(pick(rng)));
  }
  const auto& layout = model->sectors();
  std::uniform_int_distribution<int> pick(0, layout.sector_count() - 1);
  const auto& idx = layout.sector(pick(rng));
  std::normal_distribution<double> gauss;
  CVec psi = CVec::Zero(layout.hilbert_dim());
  for (int i : idx) psi(i) = layout.real() ? Complex(gauss(rng), 0.0) : Complex(gauss(rng), gauss(rng));
  psi.normalize();
  return pure_state(model, psi);
}

}  // namespace gptt
