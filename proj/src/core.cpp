#include "gptt/core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "gptt/lp.hpp"
#include "gptt/zoo.hpp"

namespace gptt {

std::string to_string(Family f) {
  switch (f) {
    case Family::Classical: return "classical";
    case Family::Quantum: return "quantum";
    case Family::Rebit: return "real_quantum";
    case Family::DoubledQuantum: return "doubled_quantum";
    case Family::ExtendedClassical: return "extended_classical";
    case Family::Hybrid: return "hybrid";
    case Family::SquareBit: return "square_bit";
    case Family::RestrictedTrit: return "restricted_trit";
    case Family::DiamondBit: return "diamond_bit";
    case Family::Polytope: return "polytope";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// SectorLayout

SectorLayout::SectorLayout(std::vector<std::vector<int>> sectors, bool real)
    : sectors_(std::move(sectors)), real_(real) {
  for (const auto& s : sectors_) hilbert_dim_ += static_cast<int>(s.size());
  sector_of_.assign(hilbert_dim_, -1);
  for (int k = 0; k < sector_count(); ++k) {
    offsets_.push_back(vector_dim_);
    vector_dim_ += block_coords(k);
    for (int b : sectors_[k]) {
      if (b < 0 || b >= hilbert_dim_ || sector_of_[b] != -1)
        throw InvalidArgument("sector layout is not a partition of the basis");
      sector_of_[b] = k;
    }
  }
}

int SectorLayout::block_coords(int k) const {
  const int n = sector_dim(k);
  return real_ ? n * (n + 1) / 2 : n * n;
}

Vec SectorLayout::to_coords(const CMat& h) const {
  Vec out(vector_dim_);
  const double r2 = std::sqrt(2.0);
  for (int k = 0; k < sector_count(); ++k) {
    const auto& idx = sectors_[k];
    const int n = static_cast<int>(idx.size());
    int pos = offsets_[k];
    for (int i = 0; i < n; ++i) out(pos++) = h(idx[i], idx[i]).real();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Complex z = 0.5 * (h(idx[i], idx[j]) + std::conj(h(idx[j], idx[i])));
        out(pos++) = r2 * z.real();
        if (!real_) out(pos++) = r2 * z.imag();
      }
    }
  }
  return out;
}

CMat SectorLayout::to_matrix(const Vec& coords) const {
  CMat h = CMat::Zero(hilbert_dim_, hilbert_dim_);
  const double r2 = std::sqrt(2.0);
  for (int k = 0; k < sector_count(); ++k) {
    const auto& idx = sectors_[k];
    const int n = static_cast<int>(idx.size());
    int pos = offsets_[k];
    for (int i = 0; i < n; ++i) h(idx[i], idx[i]) = coords(pos++);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double re = coords(pos++) / r2;
        const double im = real_ ? 0.0 : coords(pos++) / r2;
        h(idx[i], idx[j]) = Complex(re, im);
        h(idx[j], idx[i]) = Complex(re, -im);
      }
    }
  }
  return h;
}

double SectorLayout::off_block_norm(const CMat& h) const {
  double acc = 0.0;
  for (int i = 0; i < hilbert_dim_; ++i) {
    for (int j = 0; j < hilbert_dim_; ++j) {
      if (sector_of_[i] != sector_of_[j]) {
        acc += std::norm(h(i, j));
      } else if (real_) {
        acc += h(i, j).imag() * h(i, j).imag();
      }
    }
  }
  return std::sqrt(acc);
}

CMat SectorLayout::block(const Vec& coords, int k) const {
  const auto& idx = sectors_[k];
  const CMat full = to_matrix(coords);
  const int n = static_cast<int>(idx.size());
  CMat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = full(idx[i], idx[j]);
  return b;
}

ConeSpec ConeSpec::vertices(Mat generators) {
  ConeSpec c;
  c.kind = Kind::VertexGenerated;
  c.generators = std::move(generators);
  return c;
}

ConeSpec ConeSpec::blocks(std::shared_ptr<const SectorLayout> layout) {
  ConeSpec c;
  c.kind = Kind::BlockPositive;
  c.layout = std::move(layout);
  return c;
}

// ---------------------------------------------------------------------------
// ModelSpec

const SectorLayout& ModelSpec::sectors() const {
  if (!layout) throw StructureError("model " + id + " has no sector structure");
  return *layout;
}

namespace {

struct MatKeyHash {
  std::size_t operator()(const std::vector<long long>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (long long x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

std::vector<long long> mat_key(const Mat& m) {
  std::vector<long long> key(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i)
    key[i] = std::llround(m.data()[i] * 1e6);
  return key;
}

}  // namespace

const std::vector<Mat>& ModelSpec::group_elements() const {
  std::call_once(closure_once_, [this] {
    if (group.kind != GroupSpec::Kind::Finite) return;
    constexpr std::size_t kCap = 10000;
    std::unordered_map<std::vector<long long>, std::vector<std::size_t>, MatKeyHash> seen;
    auto insert = [&](const Mat& m) {
      auto key = mat_key(m);
      auto& bucket = seen[key];
      for (std::size_t idx : bucket)
        if ((closure_[idx] - m).cwiseAbs().maxCoeff() < kTol) return false;
      bucket.push_back(closure_.size());
      closure_.push_back(m);
      return true;
    };
    insert(Mat::Identity(vector_dim, vector_dim));
    std::deque<std::size_t> queue{0};
    while (!queue.empty() && closure_.size() < kCap) {
      const Mat current = closure_[queue.front()];
      queue.pop_front();
      for (const Mat& g : group.generators) {
        if (insert(g * current)) queue.push_back(closure_.size() - 1);
      }
    }
  });
  return closure_;
}

bool same_system(const ModelSpec& a, const ModelSpec& b) {
  return &a == &b || (a.id == b.id && a.vector_dim == b.vector_dim && a.family == b.family);
}

// ---------------------------------------------------------------------------
// States and effects

StateVec::StateVec(ModelPtr model, Vec coords) : model_(std::move(model)), coords_(std::move(coords)) {
  if (coords_.size() != model_->vector_dim)
    throw DimensionError("state has " + std::to_string(coords_.size()) + " coordinates, model " +
                         model_->id + " expects " + std::to_string(model_->vector_dim));
  if (coords_.norm() < kZeroNorm) throw InvalidArgument("zero state rejected");
}

double StateVec::trace() const { return model_->unit_effect.dot(coords_); }

bool StateVec::normalized(double tol) const { return std::abs(trace() - 1.0) <= tol; }

EffectVec::EffectVec(ModelPtr model, Vec coords) : model_(std::move(model)), coords_(std::move(coords)) {
  if (coords_.size() != model_->vector_dim)
    throw DimensionError("effect dimension does not match model " + model_->id);
}

EffectVec unit_effect(const ModelPtr& model) { return EffectVec(model, model->unit_effect); }

double pairing(const EffectVec& a, const StateVec& rho) {
  if (!same_system(a.model(), rho.model()))
    throw DimensionError("pairing across different systems: " + a.model()->id + " vs " +
                         rho.model()->id);
  return a.coords().dot(rho.coords());
}

double pairing(const EffectVec& a, const Vec& xi) {
  if (xi.size() != a.coords().size()) throw DimensionError("pairing dimension mismatch");
  return a.coords().dot(xi);
}

// ---------------------------------------------------------------------------
// Norms

double state_norm(const ModelSpec& model, const Vec& xi) {
  if (xi.size() != model.vector_dim) throw DimensionError("state_norm dimension mismatch");
  if (xi.norm() < kZeroNorm) return 0.0;
  if (model.quantum_like()) {
    const auto& layout = *model.layout;
    double acc = 0.0;
    for (int k = 0; k < layout.sector_count(); ++k)
      acc += hermitian_eig(layout.block(xi, k), layout.real()).values.cwiseAbs().sum();
    return acc;
  }
  // Base norm: min sum(u.v)(lambda+mu) with V lambda - V mu = xi.
  const Mat& v = model.pure_vertices;
  const Eigen::Index k = v.cols();
  Mat a(v.rows(), 2 * k);
  a << v, -v;
  Vec c(2 * k);
  for (Eigen::Index i = 0; i < k; ++i) c(i) = c(k + i) = model.unit_effect.dot(v.col(i));
  const auto res = lp::minimize(a, xi, c);
  if (res.status != lp::Status::Optimal)
    throw InvalidArgument("vector is not in the span of states");
  return res.objective;
}

double effect_norm(const ModelSpec& model, const Vec& x) {
  if (x.size() != model.vector_dim) throw DimensionError("effect_norm dimension mismatch");
  if (model.quantum_like()) {
    const auto& layout = *model.layout;
    double best = 0.0;
    for (int k = 0; k < layout.sector_count(); ++k)
      best = std::max(best, hermitian_eig(layout.block(x, k), layout.real()).values.cwiseAbs().maxCoeff());
    return best;
  }
  return (x.transpose() * model.pure_vertices).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Channels

Mat superoperator(const SectorLayout& in, const SectorLayout& out, const std::vector<CMat>& kraus) {
  Mat m(out.vector_dim(), in.vector_dim());
  for (int c = 0; c < in.vector_dim(); ++c) {
    const CMat x = in.to_matrix(Vec::Unit(in.vector_dim(), c));
    CMat y = CMat::Zero(out.hilbert_dim(), out.hilbert_dim());
    for (const auto& k : kraus) y += k * x * k.adjoint();
    if (out.off_block_norm(y) > 1e-9)
      throw InvalidArgument("map does not respect the sector structure of the output");
    m.col(c) = out.to_coords(y);
  }
  return m;
}

double ChannelMap::channel_residual() const {
  return (matrix_.transpose() * out_->unit_effect - in_->unit_effect).cwiseAbs().maxCoeff();
}

ChannelMap ChannelMap::make(ModelPtr in, ModelPtr out, Mat matrix, unsigned tags,
                            std::vector<RareTerm> witness, std::vector<CMat> kraus) {
  ChannelMap c;
  c.in_ = std::move(in);
  c.out_ = std::move(out);
  c.matrix_ = std::move(matrix);
  c.tags_ = tags;
  c.witness_ = std::move(witness);
  c.kraus_ = std::move(kraus);
  if (c.matrix_.rows() != c.out_->vector_dim || c.matrix_.cols() != c.in_->vector_dim)
    throw DimensionError("channel matrix shape does not match its systems");
  const double scale = std::max(1.0, c.matrix_.cwiseAbs().maxCoeff());
  if (c.channel_residual() > kTol * scale)
    throw InvalidArgument("not a channel: u_out M != u_in (residual " +
                          std::to_string(c.channel_residual()) + ")");
  if (c.has(kReversible)) {
    if (c.matrix_.rows() != c.matrix_.cols())
      throw InvalidArgument("reversible channel must be square");
    Eigen::FullPivLU<Mat> lu(c.matrix_);
    if (!lu.isInvertible()) throw InvalidArgument("reversible tag on a singular map");
    Mat inv = lu.inverse();
    const Mat id = Mat::Identity(c.matrix_.rows(), c.matrix_.cols());
    if ((inv * c.matrix_ - id).cwiseAbs().maxCoeff() > 1e-8 ||
        (c.matrix_ * inv - id).cwiseAbs().maxCoeff() > 1e-8)
      throw InvalidArgument("reversible tag: inverse check failed");
    c.inverse_ = std::move(inv);
  }
  if (c.has(kUnital)) {
    if (!c.in_->invariant || !c.out_->invariant)
      throw InvalidArgument("unital tag on a system without a unique invariant state");
    if ((c.matrix_ * *c.in_->invariant - *c.out_->invariant).cwiseAbs().maxCoeff() > 1e-8)
      throw InvalidArgument("unital tag: channel does not fix the invariant state");
  }
  if (c.has(kRare)) {
    if (c.witness_.empty()) throw InvalidArgument("RaRe tag without a witness");
    double total = 0.0;
    Mat sum = Mat::Zero(c.matrix_.rows(), c.matrix_.cols());
    for (const auto& term : c.witness_) {
      if (term.weight < -kTol) throw InvalidArgument("RaRe witness has a negative weight");
      total += term.weight;
      sum += term.weight * term.matrix;
      // Throws if the element is not reversible.
      ChannelMap::make(c.in_, c.out_, term.matrix, kReversible);
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("RaRe weights do not sum to one");
    if ((sum - c.matrix_).cwiseAbs().maxCoeff() > 1e-8)
      throw InvalidArgument("RaRe witness does not reproduce the channel");
  }
  return c;
}

ChannelMap ChannelMap::identity(const ModelPtr& model) {
  std::vector<CMat> kraus;
  if (model->quantum_like()) kraus.push_back(CMat::Identity(model->sectors().hilbert_dim(), model->sectors().hilbert_dim()));
  unsigned tags = kReversible;
  if (model->invariant) tags |= kUnital;
  return make(model, model, Mat::Identity(model->vector_dim, model->vector_dim), tags, {},
              std::move(kraus));
}

ChannelMap ChannelMap::unitary(const ModelPtr& model, const CMat& u) {
  const auto& layout = model->sectors();
  if (u.rows() != layout.hilbert_dim() || u.cols() != layout.hilbert_dim())
    throw DimensionError("unitary has the wrong size for " + model->id);
  if ((u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidArgument("matrix is not unitary");
  Mat m = superoperator(layout, layout, {u});
  unsigned tags = kReversible;
  if (model->invariant) tags |= kUnital;
  return make(model, model, std::move(m), tags, {}, {u});
}

ChannelMap ChannelMap::from_kraus(const ModelPtr& in, const ModelPtr& out,
                                  const std::vector<CMat>& kraus, unsigned tags) {
  return make(in, out, superoperator(in->sectors(), out->sectors(), kraus), tags, {}, kraus);
}

StateVec apply(const ChannelMap& c, const StateVec& rho) {
  if (!same_system(c.input(), rho.model()))
    throw DimensionError("channel input " + c.input()->id + " does not match state system " +
                         rho.model()->id);
  Vec out = c.matrix() * rho.coords();
  const auto mem = cone_membership(out, c.output()->state_cone);
  if (!mem.inside)
    throw ConeViolation("channel output leaves the state cone", mem.distance);
  return StateVec(c.output(), std::move(out));
}

ChannelMap compose(const ChannelMap& second, const ChannelMap& first) {
  if (!same_system(first.output(), second.input()))
    throw DimensionError("compose: output of the first channel is not the input of the second");
  unsigned tags = first.tags() & second.tags() & (kReversible | kUnital);
  std::vector<CMat> kraus;
  for (const auto& k2 : second.kraus())
    for (const auto& k1 : first.kraus()) kraus.push_back(k2 * k1);
  std::vector<RareTerm> witness;
  if (first.has(kRare) && second.has(kRare)) {
    tags |= kRare;
    for (const auto& t2 : second.witness())
      for (const auto& t1 : first.witness()) {
        RareTerm t{t2.weight * t1.weight, t2.matrix * t1.matrix, std::nullopt};
        if (t2.unitary && t1.unitary) t.unitary = *t2.unitary * *t1.unitary;
        witness.push_back(std::move(t));
      }
  }
  return ChannelMap::make(first.input(), second.output(), second.matrix() * first.matrix(), tags,
                          std::move(witness), std::move(kraus));
}

namespace {

// Columns: coordinates in `composite` of X_p (x) Y_q for the orthonormal
// coordinate bases of the two factors.
Mat product_basis(const SectorLayout& composite, const SectorLayout& a, const SectorLayout& b) {
  Mat p(composite.vector_dim(), a.vector_dim() * b.vector_dim());
  for (int i = 0; i < a.vector_dim(); ++i) {
    const CMat xa = a.to_matrix(Vec::Unit(a.vector_dim(), i));
    for (int j = 0; j < b.vector_dim(); ++j) {
      const CMat xb = b.to_matrix(Vec::Unit(b.vector_dim(), j));
      p.col(i * b.vector_dim() + j) = composite.to_coords(kron(xa, xb));
    }
  }
  return p;
}

}  // namespace

ChannelMap tensor(const ChannelMap& c1, const ChannelMap& c2) {
  const ModelPtr in = compose_systems(c1.input(), c2.input());
  const ModelPtr out = compose_systems(c1.output(), c2.output());
  if (!in->quantum_like() || !out->quantum_like())
    throw CompositionError("tensor requires quantum-like systems");
  unsigned tags = c1.tags() & c2.tags() & (kReversible | kUnital);
  std::vector<RareTerm> witness;
  if (c1.has(kRare) && c2.has(kRare)) {
    for (const auto& t1 : c1.witness())
      for (const auto& t2 : c2.witness()) {
        const auto e1 = ChannelMap::make(c1.input(), c1.output(), t1.matrix);
        const auto e2 = ChannelMap::make(c2.input(), c2.output(), t2.matrix);
        std::vector<CMat> k;
        if (t1.unitary && t2.unitary) k.push_back(kron(*t1.unitary, *t2.unitary));
        Mat m;
        if (!k.empty()) {
          m = superoperator(in->sectors(), out->sectors(), k);
        } else {
          m = tensor(e1, e2).matrix();
        }
        witness.push_back(RareTerm{t1.weight * t2.weight, std::move(m),
                                   k.empty() ? std::nullopt : std::optional<CMat>(k.front())});
      }
    tags |= kRare;
  }
  if (!c1.kraus().empty() && !c2.kraus().empty()) {
    std::vector<CMat> kraus;
    for (const auto& k1 : c1.kraus())
      for (const auto& k2 : c2.kraus()) kraus.push_back(kron(k1, k2));
    Mat m = superoperator(in->sectors(), out->sectors(), kraus);
    return ChannelMap::make(in, out, std::move(m), tags, std::move(witness), std::move(kraus));
  }
  if (in->composite->rule != CompositionKind::Kronecker)
    throw CompositionError("tensor on a non-locally-tomographic composite needs Kraus operators");
  const Mat p_in = product_basis(in->sectors(), c1.input()->sectors(), c2.input()->sectors());
  const Mat p_out = product_basis(out->sectors(), c1.output()->sectors(), c2.output()->sectors());
  Mat m = p_out * kron(c1.matrix(), c2.matrix()) * p_in.transpose();
  return ChannelMap::make(in, out, std::move(m), tags, std::move(witness));
}

// ---------------------------------------------------------------------------
// Marginals

Vec partial_trace(const ModelSpec& composite, const Vec& coords, Factor keep) {
  if (!composite.composite) throw StructureError("model " + composite.id + " is not a composite");
  const auto& info = *composite.composite;
  const int ha = info.a->sectors().hilbert_dim();
  const int hb = info.b->sectors().hilbert_dim();
  const CMat x = composite.sectors().to_matrix(coords);
  if (keep == Factor::A) {
    CMat r = CMat::Zero(ha, ha);
    for (int i = 0; i < ha; ++i)
      for (int j = 0; j < ha; ++j)
        for (int b = 0; b < hb; ++b) r(i, j) += x(i * hb + b, j * hb + b);
    return info.a->sectors().to_coords(r);
  }
  CMat r = CMat::Zero(hb, hb);
  for (int i = 0; i < hb; ++i)
    for (int j = 0; j < hb; ++j)
      for (int a = 0; a < ha; ++a) r(i, j) += x(a * hb + i, a * hb + j);
  return info.b->sectors().to_coords(r);
}

StateVec marginal(const StateVec& rho_ab, Factor keep) {
  const auto& m = *rho_ab.model();
  if (!m.composite) throw StructureError("model " + m.id + " is not a composite");
  const ModelPtr& target = keep == Factor::A ? m.composite->a : m.composite->b;
  return StateVec(target, partial_trace(m, rho_ab.coords(), keep));
}

// ---------------------------------------------------------------------------
// Cones

Membership cone_membership(const Vec& xi, const ConeSpec& cone, double tol) {
  Membership out;
  if (cone.kind == ConeSpec::Kind::BlockPositive) {
    const auto& layout = *cone.layout;
    if (xi.size() != layout.vector_dim()) throw DimensionError("cone_membership dimension mismatch");
    double worst = 0.0;
    for (int k = 0; k < layout.sector_count(); ++k) {
      const auto eig = hermitian_eig(layout.block(xi, k), layout.real());
      worst = std::min(worst, eig.values(eig.values.size() - 1));
    }
    out.distance = std::max(0.0, -worst);
    out.inside = out.distance <= scaled_tol(xi.cwiseAbs().maxCoeff(), tol);
    if (out.inside) out.distance = 0.0;
    return out;
  }
  if (xi.size() != cone.generators.rows()) throw DimensionError("cone_membership dimension mismatch");
  const auto res = lp::feasible(cone.generators, xi, tol);
  out.inside = res.status != lp::Status::Infeasible;
  out.distance = out.inside ? 0.0 : res.infeasibility;
  return out;
}

Mat fixed_point_space(const std::vector<Mat>& generators, int dim) {
  Mat stacked(static_cast<Eigen::Index>(generators.size()) * dim, dim);
  for (std::size_t i = 0; i < generators.size(); ++i)
    stacked.middleRows(static_cast<Eigen::Index>(i) * dim, dim) = generators[i] - Mat::Identity(dim, dim);
  return null_space(stacked);
}

std::optional<std::vector<Vec>> distinguishing_test_lp(const ModelSpec& model,
                                                       const std::vector<Vec>& states) {
  if (model.effect_cone.kind != ConeSpec::Kind::VertexGenerated)
    throw UnsupportedError("LP distinguishability search needs a polyhedral effect cone");
  const Mat& g = model.effect_cone.generators;
  const int dim = model.vector_dim;
  const int k = static_cast<int>(g.cols());
  const int m = static_cast<int>(states.size());
  const int outcomes = m + 1;  // last outcome is the complement
  const int rows = dim + outcomes * m;
  Mat a = Mat::Zero(rows, outcomes * k);
  Vec b = Vec::Zero(rows);
  for (int o = 0; o < outcomes; ++o) a.block(0, o * k, dim, k) = g;
  b.head(dim) = model.unit_effect;
  for (int o = 0; o < outcomes; ++o) {
    for (int j = 0; j < m; ++j) {
      const int r = dim + o * m + j;
      a.block(r, o * k, 1, k) = states[j].transpose() * g;
      b(r) = (o == j) ? 1.0 : 0.0;
    }
  }
  const auto res = lp::feasible(a, b, 1e-9);
  if (res.status == lp::Status::Infeasible) return std::nullopt;
  std::vector<Vec> effects;
  for (int o = 0; o < outcomes; ++o) effects.push_back(g * res.x.segment(o * k, k));
  return effects;
}

}  // namespace gptt
