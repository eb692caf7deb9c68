#include "gptt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gptt/resource.hpp"
#include "gptt/spectral.hpp"
#include "gptt/symmetry.hpp"
#include "gptt/thermo.hpp"
#include "gptt/zoo.hpp"

namespace gptt {
namespace {

using json = nlohmann::json;

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;  // drop the sign of negative zero
  return r;
}

json vec(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

json mat(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i).transpose()));
  return a;
}

json tags_json(const ChannelMap& c) {
  json t = json::array();
  if (c.has(kReversible)) t.push_back("reversible");
  if (c.has(kUnital)) t.push_back("unital");
  if (c.has(kRare)) t.push_back("rare");
  if (c.has(kMeasureAndPrepare)) t.push_back("measure-and-prepare");
  return t;
}

class Report {
 public:
  Report(std::string command, std::uint64_t seed) {
    j_["command"] = std::move(command);
    j_["seed"] = seed;
    j_["tool_version"] = kToolVersion;
    j_["results"] = json::object();
    j_["checks"] = json::array();
    j_["model"] = nullptr;
  }
  void model(const ModelSpec& m) {
    json params = json::object();
    for (const auto& [k, v] : m.params) params[k] = v;
    j_["model"] = {{"id", m.id}, {"params", params}};
  }
  json& results() { return j_["results"]; }
  void check(const std::string& name, double residual, double tolerance) {
    const bool pass = !std::isnan(residual) && residual <= tolerance;
    j_["checks"].push_back({{"name", name}, {"pass", pass}, {"residual", num(residual)}, {"tolerance", num(tolerance)}});
  }
  void flag(const std::string& name, bool value) { check(name, value ? 0.0 : 1.0, 0.0); }

  void print(std::ostream& out, bool as_json) const {
    if (as_json) {
      out << j_.dump(2) << "\n";
      return;
    }
    out << "gptt " << j_["command"].get<std::string>();
    if (!j_["model"].is_null()) out << "  model=" << j_["model"]["id"].get<std::string>();
    out << "  seed=" << j_["seed"].get<std::uint64_t>() << "\n";
    for (auto it = j_["results"].begin(); it != j_["results"].end(); ++it) {
      const std::string text = it.value().dump();
      out << "  " << it.key() << ": ";
      if (text.size() <= 160) out << text << "\n";
      else out << "(" << text.size() << " bytes, see --json)\n";
    }
    if (!j_["checks"].empty()) out << "checks:\n";
    for (const auto& c : j_["checks"]) {
      out << "  [" << (c["pass"].get<bool>() ? "pass" : "FAIL") << "] " << c["name"].get<std::string>()
          << "  residual=" << c["residual"].dump() << "  tol=" << c["tolerance"].dump() << "\n";
    }
  }

 private:
  json j_;
};

// ---------------------------------------------------------------------------
// Input parsing

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument("cannot parse " + what + ": " + e.what());
  }
}

CMat matrix_from_json(const json& j) {
  auto real_part = [](const json& rows) {
    if (!rows.is_array() || rows.empty()) throw InvalidArgument("matrix must be a non-empty nested array");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
        throw InvalidArgument("matrix must be square");
      for (Eigen::Index k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return m;
  };
  try {
    if (j.is_object()) {
      const Mat re = real_part(j.at("re"));
      Mat im = Mat::Zero(re.rows(), re.cols());
      if (j.contains("im")) im = real_part(j["im"]);
      if (im.rows() != re.rows()) throw InvalidArgument("re and im parts differ in size");
      CMat out(re.rows(), re.cols());
      out.real() = re;
      out.imag() = im;
      return out;
    }
    return real_part(j).cast<Complex>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed matrix: ") + e.what());
  }
}

std::uint64_t seed_from(const std::string& text) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(text, &pos);
    if (pos != text.size()) throw InvalidArgument("bad seed '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad seed '" + text + "'");
  }
}

StateVec checked_state(const ModelPtr& model, const Vec& coords) {
  if (coords.size() != model->vector_dim)
    throw InvalidArgument("state needs " + std::to_string(model->vector_dim) + " coordinates for " + model->id);
  StateVec s(model, coords);
  if (!s.normalized(1e-8)) throw InvalidArgument("state is not normalized");
  if (!cone_membership(coords, model->state_cone, 1e-8).inside) throw InvalidArgument("vector is not a state");
  return s;
}

StateVec parse_state(const ModelPtr& model, const std::string& spec) {
  auto after = [&](const std::string& prefix) { return spec.substr(prefix.size()); };
  if (spec == "chi") return chi(model);
  if (spec == "pure0") {
    if (model->quantum_like()) return pure_maximal_set(model).states.front();
    return StateVec(model, model->pure_vertices.col(0));
  }
  if (spec.rfind("random:", 0) == 0) {
    Rng rng(seed_from(after("random:")));
    return random_state(model, rng);
  }
  if (spec.rfind("pure-random:", 0) == 0) {
    Rng rng(seed_from(after("pure-random:")));
    return random_pure_state(model, rng);
  }
  if (spec.rfind("vertex:", 0) == 0) {
    const auto i = static_cast<Eigen::Index>(seed_from(after("vertex:")));
    if (model->quantum_like() || i >= model->pure_vertices.cols()) throw InvalidArgument("no such vertex");
    return StateVec(model, model->pure_vertices.col(i));
  }
  if (spec == "center-offset") {
    if (model->quantum_like() || !model->invariant || model->vector_dim < 3)
      throw InvalidArgument("center-offset needs a polytope model with an invariant state");
    Vec x = *model->invariant;
    x(0) += 0.3;
    x(1) += 0.1;
    return checked_state(model, x);
  }
  if (spec == "counterexample-rho") return sector_counterexample(model).first;
  if (spec == "counterexample-sigma") return sector_counterexample(model).second;
  const json j = parse_json_text(spec, "state");
  if (j.is_object() || (j.is_array() && !j.empty() && j[0].is_array())) {
    if (!model->quantum_like()) throw InvalidArgument("matrix input needs a quantum-like model");
    const CMat m = matrix_from_json(j);
    if (m.rows() != model->sectors().hilbert_dim()) throw InvalidArgument("matrix has the wrong size");
    return checked_state(model, state_from_matrix(model, m).coords());
  }
  if (!j.is_array()) throw InvalidArgument("state must be a name, a coordinate array or a matrix");
  Vec x(static_cast<Eigen::Index>(j.size()));
  try {
    for (std::size_t i = 0; i < j.size(); ++i) x(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("state coordinates must be numbers: ") + e.what());
  }
  return checked_state(model, x);
}

double parse_beta(const std::string& text) {
  char* end = nullptr;
  const double b = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || std::isnan(b)) throw InvalidArgument("bad beta '" + text + "'");
  return b;
}

Observable parse_observable(const ModelPtr& model_or_null, const std::string& text) {
  const json j = parse_json_text(text, "observable");
  if (j.is_array() && !j.empty() && !j[0].is_array()) {
    Vec e(static_cast<Eigen::Index>(j.size()));
    try {
      for (std::size_t i = 0; i < j.size(); ++i) e(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    } catch (const json::exception& ex) {
      throw InvalidArgument(std::string("energies must be numbers: ") + ex.what());
    }
    const ModelPtr model = model_or_null ? model_or_null : classical(static_cast<int>(e.size()));
    return observable(model, e);
  }
  if (!model_or_null || !model_or_null->quantum_like())
    throw InvalidArgument("matrix observables need a quantum-like --model");
  const CMat m = matrix_from_json(j);
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9) throw InvalidArgument("observable is not Hermitian");
  return observable_from_effect(model_or_null, effect_from_matrix(model_or_null, m).coords());
}

Vec default_energies(int d) {
  Vec e(d);
  for (int i = 0; i < d; ++i) e(i) = i;
  return e;
}

// ---------------------------------------------------------------------------
// Commands

struct Common {
  std::string model = "";
  std::uint64_t seed = 0;
  bool as_json = false;
};

int cmd_diag(const Common& c, const std::string& state, const std::string& method, std::ostream& out) {
  const ModelPtr model = parse_model_ref(c.model);
  const StateVec rho = parse_state(model, state);
  Report r("diag", c.seed);
  r.model(*model);
  DiagMethod m = DiagMethod::Auto;
  if (method == "fast") m = DiagMethod::Fast;
  else if (method == "peel") m = DiagMethod::Peel;
  else if (method != "auto") throw InvalidArgument("method must be auto, fast or peel");
  try {
    const Diagonalization d = diagonalize(rho, m);
    r.results()["spectrum"] = vec(d.eigenvalues);
    json states = json::array();
    for (const auto& s : d.eigenstates) states.push_back(vec(s.coords()));
    r.results()["eigenstates"] = states;
    json reduced = json::array();
    for (const auto& l : d.reduced) reduced.push_back({{"value", num(l.value)}, {"multiplicity", l.multiplicity}});
    r.results()["reduced"] = reduced;
    const double recon = (d.reconstruct() - rho.coords()).cwiseAbs().maxCoeff();
    double duality = 0.0;
    for (std::size_t i = 0; i < d.dagger_effects.size(); ++i)
      for (std::size_t j = 0; j < d.eigenstates.size(); ++j)
        duality = std::max(duality, std::abs(pairing(d.dagger_effects[i], d.eigenstates[j]) - (i == j ? 1.0 : 0.0)));
    r.results()["reconstruction_residual"] = num(recon);
    r.check("reconstruction", recon, 1e-9);
    r.check("normalization", std::abs(d.eigenvalues.sum() - rho.trace()), 1e-9);
    r.check("nonnegative", std::max(0.0, -d.eigenvalues.minCoeff()), 1e-9);
    r.check("dagger_duality", duality, 1e-9);
    r.print(out, c.as_json);
    return kExitOk;
  } catch (const DiagonalizationFailure& e) {
    r.results()["error"] = e.what();
    r.results()["residue"] = vec(e.residue());
    r.check("diagonalization", e.residue().cwiseAbs().maxCoeff(), 0.0);
    r.print(out, c.as_json);
    return kExitDiagFailure;
  }
}

int cmd_convert(const Common& c, const std::string& rho_s, const std::string& sigma_s, const std::string& theory,
                std::ostream& out) {
  const ModelPtr model = parse_model_ref(c.model);
  const StateVec rho = parse_state(model, rho_s);
  const StateVec sigma = parse_state(model, sigma_s);
  const Theory t = parse_theory(theory);
  const ConvertibilityVerdict v = convertible(rho, sigma, t);
  Report r("convert", c.seed);
  r.model(*model);
  auto& res = r.results();
  res["theory"] = to_string(v.theory);
  res["answer"] = to_string(v.answer);
  if (!v.certificate.empty()) res[v.answer == Answer::No ? "certificate" : "reason"] = v.certificate;
  if (v.violated_prefix > 0) res["violated_prefix"] = v.violated_prefix;
  if (v.weights_rho) res["sector_weights_rho"] = vec(sorted_desc(*v.weights_rho));
  if (v.weights_sigma) res["sector_weights_sigma"] = vec(sorted_desc(*v.weights_sigma));
  if (v.channel) {
    res["channel"] = {{"matrix", mat(v.channel->matrix())},
                      {"tags", tags_json(*v.channel)},
                      {"witness_terms", v.channel->witness().size()}};
    r.check("image", (v.channel->matrix() * rho.coords() - sigma.coords()).cwiseAbs().maxCoeff(), 1e-8);
    r.check("channel_condition", v.channel->channel_residual(), 1e-9);
    if (model->invariant)
      r.check("fixes_invariant",
              (v.channel->matrix() * *model->invariant - *model->invariant).cwiseAbs().maxCoeff(), 1e-8);
  }
  r.print(out, c.as_json);
  switch (v.answer) {
    case Answer::Yes: return kExitOk;
    case Answer::No: return kExitNo;
    case Answer::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

json ledger_json(const ThermoLedger& l) {
  return {{"beta", num(l.beta)},
          {"kT", num(l.kt)},
          {"temperature", num(l.temperature)},
          {"delta_E_env", num(l.delta_e_env)},
          {"dS_system", num(l.ds_system)},
          {"mutual_term", num(l.mutual_term)},
          {"relent_term", num(l.relent_term.value)},
          {"equality_residual", num(l.equality_residual)},
          {"equality_checked", l.equality_checked},
          {"bound_slack", num(l.bound_slack)},
          {"second_law_sum", num(l.second_law_sum)}};
}

void ledger_checks(Report& r, const ThermoLedger& l) {
  if (l.equality_checked) r.check("landauer_equality", std::abs(l.equality_residual), 1e-7);
  r.check("landauer_bound", std::max(0.0, -l.bound_slack), 1e-9);
  r.check("second_law_lemma", std::max(0.0, -l.second_law_sum), 1e-9);
  r.check("mutual_nonnegative", std::max(0.0, -l.mutual_term), 1e-9);
  r.check("relent_nonnegative", std::max(0.0, -l.relent_term.value), 1e-9);
}

Observable env_observable(const ModelPtr& env, const std::string& h) {
  if (h.empty()) return observable(env, default_energies(static_cast<int>(pure_maximal_set(env).states.size())));
  return parse_observable(env, h);
}

int cmd_landauer(const Common& c, const std::string& rho_s, const std::string& beta_s, const std::string& env_s,
                 const std::string& h, const std::string& interaction, std::ostream& out) {
  const ModelPtr sys = parse_model_ref(c.model.empty() ? "quantum:2" : c.model);
  const ModelPtr env = env_s.empty() ? sys : parse_model_ref(env_s);
  const StateVec rho = parse_state(sys, rho_s);
  const double beta = parse_beta(beta_s);
  const Observable h_env = env_observable(env, h);
  const ModelPtr joint = compose_systems(sys, env);
  std::optional<ChannelMap> u;
  if (interaction == "swap") {
    u = swap_channel(joint);
  } else if (interaction == "identity") {
    u = ChannelMap::identity(joint);
  } else if (interaction.rfind("random:", 0) == 0) {
    Rng rng(seed_from(interaction.substr(7)));
    u = random_reversible(joint, rng);
  } else {
    std::ifstream in(interaction);
    if (!in) throw InvalidArgument("interaction must be swap, identity, random:SEED or a JSON file");
    std::stringstream buf;
    buf << in.rdbuf();
    u = ChannelMap::unitary(joint, matrix_from_json(parse_json_text(buf.str(), "interaction file")));
  }
  const ThermoLedger l = landauer_ledger(rho, h_env, beta, *u);
  Report r("landauer", c.seed);
  r.model(*sys);
  r.results() = ledger_json(l);
  r.results()["interaction"] = interaction;
  r.results()["environment"] = env->id;
  ledger_checks(r, l);
  r.print(out, c.as_json);
  return kExitOk;
}

int cmd_erase(const Common& c, const std::string& rho_s, const std::string& beta_s, const std::string& env_s,
              const std::string& h, std::ostream& out) {
  const ModelPtr sys = parse_model_ref(c.model.empty() ? "quantum:2" : c.model);
  const ModelPtr env = env_s.empty() ? sys : parse_model_ref(env_s);
  const StateVec rho = parse_state(sys, rho_s);
  const double beta = parse_beta(beta_s);
  const ErasureReport e = erasure_demo(rho, env_observable(env, h), beta);
  Report r("erase", c.seed);
  r.model(*sys);
  auto& res = r.results();
  res["delta_E_env"] = num(e.delta_e_env);
  res["S_system_before"] = num(e.s_system_before);
  res["S_system_after"] = num(e.s_system_after);
  res["S_memory_before"] = num(e.s_memory_before);
  res["S_memory_after"] = num(e.s_memory_after);
  res["conditional_before"] = num(e.cond_before);
  res["conditional_after"] = num(e.cond_after);
  res["memory_bound_rhs"] = num(e.bound_rhs);
  res["joint_ledger"] = ledger_json(e.ledger);
  r.check("zero_cost", std::abs(e.delta_e_env), 1e-10);
  r.check("system_erased", std::abs(e.s_system_after), 1e-9);
  r.check("memory_condition", std::max(0.0, e.s_memory_after - e.s_memory_before), 1e-9);
  r.check("memory_assisted_bound", e.bound_ok ? 0.0 : e.bound_rhs - e.delta_e_env, 1e-9);
  if (e.ledger.equality_checked) r.check("joint_landauer_equality", std::abs(e.ledger.equality_residual), 1e-7);
  r.print(out, c.as_json);
  return kExitOk;
}

int cmd_verify(const Common& c, std::ostream& out) {
  const ModelPtr model = parse_model_ref(c.model);
  Report r("verify", c.seed);
  r.model(*model);
  auto& res = r.results();
  res["family"] = to_string(model->family);
  res["capacity"] = model->capacity;
  res["vector_dim"] = model->vector_dim;

  const bool transitive = is_transitive(model);
  res["transitive"] = transitive;
  const InvariantReport inv = invariant_state(model);
  res["invariant_unique"] = inv.state.has_value();
  res["fixed_dimension"] = inv.fixed_dimension;
  if (inv.state) res["invariant_state"] = vec(inv.state->coords());

  const UnrestrictedReport ur = check_unrestricted_reversibility(model);
  auto tri = [](const std::optional<bool>& b) -> json { return b ? json(*b) : json("unknown"); };
  res["permutability"] = tri(ur.permutability);
  res["strong_symmetry"] = tri(ur.strong_symmetry);
  res["unrestricted_note"] = ur.note;
  if (ur.counterexample)
    res["counterexample"] = {{"rho", vec(ur.counterexample->first.coords())},
                             {"sigma", vec(ur.counterexample->second.coords())}};

  // Largest set of pure states with a perfectly distinguishing test.
  int found = 0;
  if (model->quantum_like()) {
    const MaximalSet set = pure_maximal_set(model);
    if (perfectly_distinguishable_search(model, set.states)) found = static_cast<int>(set.states.size());
  } else {
    const int k = static_cast<int>(model->pure_vertices.cols());
    for (int size = k; size >= 2 && found == 0; --size) {
      std::vector<bool> pick(static_cast<std::size_t>(k), false);
      std::fill(pick.begin(), pick.begin() + size, true);
      do {
        std::vector<StateVec> states;
        for (int i = 0; i < k; ++i)
          if (pick[static_cast<std::size_t>(i)]) states.emplace_back(model, model->pure_vertices.col(i));
        if (perfectly_distinguishable_search(model, states)) {
          found = size;
          break;
        }
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }
  res["distinguishable_set_size"] = found;
  res["distinguishable_found"] = found >= 2;
  r.flag("distinguishability_search", true);
  r.flag("transitivity", transitive);
  if (ur.permutability) r.flag("permutability", *ur.permutability);
  if (ur.strong_symmetry) r.flag("strong_symmetry", *ur.strong_symmetry);
  try {
    const EquilibriumCheck eq = informational_equilibrium_check(model, model);
    res["informational_equilibrium"] = eq.pass;
    r.check("informational_equilibrium", eq.residual, 1e-8);
  } catch (const CompositionError& e) {
    res["informational_equilibrium"] = std::string("not applicable: ") + e.what();
  }
  r.print(out, c.as_json);
  return kExitOk;
}

int cmd_gibbs(const Common& c, const std::string& h, const std::string& e_s, const std::string& beta_s,
              std::ostream& out) {
  if (h.empty()) throw InvalidArgument("gibbs needs --H");
  if (e_s.empty() == beta_s.empty()) throw InvalidArgument("give exactly one of --E and --beta");
  const ModelPtr model = c.model.empty() ? nullptr : parse_model_ref(c.model);
  const Observable obs = parse_observable(model, h);
  Report r("gibbs", c.seed);
  r.model(*obs.model);
  double beta = 0.0;
  if (!e_s.empty()) {
    const double e = parse_beta(e_s);
    beta = beta_from_energy(obs.energies, e);
    r.results()["target_energy"] = num(e);
    r.check("energy_roundtrip", std::abs(mean_energy(obs.energies, beta) - e), 1e-10);
  } else {
    beta = parse_beta(beta_s);
  }
  const Vec w = gibbs_weights(obs.energies, beta);
  const StateVec gamma = gibbs_state(obs, beta);
  const double s = entropy(gamma);
  const double energy = mean_energy(obs.energies, beta);
  auto& res = r.results();
  res["beta"] = num(beta);
  res["energies"] = vec(obs.energies);
  res["weights"] = vec(w);
  res["mean_energy"] = num(energy);
  res["entropy"] = num(s);
  res["state"] = vec(gamma.coords());
  if (std::isfinite(beta)) {
    const double lz = log_partition(obs.energies, beta);
    res["log_partition"] = num(lz);
    r.check("entropy_identity", std::abs(s - (beta * energy + lz)), 1e-9);
  }
  r.print(out, c.as_json);
  return kExitOk;
}

int cmd_entropy(const Common& c, const std::string& state, const std::string& sigma_s, const std::string& alpha_s,
                std::ostream& out) {
  const ModelPtr model = parse_model_ref(c.model);
  const StateVec rho = parse_state(model, state);
  const Diagonalization d = diagonalize(rho);
  Report r("entropy", c.seed);
  r.model(*model);
  auto& res = r.results();
  res["spectrum"] = vec(d.eigenvalues);
  json renyis = json::object();
  const double ln_d = std::log(static_cast<double>(d.eigenvalues.size()));
  double bound_violation = 0.0;
  for (const auto& [name, alpha] : std::vector<std::pair<std::string, double>>{
           {"0", 0.0}, {"0.5", 0.5}, {"1", 1.0}, {"2", 2.0}, {"inf", kInf}}) {
    const double h = renyi(d.eigenvalues, alpha);
    renyis[name] = num(h);
    bound_violation = std::max({bound_violation, -h, h - ln_d});
  }
  res["renyi"] = renyis;
  if (!alpha_s.empty()) res["renyi_alpha"] = num(renyi(d.eigenvalues, parse_beta(alpha_s)));
  r.check("entropy_bounds", bound_violation, 1e-9);
  if (!sigma_s.empty()) {
    const RelativeEntropy re = relative_entropy(rho, parse_state(model, sigma_s));
    res["relative_entropy"] = num(re.value);
    r.check("klein", std::max(0.0, -re.value), 1e-9);
  }
  if (model->composite) {
    const BipartiteEntropies b = bipartite_entropies(rho);
    res["bipartite"] = {{"S_AB", num(b.s_ab)},
                        {"S_A", num(b.s_a)},
                        {"S_B", num(b.s_b)},
                        {"mutual", num(b.mutual)},
                        {"conditional", num(b.conditional)}};
    r.check("subadditivity", std::max(0.0, -b.mutual), 1e-9);
    r.check("triangle", std::max(0.0, std::abs(b.s_a - b.s_b) - b.s_ab), 1e-9);
  }
  r.print(out, c.as_json);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gptt: toolkit for sharp general probabilistic theories"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Common c;
  std::string seed_text = "0";
  auto common = [&](CLI::App* sub, bool model_required) {
    auto* opt = sub->add_option("--model", c.model, "builtin model (e.g. quantum:3) or model JSON file");
    if (model_required) opt->required();
    sub->add_option("--seed", seed_text, "seed for randomized checks (GPTT_SEED overrides)");
    sub->add_flag("--json", c.as_json, "print the report as JSON");
  };

  std::string state = "chi", sigma, method = "auto", theory, beta = "1", env, h, interaction = "swap", e_s,
              alpha;
  auto* diag = app.add_subcommand("diag", "diagonalize a state");
  common(diag, true);
  diag->add_option("--state", state, "chi, pure0, random:SEED, vertex:I, center-offset, JSON");
  diag->add_option("--method", method, "auto, fast or peel");

  std::string rho = "chi";
  auto* conv = app.add_subcommand("convert", "decide convertibility of rho into sigma");
  common(conv, true);
  conv->add_option("--rho", rho)->required();
  conv->add_option("--sigma", sigma)->required();
  conv->add_option("--theory", theory, "rare, noisy or unital")->required();

  std::string rho_l = "pure0";
  auto* land = app.add_subcommand("landauer", "Landauer ledger of a reversible interaction");
  common(land, false);
  land->add_option("--rho", rho_l, "system state");
  land->add_option("--beta", beta, "inverse temperature");
  land->add_option("--env", env, "environment model (default: same as the system)");
  land->add_option("--H", h, "environment energies (JSON array) or matrix");
  land->add_option("--interaction", interaction, "swap, identity, random:SEED or unitary JSON file");

  std::string rho_e = "chi";
  auto* erase = app.add_subcommand("erase", "erase a mixed state with a quantum memory");
  common(erase, false);
  erase->add_option("--rho", rho_e, "system state");
  erase->add_option("--beta", beta, "inverse temperature");
  erase->add_option("--env", env, "environment model (default: same as the system)");
  erase->add_option("--H", h, "environment energies");

  auto* verify = app.add_subcommand("verify", "axiom battery for a model");
  common(verify, true);

  std::string beta_g;
  auto* gibbs = app.add_subcommand("gibbs", "Gibbs state of an observable");
  common(gibbs, false);
  gibbs->add_option("--H", h, "energies (JSON array) or matrix")->required();
  gibbs->add_option("--E", e_s, "target mean energy");
  gibbs->add_option("--beta", beta_g, "inverse temperature");

  auto* ent = app.add_subcommand("entropy", "entropies of a state");
  common(ent, true);
  ent->add_option("--state", state);
  ent->add_option("--sigma", sigma, "second state for the relative entropy");
  ent->add_option("--alpha", alpha, "additional Renyi order");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (const char* env_seed = std::getenv("GPTT_SEED")) seed_text = env_seed;
    c.seed = seed_from(seed_text);
    if (diag->parsed()) return cmd_diag(c, state, method, out);
    if (conv->parsed()) return cmd_convert(c, rho, sigma, theory, out);
    if (land->parsed()) return cmd_landauer(c, rho_l, beta, env, h, interaction, out);
    if (erase->parsed()) return cmd_erase(c, rho_e, beta, env, h, out);
    if (verify->parsed()) return cmd_verify(c, out);
    if (gibbs->parsed()) return cmd_gibbs(c, h, e_s, beta_g, out);
    if (ent->parsed()) return cmd_entropy(c, state, sigma, alpha, out);
  } catch (const DiagonalizationFailure& e) {
    err << "gptt: " << e.what() << "\n";
    return kExitDiagFailure;
  } catch (const std::exception& e) {
    err << "gptt: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}

}  // namespace gptt
