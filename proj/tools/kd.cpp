#include "keydist/entropy.hpp"
#include "keydist/errors.hpp"
#include "keydist/hashing.hpp"
#include "keydist/io.hpp"
#include "keydist/markov.hpp"
#include "keydist/parallel.hpp"
#include "keydist/quantum.hpp"
#include "keydist/semigroup.hpp"
#include "keydist/treeproc.hpp"
#include "keydist/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace {

using kd::io::Json;

constexpr int kExitValidation = 2;
constexpr int kExitBound = 3;
constexpr int kExitBudget = 4;

struct Common {
  std::string output;
  bool assert_bounds = false;
  bool violated = false;
};

Json report(const std::string& command) { return Json{{"schema", kd::io::kSchemaVersion}, {"command", command}}; }

void add_bound(Common& c, Json& bounds, const std::string& check, const std::string& anchor, const Json& value,
               const Json& bound, bool holds) {
  Json b = kd::io::bound_check(check, anchor, value, bound);
  b["holds"] = holds;
  bounds.push_back(b);
  if (!holds) c.violated = true;
}

Json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void emit(const Common& c, const Json& j) {
  if (c.output.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw kd::ValidationError("cannot write " + c.output);
  out << j.dump(2) << '\n';
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw kd::ValidationError("cannot write " + path);
  out.precision(17);
  return out;
}

kd::DivergenceOrder parse_order(const std::string& s) {
  if (s == "inf" || s == "infinity") return kd::DivergenceOrder::infinity();
  try {
    std::size_t used = 0;
    const double a = std::stod(s, &used);
    if (used != s.size() || a < 0) throw std::invalid_argument(s);
    return {a};
  } catch (const std::logic_error&) {
    throw kd::ValidationError("--alpha must be a nonnegative number or inf, got " + s);
  }
}

kd::HashFamily make_family(const std::string& kind, unsigned q, unsigned m, unsigned k, const std::string& table) {
  if (kind == "linear") return kd::HashFamily::all_linear(q, m, k);
  if (kind == "toeplitz") return kd::HashFamily::toeplitz(q, m, k);
  if (kind == "file") {
    if (table.empty()) throw kd::ValidationError("--family file needs --table");
    const Json j = kd::io::load_file(table);
    const Json& t = j.is_object() ? j.at("table") : j;
    return kd::HashFamily::from_table(q, m, k, t.get<std::vector<std::vector<std::uint32_t>>>());
  }
  throw kd::ValidationError("unknown family " + kind);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw kd::ValidationError("expected a comma-separated list of numbers, got " + s);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct EntropyArgs {
  std::string alpha = "1", dist, ref;
  double base = 0.0;
};

void run_entropy(Common& c, const EntropyArgs& a) {
  const auto f = kd::io::read_distribution(kd::io::load_file(a.dist));
  const auto order = parse_order(a.alpha);
  const double base = a.base > 0 ? a.base : static_cast<double>(f.size());
  Json j = report("entropy");
  Json bounds = Json::array();
  j["order"] = real(order.alpha);
  j["base"] = base;
  if (!a.ref.empty()) {
    const auto g = kd::io::read_distribution(kd::io::load_file(a.ref));
    if (g.size() != f.size()) throw kd::ValidationError("--dist and --ref have different sizes");
    // A base that is not an alphabet size goes through the KL path only.
    const auto rounded = static_cast<unsigned>(std::lround(base));
    double value;
    if (std::abs(base - rounded) < 1e-12 && rounded >= 2)
      value = kd::renyi_divergence(f, g, order, kd::Alphabet{rounded, 1});
    else if (order.is_one())
      value = kd::kl_divergence(f, g, base);
    else
      throw kd::ValidationError("divergences of order != 1 need an integer --base >= 2");
    j["value"] = real(value);
    j["method"] = order.is_one() ? "kl-divergence" : "renyi-divergence";
    if (f.is_exact() && g.is_exact() && order.is_one()) {
      const double kl_nats = kd::kl_divergence(f, g, std::exp(1.0));
      const kd::Rational p = kd::pinsker_lower_bound(f, g);
      add_bound(c, bounds, "kl >= pinsker", "Pinsker inequality", real(kl_nats), kd::to_string(p),
                kl_nats >= p.get_d() * (1.0 - 1e-12));
    }
  } else {
    const double value = kd::renyi_entropy(f, order, base);
    j["value"] = real(value);
    j["method"] = order.is_infinite() ? "min-entropy" : order.is_one() ? "shannon-entropy" : "renyi-entropy";
    const double hmin = kd::min_entropy(f, base);
    add_bound(c, bounds, "h_alpha >= h_min", "ergodic classification lemma", real(value), real(hmin),
              value >= hmin - 1e-12);
  }
  j["bounds"] = bounds;
  emit(c, j);
}

// ---------------------------------------------------------------------------

struct LhlArgs {
  unsigned q = 2, m = 2, k = 1;
  std::string family = "linear", table, dist, mode = "inverted";
  bool uniform = false;
  std::optional<double> h_plus, epsilon;
};

void run_lhl(Common& c, const LhlArgs& a) {
  const auto fam = make_family(a.family, a.q, a.m, a.k, a.table);
  if (a.uniform == !a.dist.empty()) throw kd::ValidationError("give exactly one of --dist and --uniform");
  const kd::Alphabet alphabet{a.q, a.m};
  const auto px = a.uniform ? kd::FiniteDistribution::uniform(alphabet)
                            : kd::io::read_distribution(kd::io::load_file(a.dist));
  if (px.size() != alphabet.symbols())
    throw kd::ValidationError("distribution has " + std::to_string(px.size()) + " symbols, expected q^m = " +
                              std::to_string(alphabet.symbols()));
  const auto px_on = px.is_exact() ? kd::FiniteDistribution::exact(alphabet, px.exact_weights())
                                   : kd::FiniteDistribution::floating(alphabet, px.weights());
  const auto r = kd::evaluate_lhl(px_on, fam, a.h_plus);
  Json j = report("lhl");
  j["q"] = a.q;
  j["m"] = a.m;
  j["k"] = a.k;
  j["family"] = a.family;
  j["family_size"] = fam.size();
  j["zeta"] = fam.zeta();
  j["universal"] = r.universality.universal;
  j["h_min"] = real(r.h_min);
  j["h_plus"] = real(r.h_plus);
  j["precondition_met"] = r.precondition_met;
  j["distance"] = kd::to_string(r.distance);
  j["distance_value"] = r.distance.get_d();
  j["bound"] = real(r.bound);
  j["collision_probability"] = kd::to_string(r.collision);
  j["collision_proof_bound"] = kd::to_string(r.collision_report.proof_bound);
  j["satisfied"] = r.satisfied;
  Json bounds = Json::array();
  if (r.precondition_met) {
    add_bound(c, bounds, "lhl-distance", "classical bipartite leftover-hash lemma", r.distance.get_d(), real(r.bound),
              r.satisfied);
    if (r.collision_report.bound_checked)
      add_bound(c, bounds, "collision-probability", "collision bound in the bipartite lemma proof",
                kd::to_string(r.collision), kd::to_string(r.collision_report.proof_bound),
                r.collision_report.within_bound);
  }
  if (a.epsilon) {
    kd::KeyLengthMode mode;
    if (a.mode == "inverted") mode = kd::KeyLengthMode::inverted;
    else if (a.mode == "paper-literal" || a.mode == "literal") mode = kd::KeyLengthMode::literal;
    else throw kd::ValidationError("--mode must be inverted or paper-literal");
    const auto len = kd::max_key_length(r.h_plus, *a.epsilon, kd::Alphabet{a.q, 1}, mode);
    j["key_length"] = Json{{"mode", mode == kd::KeyLengthMode::inverted ? "inverted" : "paper-literal"},
                           {"epsilon", *a.epsilon},
                           {"value", len.value}};
    if (len.warning) j["key_length"]["warning"] = *len.warning;
  }
  j["bounds"] = bounds;
  emit(c, j);
}

// ---------------------------------------------------------------------------

struct QuantumArgs {
  unsigned q = 2, m = 2, k = 1;
  std::string family = "linear", table, ensemble;
  std::optional<double> h_plus;
};

void run_quantum(Common& c, const QuantumArgs& a) {
  const auto fam = make_family(a.family, a.q, a.m, a.k, a.table);
  auto e = kd::io::read_ensemble(kd::io::load_file(a.ensemble));
  if (e.size() != fam.inputs())
    throw kd::ValidationError("ensemble has " + std::to_string(e.size()) + " symbols, family expects " +
                              std::to_string(fam.inputs()));
  const auto pgm = kd::pretty_good_measurement(e);
  const auto r = kd::tripartite_lhl(e, fam, a.h_plus);
  Json j = report("quantum-lhl");
  j["symbols"] = e.size();
  j["dim_q"] = e.dim();
  j["commuting"] = kd::is_commuting(e);
  j["e_gen"] = e.is_exact() ? Json(kd::to_string(kd::exact_e_gen(e, pgm))) : Json(kd::e_gen(e, pgm));
  j["h_min"] = real(r.h_min);
  j["h_plus"] = real(r.h_plus);
  j["precondition_met"] = r.precondition_met;
  j["distance"] = r.exact_distance ? Json(kd::to_string(*r.exact_distance)) : Json(r.distance);
  j["distance_value"] = r.distance;
  j["bound"] = real(r.bound);
  j["satisfied"] = r.satisfied;
  Json bounds = Json::array();
  if (r.precondition_met)
    add_bound(c, bounds, "tripartite-distance", "quantum tripartite leftover-hash theorem", r.distance, real(r.bound),
              r.satisfied);
  j["bounds"] = bounds;
  emit(c, j);
}

// ---------------------------------------------------------------------------

void run_phi(Common& c, unsigned n) {
  const auto row = kd::phi_row(n);
  Json j = report("phi");
  j["n"] = n;
  j["T"] = "I*" + kd::to_string(row.t_scale);
  j["gamma_basis"] = kd::to_string(row.gamma_basis);
  j["gamma_mixed"] = kd::to_string(row.gamma_mixed);
  j["phi"] = kd::to_string(row.phi);
  kd::Rational expected(n * n + 1, (n + 1) * (n + 1));
  expected.canonicalize();
  Json bounds = Json::array();
  add_bound(c, bounds, "phi closed form", "pretty-good measurement existence table", kd::to_string(row.phi),
            kd::to_string(expected), row.phi == expected);
  j["bounds"] = bounds;
  emit(c, j);
}

// ---------------------------------------------------------------------------

void run_markov(Common& c, const std::string& path, std::size_t state, unsigned terms) {
  const auto p = kd::io::read_transition_matrix(kd::io::load_file(path));
  if (state >= p.size()) throw kd::ValidationError("--state out of range");
  const auto pii = kd::resolvent(p, state, state);
  const auto theta = kd::theta_gf(p, state);
  Json series = Json::array();
  for (const auto& v : kd::first_return(p, state, terms)) series.push_back(kd::to_string(v));
  Json j = report("markov");
  j["states"] = p.size();
  j["state"] = state;
  j["theta_series"] = series;
  j["P_gf"] = pii.to_string();
  j["Theta_gf"] = theta.to_string();
  const double rho = kd::radius_of_convergence(theta);
  j["radius"] = real(rho);
  const bool irr = kd::is_irreducible(p);
  j["irreducible"] = irr;
  j["period"] = kd::period(p, state);
  Json bounds = Json::array();
  if (irr) {
    const auto at_one = theta(kd::Rational(1));
    add_bound(c, bounds, "Theta(1)", "meromorphic-extension theorem", kd::to_string(at_one), kd::to_string(kd::Rational(1)), at_one == 1);
    add_bound(c, bounds, "radius of Theta", "meromorphic-extension theorem", real(rho), 1.0, rho > 1.0 + 1e-12);
  }
  j["bounds"] = bounds;
  emit(c, j);
}

// ---------------------------------------------------------------------------

struct SemigroupArgs {
  std::size_t dim = 1;
  double t = 1.0;
  std::string sigma, rho, variances, check, csv, method = "quadrature";
  double s0 = 0.5;
  std::size_t samples = 100000, grid = 41;
  std::uint64_t seed = 0;
};

void run_semigroup(Common& c, const SemigroupArgs& a) {
  kd::CovSpec spec;
  if (!a.sigma.empty()) {
    spec = kd::io::read_cov_spec(kd::io::load_file(a.sigma));
  } else {
    spec = kd::CovSpec::identity(a.dim);
    if (!a.variances.empty()) spec.variances = parse_list(a.variances);
    if (!a.rho.empty()) spec.correlations = parse_list(a.rho);
    spec.validate();
  }
  const std::size_t d = spec.dim();
  kd::ApplyOptions opt;
  if (a.method == "mc") opt.method = kd::ApplyMethod::monte_carlo;
  else if (a.method != "quadrature") throw kd::ValidationError("--method must be quadrature or mc");
  opt.samples = a.samples;
  opt.seed = a.seed;
  // Test function: the N(0, s0 I) density, whose image is known in closed form.
  const double s0 = a.s0;
  const auto f = [s0](std::span<const double> x) {
    double q = 0.0;
    for (double v : x) q += v * v;
    return std::pow(2.0 * M_PI * s0, -0.5 * static_cast<double>(x.size())) * std::exp(-0.5 * q / s0);
  };
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < a.grid; ++i) {
    std::vector<double> x(d, 0.0);
    x[0] = a.grid == 1 ? 0.0 : -4.0 + 8.0 * static_cast<double>(i) / static_cast<double>(a.grid - 1);
    pts.push_back(x);
  }
  const auto pt = kd::apply(f, a.t, spec, pts, opt);
  const Eigen::MatrixXd cov = s0 * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) +
                              a.t * kd::assemble_sigma(spec);
  const std::vector<double> zero(d, 0.0);
  double conj_err = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    conj_err = std::max(conj_err, std::abs(pt.values[i] - kd::gaussian_pdf(pts[i], zero, cov)));
  Json j = report("semigroup");
  j["dim"] = d;
  j["t"] = a.t;
  j["method"] = a.method;
  j["det_sigma"] = kd::build_sigma(spec).det_lu;
  j["conjugacy_max_error"] = conj_err;
  Json bounds = Json::array();
  if (opt.method == kd::ApplyMethod::quadrature)
    add_bound(c, bounds, "gaussian conjugacy", "Gaussian semigroup proposition", conj_err, 1e-6, conj_err < 1e-6);
  if (!a.check.empty()) {
    const auto st = parse_list(a.check);
    if (st.size() != 2) throw kd::ValidationError("--check takes s,t");
    const auto chk = kd::check_semigroup(f, st[0], st[1], spec, pts, opt);
    j["semigroup"] = Json{{"s", st[0]}, {"t", st[1]}, {"max_deviation", chk.max_deviation}};
    if (opt.method == kd::ApplyMethod::quadrature) {
      add_bound(c, bounds, "P_s P_t = P_(s+t)", "Gaussian semigroup proposition", chk.max_deviation, 1e-6,
                chk.max_deviation < 1e-6);
    } else {
      j["semigroup"]["max_z"] = chk.max_z;
      add_bound(c, bounds, "P_s P_t = P_(s+t) in standard errors", "Gaussian semigroup proposition", chk.max_z, 3.0,
                chk.max_z < 3.0);
    }
  }
  if (!a.csv.empty()) {
    auto out = open_csv(a.csv);
    out << "x,Ptf\n";
    for (std::size_t i = 0; i < pts.size(); ++i) out << pts[i][0] << ',' << pt.values[i] << '\n';
    j["csv"] = a.csv;
  }
  j["bounds"] = bounds;
  emit(c, j);
}

// ---------------------------------------------------------------------------

struct TreeArgs {
  std::size_t dim = 1, reps = 1000;
  unsigned eta = 8;
  std::uint64_t seed = 0;
  std::string mode = "standard", csv;
};

void run_treesim(Common& c, const TreeArgs& a) {
  kd::TreeMode mode;
  if (a.mode == "standard") mode = kd::TreeMode::standard;
  else if (a.mode == "paper-literal" || a.mode == "literal") mode = kd::TreeMode::literal;
  else throw kd::ValidationError("--mode must be standard or paper-literal");
  const auto path = kd::simulate(a.dim, a.eta, a.seed, mode);
  Json j = report("treesim");
  j["dim"] = a.dim;
  j["eta"] = a.eta;
  j["grid_scale"] = kd::grid_scale(a.eta);
  j["seed"] = a.seed;
  j["mode"] = mode == kd::TreeMode::standard ? "standard" : "paper-literal";
  j["nonstandard"] = path.nonstandard;
  if (!a.csv.empty()) {
    auto out = open_csv(a.csv);
    kd::write_csv(out, path);
    j["csv"] = a.csv;
  }
  Json bounds = Json::array();
  if (a.reps >= 1000 && a.eta >= 4) {
    const auto set = kd::simulate_replications(a.dim, a.eta, a.reps, a.seed, mode);
    const auto st = kd::increment_stats(set);
    Json tv = Json::array();
    for (double v : st.terminal_variance) tv.push_back(v);
    j["stats"] = Json{{"reps", st.reps},
                      {"terminal_variance", tv},
                      {"max_abs_increment_mean", st.max_abs_mean},
                      {"max_variance_ratio_error", st.max_variance_ratio_error},
                      {"max_abs_corr", st.max_abs_corr},
                      {"corr_threshold", st.threshold},
                      {"flagged", st.flagged},
                      {"max_cov_error", st.max_cov_error}};
    if (mode == kd::TreeMode::standard) {
      for (std::size_t i = 0; i < tv.size(); ++i)
        add_bound(c, bounds, "Var W(1) coord " + std::to_string(i + 1), "tree-process lemma", st.terminal_variance[i],
                  Json::array({0.95, 1.05}), st.terminal_variance[i] >= 0.95 && st.terminal_variance[i] <= 1.05);
      add_bound(c, bounds, "increment correlation", "tree-process lemma", st.max_abs_corr, st.threshold,
                st.flagged == 0);
    }
  } else {
    j["stats"] = nullptr;
    j["stats_note"] = "increment statistics need --reps >= 1000 and --eta >= 4";
  }
  j["bounds"] = bounds;
  emit(c, j);
}

// ---------------------------------------------------------------------------

int run_verify(Common& c, double budget, const std::string& filter) {
  const auto summary = kd::verify::run(filter, kd::verify::Deadline(budget));
  for (const auto& r : summary.results)
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << "  (" << r.paper_anchor << ")  " << r.seconds << " s\n";
  emit(c, kd::verify::to_json(summary));
  if (summary.budget_exceeded) return kExitBudget;
  return summary.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  kd::parallel::configure_from_env();
  CLI::App app{"kd: key-distillation bounds and their oracles"};
  app.require_subcommand(1);
  Common common;
  const auto add_common = [&common](CLI::App* sub) {
    sub->add_option("-o,--output", common.output, "Write the JSON report here instead of stdout");
    sub->add_flag("--assert-bounds", common.assert_bounds, "Exit 3 when a checked bound is violated");
  };

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "Renyi entropy or divergence of a distribution");
  entropy->add_option("--alpha", ea.alpha, "Order in [0, inf]")->capture_default_str();
  entropy->add_option("--base", ea.base, "Logarithm base (default: number of symbols)");
  entropy->add_option("--dist", ea.dist, "Distribution JSON")->required();
  entropy->add_option("--ref", ea.ref, "Reference distribution JSON (divergence mode)");
  add_common(entropy);

  LhlArgs la;
  auto* lhl = app.add_subcommand("lhl", "Classical leftover-hash check");
  lhl->add_option("--q", la.q)->capture_default_str();
  lhl->add_option("--m", la.m)->capture_default_str();
  lhl->add_option("--k", la.k)->capture_default_str();
  lhl->add_option("--family", la.family, "linear | toeplitz | file")->capture_default_str();
  lhl->add_option("--table", la.table, "Hash table JSON for --family file");
  lhl->add_option("--dist", la.dist, "Source distribution JSON");
  lhl->add_flag("--uniform", la.uniform, "Use the uniform source");
  lhl->add_option("--h-plus", la.h_plus, "Entropy threshold (default h_min)");
  lhl->add_option("--mode", la.mode, "Key-length formula: inverted | paper-literal")->capture_default_str();
  lhl->add_option("--epsilon", la.epsilon, "Target distance for the key-length report");
  add_common(lhl);

  QuantumArgs qa;
  auto* qlhl = app.add_subcommand("quantum-lhl", "Tripartite leftover-hash check with quantum side information");
  qlhl->add_option("--q", qa.q)->capture_default_str();
  qlhl->add_option("--m", qa.m)->capture_default_str();
  qlhl->add_option("--k", qa.k)->capture_default_str();
  qlhl->add_option("--family", qa.family)->capture_default_str();
  qlhl->add_option("--table", qa.table);
  qlhl->add_option("--ensemble", qa.ensemble, "Ensemble JSON")->required();
  qlhl->add_option("--h-plus", qa.h_plus);
  add_common(qlhl);

  unsigned phi_n = 2;
  auto* phi = app.add_subcommand("phi", "Pretty-good measurement table row");
  phi->add_option("--n", phi_n)->capture_default_str()->check(CLI::Range(1u, 64u));
  add_common(phi);

  std::string matrix;
  std::size_t state = 0;
  unsigned terms = 12;
  auto* markov = app.add_subcommand("markov", "First-return generating functions");
  markov->add_option("--matrix", matrix, "Transition matrix JSON")->required();
  markov->add_option("--state", state)->capture_default_str();
  markov->add_option("--terms", terms, "Series length")->capture_default_str();
  add_common(markov);

  SemigroupArgs sa;
  auto* semi = app.add_subcommand("semigroup", "Gaussian kernel semigroup");
  semi->add_option("--dim", sa.dim)->capture_default_str();
  semi->add_option("--t", sa.t)->capture_default_str();
  semi->add_option("--sigma", sa.sigma, "Covariance spec JSON");
  semi->add_option("--rho", sa.rho, "Correlations, comma-separated in row order");
  semi->add_option("--variances", sa.variances, "Variances, comma-separated");
  semi->add_option("--check", sa.check, "s,t for the semigroup check");
  semi->add_option("--method", sa.method, "quadrature | mc")->capture_default_str();
  semi->add_option("--samples", sa.samples)->capture_default_str();
  semi->add_option("--seed", sa.seed)->capture_default_str();
  semi->add_option("--s0", sa.s0, "Variance of the Gaussian test function")->capture_default_str();
  semi->add_option("--grid", sa.grid, "Points along the first axis")->capture_default_str();
  semi->add_option("--csv", sa.csv, "CSV of (x, P_t f(x))");
  add_common(semi);

  TreeArgs ta;
  auto* tree = app.add_subcommand("treesim", "Dyadic tree-process simulation");
  tree->add_option("--dim", ta.dim)->capture_default_str();
  tree->add_option("--eta", ta.eta)->capture_default_str();
  tree->add_option("--reps", ta.reps)->capture_default_str();
  tree->add_option("--seed", ta.seed)->capture_default_str();
  tree->add_option("--mode", ta.mode, "standard | paper-literal")->capture_default_str();
  tree->add_option("--csv", ta.csv, "CSV of one path (t, W1..Wd)");
  add_common(tree);

  double budget = 300.0;
  std::string filter;
  auto* verify = app.add_subcommand("verify-all", "Run the acceptance checks");
  verify->add_option("--budget", budget, "Seconds")->capture_default_str();
  verify->add_option("--filter", filter, "Substring of check names");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    int code = 0;
    if (*entropy) run_entropy(common, ea);
    else if (*lhl) run_lhl(common, la);
    else if (*qlhl) run_quantum(common, qa);
    else if (*phi) run_phi(common, phi_n);
    else if (*markov) run_markov(common, matrix, state, terms);
    else if (*semi) run_semigroup(common, sa);
    else if (*tree) run_treesim(common, ta);
    else if (*verify) code = run_verify(common, budget, filter);
    if (code != 0) return code;
    return common.assert_bounds && common.violated ? kExitBound : 0;
  } catch (const kd::BudgetExceeded& e) {
    std::cerr << "kd: " << e.what() << '\n';
    return kExitBudget;
  } catch (const kd::ValidationError& e) {
    std::cerr << "kd: " << e.what() << '\n';
    return kExitValidation;
  } catch (const kd::CapExceeded& e) {
    std::cerr << "kd: " << e.what() << '\n';
    return kExitValidation;
  } catch (const kd::DomainError& e) {
    std::cerr << "kd: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Json::exception& e) {
    std::cerr << "kd: malformed input: " << e.what() << '\n';
    return kExitValidation;
  }
}
