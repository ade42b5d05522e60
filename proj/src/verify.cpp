#include "keydist/verify.hpp"

#include "keydist/entropy.hpp"
#include "keydist/errors.hpp"
#include "keydist/hashing.hpp"
#include "keydist/markov.hpp"
#include "keydist/quantum.hpp"
#include "keydist/semigroup.hpp"
#include "keydist/treeproc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace kd::verify {

Deadline::Deadline(double seconds)
    : end_(std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds))) {}

Deadline Deadline::unlimited() {
  Deadline d(0.0);
  d.end_.reset();
  return d;
}

bool Deadline::expired() const { return end_ && std::chrono::steady_clock::now() >= *end_; }

void Deadline::poll() const {
  if (expired()) throw BudgetExceeded("verification budget exhausted");
}

bool Summary::all_passed() const {
  if (budget_exceeded) return false;
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

namespace {

using io::Json;

void fail(CheckResult& r, const std::string& what) {
  if (r.failures.size() < 20) r.failures.push_back(what);
  else if (r.failures.size() == 20) r.failures.push_back("...");
}

std::string str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// 1 -----------------------------------------------------------------------
void phi_table(CheckResult& r, const Deadline& dl) {
  const PhiRow two = phi_row(2);
  if (two.phi != Rational(5, 9)) fail(r, "n=2: phi = " + to_string(two.phi) + ", expected 5/9");
  r.bounds.push_back(io::bound_check("phi-n2", r.paper_anchor, to_string(two.phi), "5/9"));
  for (unsigned n = 2; n <= 6; ++n) {
    dl.poll();
    const PhiRow row = phi_row(n);
    Rational expected(n * n + 1, (n + 1) * (n + 1));
    expected.canonicalize();
    if (row.phi != expected) fail(r, "n=" + std::to_string(n) + ": phi = " + to_string(row.phi));
    if (row.t_scale != Rational(1, n)) fail(r, "n=" + std::to_string(n) + ": T != I/n");
    if (row.gamma_basis != Rational(n, n + 1)) fail(r, "n=" + std::to_string(n) + ": basis element scale");
    if (row.gamma_mixed != Rational(1, n + 1)) fail(r, "n=" + std::to_string(n) + ": mixed element scale");
  }
}

// 2 -----------------------------------------------------------------------
void optimality(CheckResult& r, const Deadline& dl) {
  double worst_lower = 1.0, worst_upper = 1.0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    if (i % 25 == 0) dl.poll();
    const std::size_t dim = 1 + i % 4;
    const std::size_t symbols = 2 + (i / 4) % 4;
    // Every fifth ensemble is exact and diagonal; the rest share a random eigenbasis.
    const Ensemble e = i % 5 == 0 ? random_diagonal_ensemble(symbols, dim, 1000 + i)
                                  : random_commuting_ensemble(symbols, dim, 1000 + i);
    const Povm pgm = pretty_good_measurement(e);
    if (e.is_exact()) {
      const Rational gen = exact_e_gen(e, pgm), opt = exact_e_opt(e);
      if (!(gen >= opt * opt) || !(gen <= opt)) fail(r, "exact ensemble " + std::to_string(i));
      worst_lower = std::min(worst_lower, Rational(gen - opt * opt).get_d());
      worst_upper = std::min(worst_upper, Rational(opt - gen).get_d());
    } else {
      const double gen = e_gen(e, pgm), opt = e_opt(e);
      if (gen < opt * opt - 1e-12 || gen > opt + 1e-12)
        fail(r, "ensemble " + std::to_string(i) + ": e_gen " + str(gen) + ", e_opt " + str(opt));
      worst_lower = std::min(worst_lower, gen - opt * opt);
      worst_upper = std::min(worst_upper, opt - gen);
    }
  }
  r.bounds.push_back(io::bound_check("min(e_gen - e_opt^2)", r.paper_anchor, worst_lower, 0.0));
  r.bounds.push_back(io::bound_check("min(e_opt - e_gen)", r.paper_anchor, worst_upper, 0.0));
}

// 3, 4 --------------------------------------------------------------------
struct SweepCase {
  unsigned m, k;
};
const SweepCase kSweep[] = {{2, 1}, {3, 1}, {3, 2}};

FiniteDistribution sweep_distribution(unsigned m, std::uint64_t i) {
  // Mix of coarse and fine grains so min-entropies spread over [0, m].
  const unsigned grain = 1 + static_cast<unsigned>(i % 16);
  return random_distribution(Alphabet{2, m}, 7919 * m + i, grain);
}

void lhl_classical(CheckResult& r, const Deadline& dl) {
  std::size_t total = 0, violations = 0;
  double worst_ratio = 0.0;
  for (const auto& c : kSweep) {
    const HashFamily family = HashFamily::all_linear(2, c.m, c.k);
    for (std::uint64_t i = 0; i < 100; ++i) {
      if (i % 10 == 0) dl.poll();
      const auto px = sweep_distribution(c.m, i);
      const LhlReport rep = evaluate_lhl(px, family);
      ++total;
      if (!rep.satisfied || !rep.chain_holds || !rep.cauchy_schwarz_holds) {
        ++violations;
        fail(r, "m=" + std::to_string(c.m) + " k=" + std::to_string(c.k) + " sample " + std::to_string(i) +
                    ": distance " + to_string(rep.distance) + " bound " + str(rep.bound));
      }
      if (rep.bound > 0) worst_ratio = std::max(worst_ratio, rep.distance.get_d() / rep.bound);
    }
  }
  r.bounds.push_back(io::bound_check("max distance / bound", r.paper_anchor, worst_ratio, 1.0));
  r.bounds.push_back(io::bound_check("violations", r.paper_anchor, violations, 0));
  r.bounds.push_back(io::bound_check("cases", r.paper_anchor, total, 300));
}

void lhl_collision(CheckResult& r, const Deadline& dl) {
  double worst_ratio = 0.0;
  std::size_t violations = 0;
  for (const auto& c : kSweep) {
    const HashFamily family = HashFamily::all_linear(2, c.m, c.k);
    const Rational inv_members(1, static_cast<unsigned long>(family.size()));
    for (std::uint64_t i = 0; i < 100; ++i) {
      if (i % 10 == 0) dl.poll();
      const auto px = sweep_distribution(c.m, i);
      const CollisionReport col = collision_probability(px, family);
      // h_plus = h_min, so |A|^-h_plus is the largest weight.
      const Rational bound = inv_members * (pow(Rational(2), -static_cast<long>(c.k)) + px.exact_max_weight());
      if (!(col.value <= bound) || !col.within_bound) {
        ++violations;
        fail(r, "m=" + std::to_string(c.m) + " k=" + std::to_string(c.k) + " sample " + std::to_string(i) +
                    ": collision " + to_string(col.value) + " bound " + to_string(bound));
      }
      worst_ratio = std::max(worst_ratio, Rational(col.value / bound).get_d());
    }
  }
  r.bounds.push_back(io::bound_check("max collision / bound", r.paper_anchor, worst_ratio, 1.0));
  r.bounds.push_back(io::bound_check("violations", r.paper_anchor, violations, 0));
}

// 5 -----------------------------------------------------------------------
void quantum_tripartite(CheckResult& r, const Deadline& dl) {
  const HashFamily family = HashFamily::all_linear(2, 2, 1);
  double worst_ratio = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    if (i % 10 == 0) dl.poll();
    const std::size_t dim = 1 + i % 4;
    const Ensemble e = random_diagonal_ensemble(4, dim, 5000 + i);
    const TripartiteReport rep = tripartite_lhl(e, family);
    if (!rep.precondition_met || !rep.satisfied)
      fail(r, "ensemble " + std::to_string(i) + ": distance " + str(rep.distance) + " bound " + str(rep.bound));
    worst_ratio = std::max(worst_ratio, rep.distance / rep.bound);
  }
  r.bounds.push_back(io::bound_check("max distance / bound", r.paper_anchor, worst_ratio, 1.0));

  double worst_gap = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto px = random_distribution(Alphabet{2, 2}, 6000 + i, 12);
    std::vector<StateDensity> trivial(px.size(), StateDensity::diagonal(std::vector<Rational>{Rational(1)}));
    const Ensemble e = Ensemble::exact(px.exact_weights(), trivial, Alphabet{2, 2});
    const auto quantum = tripartite_lhl(e, family);
    const Rational classical = lhl_distance(px, family);
    const double gap = std::abs(quantum.distance - classical.get_d());
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-12 || (quantum.exact_distance && *quantum.exact_distance != classical))
      fail(r, "trivial side information sample " + std::to_string(i) + " differs from the classical distance");
  }
  r.bounds.push_back(io::bound_check("trivial-Q gap", r.paper_anchor, worst_gap, 1e-12));
}

// 6 -----------------------------------------------------------------------
void markov_gf(CheckResult& r, const Deadline& dl) {
  std::vector<TransitionMatrix> chains{swap_chain(), lazy_chain()};
  for (std::uint64_t i = 0; i < 50; ++i) chains.push_back(random_chain(1 + i % 5, 9000 + i));
  constexpr std::size_t kTerms = 13;
  double min_radius = kInfiniteRadius;
  std::size_t irreducible = 0;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    dl.poll();
    const auto& p = chains[c];
    const std::size_t n = p.size();
    const std::string tag = "chain " + std::to_string(c);
    const auto res = resolvent_matrix(p);
    std::vector<RationalMatrix> powers{matrix_power(p, 0)};
    for (std::size_t k = 1; k < kTerms; ++k) powers.push_back(multiply(powers.back(), p.rows()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto coeffs = res[i * n + j].series(kTerms);
        for (std::size_t k = 0; k < kTerms; ++k)
          if (coeffs[k] != powers[k][i][j]) {
            fail(r, tag + ": resolvent coefficient mismatch at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            break;
          }
      }
    const bool irr = is_irreducible(p);
    if (irr) ++irreducible;
    for (std::size_t i = 0; i < n; ++i) {
      const RationalFunction theta = theta_gf(p, i);
      const auto ts = theta.series(kTerms);
      const auto ps = res[i * n + i].series(kTerms);
      auto lhs = series_product(ts, ps, kTerms);
      for (std::size_t k = 0; k < kTerms; ++k) {
        const Rational rhs = ps[k] - (k == 0 ? Rational(1) : Rational(0));
        if (lhs[k] != rhs) {
          fail(r, tag + ": Theta P != P - 1 at state " + std::to_string(i));
          break;
        }
      }
      const auto fr = first_return(p, i, kTerms - 1);
      for (std::size_t k = 0; k < kTerms; ++k)
        if (fr[k] != ts[k]) {
          fail(r, tag + ": Theta coefficients differ from first returns at state " + std::to_string(i));
          break;
        }
      if (irr) {
        if (theta(Rational(1)) != 1) fail(r, tag + ": Theta(1) = " + to_string(theta(Rational(1))));
        const double rho = radius_of_convergence(theta);
        min_radius = std::min(min_radius, rho);
        if (!(rho > 1.0 + 1e-12)) fail(r, tag + ": radius " + str(rho) + " at state " + std::to_string(i));
      }
    }
  }
  r.bounds.push_back(io::bound_check("min radius of Theta (irreducible)", r.paper_anchor,
                                     std::isinf(min_radius) ? Json("inf") : Json(min_radius), 1.0));
  r.bounds.push_back(io::bound_check("irreducible chains", r.paper_anchor, irreducible, chains.size()));
}

// 7 -----------------------------------------------------------------------
void appendix_sigma(CheckResult& r, const Deadline& dl) {
  {
    CovSpec s;
    s.variances = {1.0, 1.0};
    s.correlations = {0.5};
    if (std::abs(det_closed_form(s) - 0.75) > 1e-15) fail(r, "d=2 rho=1/2 determinant");
    s.variances = {1.0, 1.0, 1.0};
    s.correlations = {0.5, 0.5, 0.5};
    if (std::abs(det_closed_form(s) - 0.5) > 1e-15) fail(r, "d=3 rho=1/2 determinant");
  }
  double worst_det = 0.0, worst_inv = 0.0;
  for (std::size_t d = 2; d <= 4; ++d)
    for (std::uint64_t i = 0; i < 100; ++i) {
      if (i % 20 == 0) dl.poll();
      const CovSpec s = random_cov_spec(d, 100 * d + i);
      const SigmaReport rep = build_sigma(s);
      const double rel = std::abs(*rep.det_closed_form - rep.det_lu) / std::abs(rep.det_lu);
      worst_det = std::max(worst_det, rel);
      if (rel > 1e-10) fail(r, "d=" + std::to_string(d) + " spec " + std::to_string(i) + ": det rel error " + str(rel));
      if (d <= 3) {
        const double err = (inverse_sigma_closed_form(s) - inverse_sigma(s)).cwiseAbs().maxCoeff() /
                           inverse_sigma(s).cwiseAbs().maxCoeff();
        worst_inv = std::max(worst_inv, err);
        if (err > 1e-10) fail(r, "d=" + std::to_string(d) + " spec " + std::to_string(i) + ": inverse error " + str(err));
      }
    }
  r.bounds.push_back(io::bound_check("max det relative error", r.paper_anchor, worst_det, 1e-10));
  r.bounds.push_back(io::bound_check("max inverse relative error", r.paper_anchor, worst_inv, 1e-10));
  double worst_mass = 0.0;
  for (double rho : {0.0, 0.3, -0.3, 0.7, -0.7}) {
    dl.poll();
    CovSpec s;
    s.variances = {1.0, 1.0};
    s.correlations = {rho};
    const double err = std::abs(kernel_mass(s) - 1.0);
    worst_mass = std::max(worst_mass, err);
    if (err > 1e-6) fail(r, "kernel mass at rho=" + str(rho) + " off by " + str(err));
  }
  r.bounds.push_back(io::bound_check("max |mass - 1|", r.paper_anchor, worst_mass, 1e-6));
}

// 8 -----------------------------------------------------------------------
TestFunction gaussian_test_function(const std::vector<double>& a, double s0) {
  const std::size_t d = a.size();
  const Eigen::MatrixXd cov = s0 * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const double norm = std::pow(2.0 * std::numbers::pi * s0, -0.5 * static_cast<double>(d));
  return [a, s0, norm](std::span<const double> x) {
    double q = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) q += (x[i] - a[i]) * (x[i] - a[i]);
    return norm * std::exp(-0.5 * q / s0);
  };
}

void semigroup_checks(CheckResult& r, const Deadline& dl) {
  double worst_quad = 0.0;
  {
    const CovSpec spec = CovSpec::identity(1);
    const auto f = gaussian_test_function({0.3}, 0.5);
    const std::vector<std::vector<double>> pts{{-1.0}, {0.0}, {0.4}, {1.7}};
    const auto chk = check_semigroup(f, 0.5, 0.5, spec, pts);
    worst_quad = std::max(worst_quad, chk.max_deviation);
    if (chk.max_deviation >= 1e-6) fail(r, "d=1 semigroup deviation " + str(chk.max_deviation));
    // Against the conjugacy closed form N(a, s0 + t).
    const auto pt = apply(f, 1.0, spec, pts);
    const Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(1, 1, 1.5);
    const std::vector<double> a{0.3};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double exact = gaussian_pdf(pts[i], a, cov);
      worst_quad = std::max(worst_quad, std::abs(pt.values[i] - exact));
      if (std::abs(pt.values[i] - exact) >= 1e-6) fail(r, "d=1 conjugacy at x=" + str(pts[i][0]));
    }
  }
  dl.poll();
  {
    CovSpec spec;
    spec.variances = {1.0, 0.8};
    spec.correlations = {0.3};
    const auto f = gaussian_test_function({0.2, -0.1}, 0.6);
    const std::vector<std::vector<double>> pts{{0.0, 0.0}, {0.8, -0.5}};
    const auto chk = check_semigroup(f, 0.5, 0.5, spec, pts);
    worst_quad = std::max(worst_quad, chk.max_deviation);
    if (chk.max_deviation >= 1e-6) fail(r, "d=2 semigroup deviation " + str(chk.max_deviation));
    const Eigen::MatrixXd cov = 0.6 * Eigen::MatrixXd::Identity(2, 2) + assemble_sigma(spec);
    const std::vector<double> a{0.2, -0.1};
    const auto pt = apply(f, 1.0, spec, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (std::abs(pt.values[i] - gaussian_pdf(pts[i], a, cov)) >= 1e-6) fail(r, "d=2 conjugacy");
  }
  r.bounds.push_back(io::bound_check("max quadrature deviation (d=1,2)", r.paper_anchor, worst_quad, 1e-6));
  dl.poll();
  {
    const CovSpec spec = random_cov_spec(3, 77);
    const auto f = gaussian_test_function({0.0, 0.5, -0.5}, 0.7);
    ApplyOptions o;
    o.method = ApplyMethod::monte_carlo;
    o.samples = 200000;
    o.seed = 3;
    const std::vector<std::vector<double>> pts{{0.0, 0.0, 0.0}, {0.5, 0.5, -0.5}, {-0.4, 1.0, 0.2}};
    const auto chk = check_semigroup(f, 0.5, 0.5, spec, pts, o);
    if (!(chk.max_z < 3.0)) fail(r, "d=3 Monte-Carlo deviation is " + str(chk.max_z) + " standard errors");
    r.bounds.push_back(io::bound_check("d=3 max deviation in standard errors", r.paper_anchor, chk.max_z, 3.0));
  }
  double worst_sup = -1.0, worst_l1 = -1.0;
  const CovSpec line = CovSpec::identity(1);
  for (const auto& tf : contraction_battery())
    for (double t : {0.1, 1.0, 4.0}) {
      dl.poll();
      const auto c = check_contraction(tf.f, t, line);
      worst_sup = std::max(worst_sup, c.sup_pt - c.sup_f);
      worst_l1 = std::max(worst_l1, c.l1_pt - c.l1_f);
      if (!c.sup_holds) fail(r, tf.name + ": sup contraction fails at t=" + str(t));
      if (!c.l1_holds) fail(r, tf.name + ": L1 contraction fails at t=" + str(t));
    }
  r.bounds.push_back(io::bound_check("max sup|P_t f| - sup|f|", r.paper_anchor, worst_sup, 1e-9));
  r.bounds.push_back(io::bound_check("max ||P_t f||_1 - ||f||_1", r.paper_anchor, worst_l1, 1e-9));
}

// 9 -----------------------------------------------------------------------
void entropy_suite(CheckResult& r, const Deadline& dl) {
  const std::vector<DivergenceOrder> orders{{0.0}, {0.5}, {1.0}, {2.0}, DivergenceOrder::infinity()};
  for (std::uint64_t i = 0; i < 200; ++i) {
    if (i % 50 == 0) dl.poll();
    const std::size_t n = 2 + i % 7;
    const auto f = random_distribution(Alphabet{static_cast<unsigned>(n), 1}, 20000 + i, 1 + static_cast<unsigned>(i % 9));
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& o : orders) {
      const double h = renyi_entropy(f, o);
      if (h > prev + 1e-12) fail(r, "distribution " + std::to_string(i) + ": Renyi entropy increases at alpha=" + str(o.alpha));
      prev = h;
    }
    if (renyi_entropy(f, {2.0}) < min_entropy(f) - 1e-12) fail(r, "distribution " + std::to_string(i) + ": h2 < h_min");
    const auto g = random_distribution(Alphabet{static_cast<unsigned>(n), 1}, 30000 + i, 1 + static_cast<unsigned>(i % 5));
    const Rational pinsker = pinsker_lower_bound(f, g);
    const bool same = f.exact_weights() == g.exact_weights();
    // KL >= ||f - g||_1^2 / 2 >= 0, the middle term exact and zero only for f = g.
    if (same != (pinsker == 0)) fail(r, "distribution " + std::to_string(i) + ": Pinsker term inconsistent");
    const double kl = kl_divergence(f, g, std::numbers::e);
    if (!(kl >= 0.0) || (std::isfinite(kl) && kl < pinsker.get_d() * (1.0 - 1e-12)))
      fail(r, "distribution " + std::to_string(i) + ": KL below the Pinsker bound");
  }
  const double gauss = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  const auto de = differential_entropy(ContinuousDensity::normal(0.0, 1.0));
  if (std::abs(de.value - gauss) > 1e-4) fail(r, "differential entropy of N(0,1) = " + str(de.value));
  r.bounds.push_back(io::bound_check("|h(N(0,1)) - ln(2 pi e)/2|", r.paper_anchor, std::abs(de.value - gauss), 1e-4));
  dl.poll();
  const double aep_g = aep_estimate(ContinuousDensity::normal(0.0, 1.0), 10000, 0);
  if (std::abs(aep_g - gauss) > 0.05) fail(r, "Gaussian AEP estimate " + str(aep_g));
  r.bounds.push_back(io::bound_check("Gaussian AEP error", r.paper_anchor, std::abs(aep_g - gauss), 0.05));
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    // Weights 1..10 on 8 symbols; sample seed equals the distribution index.
    const auto f = random_distribution(Alphabet{8, 1}, 40000 + s, 10);
    const double err = std::abs(aep_estimate(f, 10000, s) - shannon_entropy_nats(f));
    worst = std::max(worst, err);
    if (err > 0.02) fail(r, "8-symbol AEP seed " + std::to_string(s) + " off by " + str(err));
  }
  r.bounds.push_back(io::bound_check("8-symbol AEP max error", r.paper_anchor, worst, 0.02));
}

// 10 ----------------------------------------------------------------------
void tree_process(CheckResult& r, const Deadline& dl) {
  const ReplicationSet set = simulate_replications(3, 8, 10000, 0);
  dl.poll();
  const IncrementReport rep = increment_stats(set);
  for (std::size_t c = 0; c < rep.terminal_variance.size(); ++c) {
    const double v = rep.terminal_variance[c];
    if (v < 0.95 || v > 1.05) fail(r, "Var W(1) coord " + std::to_string(c) + " = " + str(v));
    r.bounds.push_back(io::bound_check("Var W(1) coord " + std::to_string(c + 1), r.paper_anchor, v, Json::array({0.95, 1.05})));
  }
  if (rep.flagged > 0) fail(r, std::to_string(rep.flagged) + " increment correlations exceed 4/sqrt(N)");
  r.bounds.push_back(io::bound_check("max |increment correlation|", r.paper_anchor, rep.max_abs_corr, rep.threshold));
  dl.poll();
  const RefinementReport ref = refinement_medians(1, {4, 6, 8}, 100, 1);
  if (!ref.decreasing) fail(r, "median refinement deltas do not decrease");
  r.bounds.push_back(io::bound_check("median sup-delta eta=4,6,8", r.paper_anchor, ref.medians, "decreasing"));
}

}  // namespace

const std::vector<CheckSpec>& registry() {
  static const std::vector<CheckSpec> checks{
      {1, "phi-table", "pretty-good measurement existence table", 1.0, phi_table},
      {2, "optimality", "optimality theorem for the pretty-good measurement", 10.0, optimality},
      {3, "lhl-classical", "classical bipartite leftover-hash lemma", 60.0, lhl_classical},
      {4, "lhl-collision", "collision-probability bound in the bipartite lemma proof", 60.0, lhl_collision},
      {5, "quantum-tripartite", "quantum tripartite leftover-hash theorem", 60.0, quantum_tripartite},
      {6, "markov-gf", "meromorphic-extension theorem for first returns", 30.0, markov_gf},
      {7, "sigma-closed-forms", "covariance determinant and inverse closed forms", 30.0, appendix_sigma},
      {8, "semigroup", "Gaussian semigroup proposition and contraction remark", 60.0, semigroup_checks},
      {9, "entropy-suite", "ergodic classification lemma and AEP theorem", 60.0, entropy_suite},
      {10, "tree-process", "tree-process lemma", 120.0, tree_process},
  };
  return checks;
}

Summary run(const std::string& filter, const Deadline& deadline) {
  Summary s;
  for (const auto& spec : registry()) {
    if (!filter.empty() && spec.name.find(filter) == std::string::npos) continue;
    CheckResult r;
    r.criterion = spec.criterion;
    r.name = spec.name;
    r.paper_anchor = spec.paper_anchor;
    r.limit_seconds = spec.limit_seconds;
    const auto start = std::chrono::steady_clock::now();
    try {
      deadline.poll();
      spec.run(r, deadline);
      r.completed = true;
    } catch (const BudgetExceeded&) {
      s.budget_exceeded = true;
    } catch (const std::exception& e) {
      fail(r, std::string("exception: ") + e.what());
      r.completed = true;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.completed && r.seconds > r.limit_seconds)
      fail(r, "runtime " + str(r.seconds) + " s exceeds the " + str(r.limit_seconds) + " s limit");
    r.passed = r.completed && r.failures.empty();
    s.results.push_back(std::move(r));
    if (s.budget_exceeded) break;
  }
  return s;
}

io::Json to_json(const Summary& s) {
  Json checks = Json::array();
  for (const auto& r : s.results) {
    checks.push_back(Json{{"criterion", r.criterion},
                          {"check", r.name},
                          {"paper_anchor", r.paper_anchor},
                          {"passed", r.passed},
                          {"completed", r.completed},
                          {"seconds", r.seconds},
                          {"limit_seconds", r.limit_seconds},
                          {"bounds", r.bounds},
                          {"failures", r.failures}});
  }
  return Json{{"schema", io::kSchemaVersion},
              {"command", "verify-all"},
              {"passed", s.all_passed()},
              {"partial", s.budget_exceeded},
              {"checks", checks}};
}

}  // namespace kd::verify
