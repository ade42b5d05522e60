#include "keydist/quantum.hpp"

#include "keydist/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace kd {

namespace {

using Matrix = Eigen::MatrixXcd;

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------------------
// Ensemble

Ensemble Ensemble::exact(std::vector<Rational> priors, std::vector<StateDensity> states,
                         std::optional<Alphabet> alphabet) {
  Ensemble e;
  for (auto& p : priors) {
    p.canonicalize();
    e.priors_.push_back(p.get_d());
  }
  e.exact_priors_ = std::move(priors);
  e.states_ = std::move(states);
  e.alphabet_ = alphabet.value_or(Alphabet{static_cast<unsigned>(std::max<std::size_t>(2, e.states_.size())), 1});
  e.validate();
  return e;
}

Ensemble Ensemble::floating(std::vector<double> priors, std::vector<StateDensity> states,
                            std::optional<Alphabet> alphabet) {
  Ensemble e;
  e.priors_ = std::move(priors);
  e.states_ = std::move(states);
  e.alphabet_ = alphabet.value_or(Alphabet{static_cast<unsigned>(std::max<std::size_t>(2, e.states_.size())), 1});
  e.validate();
  return e;
}

void Ensemble::validate() const {
  if (states_.empty()) throw ValidationError("ensemble needs at least one state");
  if (priors_.size() != states_.size()) throw ValidationError("ensemble has mismatched priors and states");
  alphabet_.validate();
  if (alphabet_.symbols() < states_.size()) throw ValidationError("ensemble has more states than alphabet symbols");
  const std::size_t d = states_.front().dim();
  for (std::size_t x = 0; x < states_.size(); ++x) {
    if (states_[x].dim() != d) throw ValidationError("ensemble state " + std::to_string(x) + " has the wrong dimension");
    if (!states_[x].is_normalized()) throw ValidationError("ensemble state " + std::to_string(x) + " is not trace one");
  }
  if (!exact_priors_.empty()) {
    Rational total = 0;
    for (const auto& p : exact_priors_) {
      if (p < 0) throw ValidationError("negative prior " + to_string(p));
      total += p;
    }
    if (total != 1) throw ValidationError("priors sum to " + to_string(total) + ", not 1");
  } else {
    double total = 0.0;
    for (double p : priors_) {
      if (!(p >= 0.0)) throw ValidationError("priors must be finite and >= 0");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("priors do not sum to 1 within 1e-12");
  }
}

const std::vector<Rational>& Ensemble::exact_priors() const {
  if (exact_priors_.empty()) throw ValidationError("ensemble priors are floating");
  return exact_priors_;
}

bool Ensemble::is_exact() const {
  return !exact_priors_.empty() && std::all_of(states_.begin(), states_.end(), [](const auto& s) { return s.is_exact(); });
}

bool Ensemble::is_diagonal() const {
  return std::all_of(states_.begin(), states_.end(), [](const auto& s) { return s.is_diagonal(); });
}

StateDensity Ensemble::weighted(std::size_t x) const {
  if (!exact_priors_.empty() && states_[x].is_exact()) return states_[x].scaled(exact_priors_[x]);
  return states_[x].scaled(priors_[x]);
}

// ---------------------------------------------------------------------------
// Povm

Povm Povm::dense(std::vector<Matrix> elements) {
  if (elements.empty()) throw ValidationError("POVM needs at least one element");
  const auto d = elements.front().rows();
  for (std::size_t x = 0; x < elements.size(); ++x) {
    auto& g = elements[x];
    if (g.rows() != d || g.cols() != d) throw ValidationError("POVM element " + std::to_string(x) + " has the wrong shape");
    if (!is_hermitian(g, 1e-9)) throw ValidationError("POVM element " + std::to_string(x) + " is not Hermitian");
    g = hermitize(g);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) throw ValidationError("POVM element " + std::to_string(x) + " is not PSD");
  }
  Povm m;
  m.elements_ = std::move(elements);
  return m;
}

Povm Povm::diagonal(std::vector<std::vector<Rational>> elements) {
  if (elements.empty()) throw ValidationError("POVM needs at least one element");
  const std::size_t d = elements.front().size();
  Povm m;
  for (std::size_t x = 0; x < elements.size(); ++x) {
    if (elements[x].size() != d) throw ValidationError("POVM element " + std::to_string(x) + " has the wrong shape");
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
      elements[x][i].canonicalize();
      if (elements[x][i] < 0) throw ValidationError("POVM element " + std::to_string(x) + " is not PSD");
      diag(static_cast<Eigen::Index>(i)) = elements[x][i].get_d();
    }
    m.elements_.push_back(diag.asDiagonal());
  }
  m.exact_ = std::move(elements);
  return m;
}

const std::vector<Rational>& Povm::exact_diagonal(std::size_t x) const {
  if (exact_.empty()) throw ValidationError("POVM has no exact representation");
  return exact_[x];
}

Matrix Povm::total() const {
  Matrix sum = Matrix::Zero(elements_.front().rows(), elements_.front().cols());
  for (const auto& g : elements_) sum += g;
  return sum;
}

bool Povm::is_complete(double tol) const {
  if (!exact_.empty()) {
    for (std::size_t i = 0; i < exact_.front().size(); ++i) {
      Rational s = 0;
      for (const auto& g : exact_) s += g[i];
      if (s != 1) return false;
    }
    return true;
  }
  return max_abs(total() - Matrix::Identity(total().rows(), total().cols())) <= tol;
}

// ---------------------------------------------------------------------------
// Averages and the pretty-good measurement

StateDensity average_state(const Ensemble& e) {
  const std::size_t d = e.dim();
  if (e.is_exact()) {
    std::vector<Rational> t(d, Rational(0));
    for (std::size_t x = 0; x < e.size(); ++x) {
      const auto& s = e.states()[x].exact_diagonal();
      for (std::size_t i = 0; i < d; ++i) t[i] += e.exact_priors()[x] * s[i];
    }
    return StateDensity::diagonal(std::move(t));
  }
  if (e.is_diagonal()) {
    std::vector<double> t(d, 0.0);
    for (std::size_t x = 0; x < e.size(); ++x) {
      const auto& s = e.states()[x].diagonal_entries();
      for (std::size_t i = 0; i < d; ++i) t[i] += e.priors()[x] * s[i];
    }
    return StateDensity::diagonal(std::move(t));
  }
  Matrix t = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t x = 0; x < e.size(); ++x) t += e.priors()[x] * e.states()[x].matrix();
  return StateDensity::dense(t);
}

Povm pretty_good_measurement(const Ensemble& e) {
  const std::size_t d = e.dim();
  if (e.is_exact()) {
    const auto t = average_state(e).exact_diagonal();
    std::vector<std::vector<Rational>> gamma(e.size(), std::vector<Rational>(d, Rational(0)));
    for (std::size_t x = 0; x < e.size(); ++x) {
      const auto& s = e.states()[x].exact_diagonal();
      for (std::size_t i = 0; i < d; ++i)
        if (t[i] != 0) gamma[x][i] = e.exact_priors()[x] * s[i] / t[i];
    }
    return Povm::diagonal(std::move(gamma));
  }

  const Matrix t = average_state(e).matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(t);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  Eigen::VectorXcd inv_sqrt(lambda.size());
  Eigen::VectorXcd support(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const bool in = lambda(i) > kPseudoInverseCutoff;
    inv_sqrt(i) = in ? 1.0 / std::sqrt(lambda(i)) : 0.0;
    support(i) = in ? 1.0 : 0.0;
  }
  const Matrix& v = es.eigenvectors();
  const Matrix t_inv_sqrt = v * inv_sqrt.asDiagonal() * v.adjoint();
  const Matrix projector = v * support.asDiagonal() * v.adjoint();

  std::vector<Matrix> gamma;
  gamma.reserve(e.size());
  for (std::size_t x = 0; x < e.size(); ++x) {
    const Matrix tx = e.weighted(x).matrix();
    if (max_abs(tx - projector * tx * projector) > 1e-9)
      throw ValidationError("state of symbol " + std::to_string(x) + " leaves the support of the average state");
    gamma.push_back(hermitize(t_inv_sqrt * tx * t_inv_sqrt));
  }
  return Povm::dense(std::move(gamma));
}

double e_gen(const Ensemble& e, const Povm& m) {
  if (m.size() != e.size()) throw ValidationError("POVM and ensemble index different alphabets");
  if (m.dim() != e.dim()) throw ValidationError("POVM and ensemble act on different spaces");
  double total = 0.0;
  for (std::size_t x = 0; x < e.size(); ++x) total += e.priors()[x] * (e.states()[x].matrix() * m.element(x)).trace().real();
  return total;
}

Rational exact_e_gen(const Ensemble& e, const Povm& m) {
  if (!e.is_exact() || !m.is_exact()) throw ValidationError("exact e_gen needs an exact ensemble and POVM");
  if (m.size() != e.size() || m.dim() != e.dim()) throw ValidationError("POVM and ensemble do not match");
  Rational total = 0;
  for (std::size_t x = 0; x < e.size(); ++x) {
    const auto& s = e.states()[x].exact_diagonal();
    const auto& g = m.exact_diagonal(x);
    for (std::size_t i = 0; i < s.size(); ++i) total += e.exact_priors()[x] * s[i] * g[i];
  }
  return total;
}

// ---------------------------------------------------------------------------
// Optimal guessing for commuting ensembles

bool is_commuting(const Ensemble& e, double tol) {
  if (e.is_diagonal()) return true;
  std::vector<Matrix> m;
  for (const auto& s : e.states()) m.push_back(s.matrix());
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      if (max_abs(m[a] * m[b] - m[b] * m[a]) >= tol) return false;
  return true;
}

std::vector<std::vector<double>> common_diagonal(const Ensemble& e) {
  const std::size_t d = e.dim();
  std::vector<std::vector<double>> out(e.size(), std::vector<double>(d, 0.0));
  if (e.is_diagonal()) {
    for (std::size_t x = 0; x < e.size(); ++x) {
      const auto& s = e.states()[x].diagonal_entries();
      for (std::size_t i = 0; i < d; ++i) out[x][i] = e.priors()[x] * s[i];
    }
    return out;
  }
  if (!is_commuting(e))
    throw DomainError("optimal guessing is only implemented for commuting ensembles (commutator norm >= 1e-9)");

  std::vector<Matrix> m;
  for (const auto& s : e.states()) m.push_back(s.matrix());
  // A generic combination of commuting matrices has their common eigenbasis.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> coef(1.0, 2.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix h = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& s : m) h += coef(rng) * s;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h));
    const Matrix& v = es.eigenvectors();
    bool diagonalized = true;
    for (std::size_t x = 0; x < m.size() && diagonalized; ++x) {
      Matrix r = v.adjoint() * m[x] * v;
      for (std::size_t i = 0; i < d; ++i) out[x][i] = e.priors()[x] * r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      r.diagonal().setZero();
      if (max_abs(r) > 1e-7) diagonalized = false;
    }
    if (diagonalized) return out;
  }
  throw DomainError("failed to find a common eigenbasis for the ensemble");
}

double e_opt(const Ensemble& e) {
  if (e.is_exact()) return exact_e_opt(e).get_d();
  const auto diag = common_diagonal(e);
  double total = 0.0;
  for (std::size_t i = 0; i < e.dim(); ++i) {
    double best = 0.0;
    for (const auto& row : diag) best = std::max(best, row[i]);
    total += best;
  }
  return total;
}

Rational exact_e_opt(const Ensemble& e) {
  if (!e.is_exact()) throw ValidationError("exact e_opt needs an exact diagonal ensemble");
  Rational total = 0;
  for (std::size_t i = 0; i < e.dim(); ++i) {
    Rational best = 0;
    for (std::size_t x = 0; x < e.size(); ++x) {
      Rational v = e.exact_priors()[x] * e.states()[x].exact_diagonal()[i];
      if (v > best) best = v;
    }
    total += best;
  }
  return total;
}

double cond_min_entropy(const Ensemble& e) {
  const double p = e_opt(e);
  if (p >= 1.0) return 0.0;
  return -std::log(p) / std::log(static_cast<double>(e.alphabet().size));
}

// ---------------------------------------------------------------------------
// Partial trace

StateDensity partial_trace(const StateDensity& state, const std::vector<std::size_t>& dims, std::size_t subsystem) {
  if (subsystem >= dims.size()) throw ValidationError("partial trace subsystem index out of range");
  std::size_t total = 1, left = 1, right = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] == 0) throw ValidationError("tensor factor dimensions must be positive");
    total *= dims[i];
    if (i < subsystem) left *= dims[i];
    if (i > subsystem) right *= dims[i];
  }
  if (total != state.dim()) throw ValidationError("tensor factorization does not match the state dimension");
  const std::size_t mid = dims[subsystem];
  auto full = [&](std::size_t l, std::size_t s, std::size_t r) { return (l * mid + s) * right + r; };

  if (state.is_exact()) {
    const auto& d = state.exact_diagonal();
    std::vector<Rational> out(left * right, Rational(0));
    for (std::size_t l = 0; l < left; ++l)
      for (std::size_t r = 0; r < right; ++r)
        for (std::size_t s = 0; s < mid; ++s) out[l * right + r] += d[full(l, s, r)];
    return StateDensity::diagonal(std::move(out));
  }
  if (state.is_diagonal()) {
    const auto& d = state.diagonal_entries();
    std::vector<double> out(left * right, 0.0);
    for (std::size_t l = 0; l < left; ++l)
      for (std::size_t r = 0; r < right; ++r)
        for (std::size_t s = 0; s < mid; ++s) out[l * right + r] += d[full(l, s, r)];
    return StateDensity::diagonal(std::move(out));
  }
  const Matrix rho = state.matrix();
  const auto n = static_cast<Eigen::Index>(left * right);
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t l = 0; l < left; ++l)
    for (std::size_t r = 0; r < right; ++r)
      for (std::size_t l2 = 0; l2 < left; ++l2)
        for (std::size_t r2 = 0; r2 < right; ++r2) {
          std::complex<double> acc = 0.0;
          for (std::size_t s = 0; s < mid; ++s)
            acc += rho(static_cast<Eigen::Index>(full(l, s, r)), static_cast<Eigen::Index>(full(l2, s, r2)));
          out(static_cast<Eigen::Index>(l * right + r), static_cast<Eigen::Index>(l2 * right + r2)) = acc;
        }
  return StateDensity::dense(out);
}

// ---------------------------------------------------------------------------
// Phi table

Ensemble table_ensemble(unsigned n) {
  if (n < 1) throw DomainError("table ensemble needs n >= 1");
  std::vector<StateDensity> states;
  for (unsigned xi = 0; xi < n; ++xi) {
    std::vector<Rational> d(n, Rational(0));
    d[xi] = 1;
    states.push_back(StateDensity::diagonal(std::move(d)));
  }
  states.push_back(StateDensity::diagonal(std::vector<Rational>(n, Rational(1, n))));
  return Ensemble::exact(std::vector<Rational>(n + 1, Rational(1, n + 1)), std::move(states));
}

PhiRow phi_row(unsigned n) {
  const Ensemble e = table_ensemble(n);
  const Povm m = pretty_good_measurement(e);
  PhiRow row;
  row.n = n;
  row.t_scale = average_state(e).exact_diagonal()[0];
  row.gamma_basis = m.exact_diagonal(0)[0];
  row.gamma_mixed = m.exact_diagonal(n)[0];
  row.phi = exact_e_gen(e, m);
  return row;
}

// ---------------------------------------------------------------------------
// Classical-quantum key states

CqKeyState::CqKeyState(std::size_t keys, std::size_t members, std::size_t dim_q, std::vector<StateDensity> blocks)
    : keys_(keys), members_(members), dim_q_(dim_q), blocks_(std::move(blocks)) {
  if (blocks_.size() != keys_ * members_) throw ValidationError("cq key state has the wrong number of blocks");
}

double CqKeyState::total_trace() const {
  double t = 0.0;
  for (const auto& b : blocks_) t += b.trace();
  return t;
}

Matrix CqKeyState::dense() const {
  const std::size_t n = keys_ * members_ * dim_q_;
  if (n > 512) throw CapExceeded("dense cq key state exceeds 512 rows");
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t kappa = 0; kappa < keys_; ++kappa)
    for (std::size_t g = 0; g < members_; ++g) {
      const auto offset = static_cast<Eigen::Index>((kappa * members_ + g) * dim_q_);
      const auto d = static_cast<Eigen::Index>(dim_q_);
      out.block(offset, offset, d, d) = block(kappa, g).matrix();
    }
  return out;
}

namespace {

void check_cq_inputs(const Ensemble& e, const HashFamily& family) {
  if (e.size() != family.inputs())
    throw ValidationError("ensemble has " + std::to_string(e.size()) + " symbols, family expects " +
                          std::to_string(family.inputs()));
  if (e.dim() * family.outputs() * family.size() > kCqCap) throw CapExceeded("cq key state exceeds 2^22 entries");
}

// The |K| blocks of member g.
std::vector<StateDensity> member_blocks(const Ensemble& e, const HashFamily& family, std::size_t g) {
  const std::size_t keys = family.outputs();
  const std::size_t d = e.dim();
  std::vector<StateDensity> out;
  out.reserve(keys);
  if (e.is_exact()) {
    const Rational inv(1, static_cast<unsigned long>(family.size()));
    std::vector<std::vector<Rational>> acc(keys, std::vector<Rational>(d, Rational(0)));
    for (std::size_t x = 0; x < e.size(); ++x) {
      const auto& s = e.states()[x].exact_diagonal();
      auto& row = acc[family(g, x)];
      for (std::size_t i = 0; i < d; ++i) row[i] += e.exact_priors()[x] * s[i];
    }
    for (auto& row : acc) {
      for (auto& v : row) v *= inv;
      out.push_back(StateDensity::diagonal(std::move(row)));
    }
    return out;
  }
  const double inv = 1.0 / static_cast<double>(family.size());
  if (e.is_diagonal()) {
    std::vector<std::vector<double>> acc(keys, std::vector<double>(d, 0.0));
    for (std::size_t x = 0; x < e.size(); ++x) {
      const auto& s = e.states()[x].diagonal_entries();
      auto& row = acc[family(g, x)];
      for (std::size_t i = 0; i < d; ++i) row[i] += e.priors()[x] * s[i];
    }
    for (auto& row : acc) {
      for (auto& v : row) v *= inv;
      out.push_back(StateDensity::diagonal(std::move(row)));
    }
    return out;
  }
  std::vector<Matrix> acc(keys, Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  for (std::size_t x = 0; x < e.size(); ++x) acc[family(g, x)] += e.priors()[x] * e.states()[x].matrix();
  for (auto& m : acc) out.push_back(StateDensity::dense(m * inv));
  return out;
}

CqKeyState assemble(const HashFamily& family, std::size_t d, std::vector<std::vector<StateDensity>>& rows) {
  std::vector<StateDensity> blocks;
  blocks.reserve(family.size() * family.outputs());
  for (auto& row : rows)
    for (auto& b : row) blocks.push_back(std::move(b));
  return CqKeyState(family.outputs(), family.size(), d, std::move(blocks));
}

}  // namespace

CqKeyState serial::cq_key_state(const Ensemble& e, const HashFamily& family) {
  check_cq_inputs(e, family);
  std::vector<std::vector<StateDensity>> rows;
  for (std::size_t g = 0; g < family.size(); ++g) rows.push_back(member_blocks(e, family, g));
  return assemble(family, e.dim(), rows);
}

CqKeyState cq_key_state(const Ensemble& e, const HashFamily& family) {
  check_cq_inputs(e, family);
  std::vector<std::vector<StateDensity>> rows(family.size());
  const auto members = static_cast<std::ptrdiff_t>(family.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t g = 0; g < members; ++g)
    rows[static_cast<std::size_t>(g)] = member_blocks(e, family, static_cast<std::size_t>(g));
  return assemble(family, e.dim(), rows);
}

TripartiteReport tripartite_lhl(const Ensemble& e, const HashFamily& family, std::optional<double> h_plus) {
  const unsigned q = family.q();
  const long k = static_cast<long>(family.k());
  const Rational qr(q);
  TripartiteReport r;

  const bool exact = e.is_exact();
  const Rational opt_exact = exact ? exact_e_opt(e) : Rational(0);
  const double opt = exact ? opt_exact.get_d() : e_opt(e);
  r.h_min = opt >= 1.0 ? 0.0 : -std::log(opt) / std::log(static_cast<double>(q));
  r.h_plus = h_plus.value_or(r.h_min);
  r.bound = lhl_bound(r.h_plus, family.k(), Alphabet{q, 1});

  const CqKeyState cq = cq_key_state(e, family);
  const StateDensity t_q = average_state(e);
  const std::size_t n_blocks = cq.blocks().size();

  if (exact) {
    const Rational scale = pow(qr, -k) / Rational(static_cast<unsigned long>(family.size()));
    std::vector<Rational> ref = t_q.exact_diagonal();
    for (auto& v : ref) v *= scale;
    Rational total = 0;
    for (const auto& b : cq.blocks()) {
      const auto& d = b.exact_diagonal();
      for (std::size_t i = 0; i < d.size(); ++i) total += abs(d[i] - ref[i]);
    }
    r.exact_distance = total / q;
    r.distance = r.exact_distance->get_d();
  } else {
    const double scale = std::pow(static_cast<double>(q), -static_cast<double>(k)) / static_cast<double>(family.size());
    const StateDensity ref = t_q.scaled(scale);
    std::vector<double> norms(n_blocks, 0.0);
    const auto nb = static_cast<std::ptrdiff_t>(n_blocks);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < nb; ++i)
      norms[static_cast<std::size_t>(i)] =
          schatten_norm_of_difference(cq.blocks()[static_cast<std::size_t>(i)], ref, NormSpec::trace_norm());
    double total = 0.0;
    for (double v : norms) total += v;
    r.distance = total / q;
  }

  // Exact comparisons whenever |A|^-h_plus is rational.
  std::optional<Rational> q_pow_minus_h;
  if (exact && !h_plus) {
    q_pow_minus_h = opt_exact;
  } else if (exact && std::floor(*h_plus) == *h_plus && std::abs(*h_plus) < 1e6) {
    q_pow_minus_h = pow(qr, -static_cast<long>(*h_plus));
  }
  if (q_pow_minus_h) {
    r.precondition_met = opt_exact <= *q_pow_minus_h;
    r.satisfied = *r.exact_distance * *r.exact_distance <= pow(qr, k) * *q_pow_minus_h;
  } else {
    r.precondition_met = !h_plus || r.h_min >= r.h_plus - 1e-12;
    r.satisfied = r.distance <= r.bound * (1.0 + 1e-12);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Random ensembles

namespace {

std::vector<Rational> random_rational_simplex(std::size_t n, unsigned grain, std::mt19937_64& rng, bool positive) {
  std::uniform_int_distribution<unsigned> pick(positive ? 1u : 0u, grain);
  std::vector<unsigned> raw(n);
  unsigned total = 0;
  while (total == 0) {
    total = 0;
    for (auto& v : raw) {
      v = pick(rng);
      total += v;
    }
  }
  std::vector<Rational> out;
  out.reserve(n);
  for (unsigned v : raw) {
    Rational r(v, total);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (auto& x : v) {
    x = ex(rng);
    total += x;
  }
  for (auto& x : v) x /= total;
  return v;
}

Matrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Matrix g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = {n01(rng), n01(rng)};
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ();
}

}  // namespace

Ensemble random_diagonal_ensemble(std::size_t symbols, std::size_t dim, std::uint64_t seed, unsigned grain) {
  std::mt19937_64 rng(seed);
  auto priors = random_rational_simplex(symbols, grain, rng, true);
  std::vector<StateDensity> states;
  for (std::size_t x = 0; x < symbols; ++x) states.push_back(StateDensity::diagonal(random_rational_simplex(dim, grain, rng, false)));
  return Ensemble::exact(std::move(priors), std::move(states));
}

Ensemble random_commuting_ensemble(std::size_t symbols, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix u = random_unitary(dim, rng);
  std::vector<StateDensity> states;
  for (std::size_t x = 0; x < symbols; ++x) {
    const auto d = random_simplex(dim, rng);
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) diag(static_cast<Eigen::Index>(i)) = d[i];
    states.push_back(StateDensity::dense(hermitize(u * diag.asDiagonal() * u.adjoint())));
  }
  return Ensemble::floating(random_simplex(symbols, rng), std::move(states));
}

Ensemble random_ensemble(std::size_t symbols, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::vector<StateDensity> states;
  for (std::size_t x = 0; x < symbols; ++x) {
    Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = {n01(rng), n01(rng)};
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    states.push_back(StateDensity::dense(hermitize(rho)));
  }
  return Ensemble::floating(random_simplex(symbols, rng), std::move(states));
}

}  // namespace kd
