#pragma once

#include "keydist/core.hpp"
#include "keydist/hashing.hpp"
#include "keydist/rational.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace kd {

/// {P_x, T~_x}: priors over X with trace-one states on a common space Q.
/// An ensemble is exact when its priors are rational and every state is an
/// exact diagonal; the exact path then runs end to end in rationals.
class Ensemble {
 public:
  static Ensemble exact(std::vector<Rational> priors, std::vector<StateDensity> states,
                        std::optional<Alphabet> alphabet = std::nullopt);
  static Ensemble floating(std::vector<double> priors, std::vector<StateDensity> states,
                           std::optional<Alphabet> alphabet = std::nullopt);

  std::size_t size() const { return states_.size(); }
  std::size_t dim() const { return states_.front().dim(); }
  /// Alphabet of X. Defaults to {|X|, 1}; set {q, m} for ensembles over A^m.
  const Alphabet& alphabet() const { return alphabet_; }

  const std::vector<double>& priors() const { return priors_; }
  const std::vector<Rational>& exact_priors() const;
  const std::vector<StateDensity>& states() const { return states_; }

  bool is_exact() const;
  bool is_diagonal() const;

  /// T_x = P_x T~_x.
  StateDensity weighted(std::size_t x) const;

 private:
  Ensemble() = default;
  void validate() const;

  Alphabet alphabet_;
  std::vector<double> priors_;
  std::vector<Rational> exact_priors_;
  std::vector<StateDensity> states_;
};

/// Measurement elements Gamma_x. Elements are PSD but need not have trace <= 1,
/// so they are kept as plain matrices (or exact diagonals).
class Povm {
 public:
  static Povm dense(std::vector<Eigen::MatrixXcd> elements);
  static Povm diagonal(std::vector<std::vector<Rational>> elements);

  std::size_t size() const { return elements_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(elements_.front().rows()); }
  const Eigen::MatrixXcd& element(std::size_t x) const { return elements_[x]; }
  bool is_exact() const { return !exact_.empty(); }
  const std::vector<Rational>& exact_diagonal(std::size_t x) const;

  Eigen::MatrixXcd total() const;
  /// sum_x Gamma_x = I within tol.
  bool is_complete(double tol = 1e-9) const;

 private:
  Povm() = default;

  std::vector<Eigen::MatrixXcd> elements_;
  std::vector<std::vector<Rational>> exact_;
};

/// T = sum_x P_x T~_x.
StateDensity average_state(const Ensemble& e);

inline constexpr double kPseudoInverseCutoff = 1e-12;

/// Gamma_x = T^(-1/2) T_x T^(-1/2), with the pseudo-inverse taken on supp(T)
/// (eigenvalues <= 1e-12 dropped). The elements then sum to the projector
/// onto supp(T). Exact ensembles give exact diagonal elements T_x / T.
Povm pretty_good_measurement(const Ensemble& e);

/// sum_x tr(T_x Gamma_x).
double e_gen(const Ensemble& e, const Povm& m);
/// Same, in rationals; needs an exact ensemble and an exact POVM.
Rational exact_e_gen(const Ensemble& e, const Povm& m);

inline constexpr double kCommutatorTolerance = 1e-9;

bool is_commuting(const Ensemble& e, double tol = kCommutatorTolerance);

/// Diagonal form of a commuting ensemble in a common eigenbasis: entry [x][q]
/// is <q|T_x|q>. Throws DomainError for non-commuting ensembles.
std::vector<std::vector<double>> common_diagonal(const Ensemble& e);

/// sum_q max_x <q|T_x|q> in a common eigenbasis; the optimal guessing
/// probability for commuting ensembles. Non-commuting input throws DomainError.
double e_opt(const Ensemble& e);
Rational exact_e_opt(const Ensemble& e);

/// -log_|A| e_opt, with |A| = alphabet().size.
double cond_min_entropy(const Ensemble& e);

/// Traces out factor `subsystem` of a state on the tensor product of spaces
/// with the given dimensions. Diagonal (and exact) states stay diagonal.
StateDensity partial_trace(const StateDensity& state, const std::vector<std::size_t>& dims, std::size_t subsystem);

/// The n + 1 state ensemble of the Phi-existence table: basis projectors
/// |xi><xi| for xi < n and the mixed state I/n, all at prior 1/(n+1).
Ensemble table_ensemble(unsigned n);

struct PhiRow {
  unsigned n = 0;
  /// T = t_scale * I.
  Rational t_scale;
  /// Gamma_xi = gamma_basis * |xi><xi|.
  Rational gamma_basis;
  /// Gamma_n = gamma_mixed * I.
  Rational gamma_mixed;
  /// e_gen of the PGM.
  Rational phi;
};

/// Builds the table ensemble and evaluates its PGM exactly.
PhiRow phi_row(unsigned n);

/// Block-diagonal classical-quantum key state: block (kappa, g) is
/// T_{Q,kappa g} = |G|^-1 sum_{x : g(x) = kappa} T_x.
class CqKeyState {
 public:
  CqKeyState(std::size_t keys, std::size_t members, std::size_t dim_q, std::vector<StateDensity> blocks);

  std::size_t keys() const { return keys_; }
  std::size_t members() const { return members_; }
  std::size_t dim_q() const { return dim_q_; }
  const StateDensity& block(std::size_t kappa, std::size_t g) const { return blocks_[g * keys_ + kappa]; }
  const std::vector<StateDensity>& blocks() const { return blocks_; }

  double total_trace() const;
  /// Full matrix on K (x) G (x) Q. Capped at 512 rows.
  Eigen::MatrixXcd dense() const;

 private:
  std::size_t keys_;
  std::size_t members_;
  std::size_t dim_q_;
  std::vector<StateDensity> blocks_;
};

inline constexpr std::size_t kCqCap = std::size_t{1} << 22;

CqKeyState cq_key_state(const Ensemble& e, const HashFamily& family);

struct TripartiteReport {
  /// |A|^-1 sum_{kappa,g} || T_{Q,kappa g} - |A|^-k |G|^-1 T_Q ||_1.
  double distance = 0.0;
  std::optional<Rational> exact_distance;
  double bound = 0.0;
  double h_plus = 0.0;
  double h_min = 0.0;
  bool precondition_met = false;
  bool satisfied = false;
};

/// Quantum leftover-hash check for commuting side information. h_plus
/// defaults to h_min(X|Q); for exact ensembles the comparison is then exact.
TripartiteReport tripartite_lhl(const Ensemble& e, const HashFamily& family,
                                std::optional<double> h_plus = std::nullopt);

/// Random ensembles for property checks. Diagonal ones are exact (rational
/// priors and entries with denominators up to `grain`); rotated ones share a
/// random unitary and are floating.
Ensemble random_diagonal_ensemble(std::size_t symbols, std::size_t dim, std::uint64_t seed, unsigned grain = 12);
Ensemble random_commuting_ensemble(std::size_t symbols, std::size_t dim, std::uint64_t seed);
Ensemble random_ensemble(std::size_t symbols, std::size_t dim, std::uint64_t seed);

namespace serial {
CqKeyState cq_key_state(const Ensemble& e, const HashFamily& family);
}  // namespace serial

}  // namespace kd
