#pragma once

#include "keydist/core.hpp"
#include "keydist/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kd {

enum class FamilyKind { linear, toeplitz, table };

inline constexpr std::size_t kFamilyCap = std::size_t{1} << 20;

/// Enumerable hash family g: A^m -> A^k over |A| = q. Members are stored as a
/// flat lookup table so every kind evaluates the same way.
class HashFamily {
 public:
  /// All k x m matrices over GF(q); |G| = q^(mk). q must be prime.
  static HashFamily all_linear(unsigned q, unsigned m, unsigned k);
  /// All k x m Toeplitz matrices over GF(q); |G| = q^(m+k-1). q must be prime.
  static HashFamily toeplitz(unsigned q, unsigned m, unsigned k);
  /// Explicit table: table[g][x] is the output symbol index of member g on input x.
  static HashFamily from_table(unsigned q, unsigned m, unsigned k, const std::vector<std::vector<std::uint32_t>>& table);

  FamilyKind kind() const { return kind_; }
  unsigned q() const { return q_; }
  unsigned m() const { return m_; }
  unsigned k() const { return k_; }
  Alphabet input_alphabet() const { return {q_, m_}; }
  Alphabet output_alphabet() const { return {q_, k_}; }

  std::size_t size() const { return members_; }
  std::size_t inputs() const { return inputs_; }
  std::size_t outputs() const { return outputs_; }
  /// zeta = log_q |G|.
  double zeta() const;

  std::uint32_t operator()(std::size_t g, std::size_t x) const { return table_[g * inputs_ + x]; }

 private:
  HashFamily() = default;

  FamilyKind kind_ = FamilyKind::table;
  unsigned q_ = 2, m_ = 1, k_ = 1;
  std::size_t members_ = 0, inputs_ = 0, outputs_ = 0;
  std::vector<std::uint32_t> table_;
};

HashFamily build_family(FamilyKind kind, unsigned q, unsigned m, unsigned k);

bool is_prime(unsigned q);

struct UniversalityReport {
  /// max over x != x' of Pr_g[g(x) = g(x')].
  Rational max_collision;
  /// |A|^-k.
  Rational threshold;
  bool universal = false;
};

UniversalityReport verify_universality(const HashFamily& family);

/// Exact P_KG(kappa, g) = |G|^-1 sum_{x : g(x) = kappa} P_x.
class JointKeyState {
 public:
  JointKeyState(std::size_t keys, std::size_t members, std::vector<Rational> cells);

  std::size_t keys() const { return keys_; }
  std::size_t members() const { return members_; }
  const Rational& operator()(std::size_t kappa, std::size_t g) const { return cells_[g * keys_ + kappa]; }
  const std::vector<Rational>& cells() const { return cells_; }

  Rational member_marginal(std::size_t g) const;
  Rational key_marginal(std::size_t kappa) const;
  /// The uniform reference cell value |A|^(-k-zeta) = 1 / (|K| |G|).
  Rational uniform_cell() const;

 private:
  std::size_t keys_;
  std::size_t members_;
  std::vector<Rational> cells_;
};

JointKeyState joint_state(const FiniteDistribution& px, const HashFamily& family);

/// |A|^-1 sum_{kappa,g} |P_KG - |A|^(-k-zeta)|, exact.
Rational lhl_distance(const JointKeyState& joint, unsigned q);
Rational lhl_distance(const FiniteDistribution& px, const HashFamily& family);

struct CollisionReport {
  Rational value;
  /// |A|^(-k-zeta) + |A|^-zeta sum_x P_x^2, the intermediate bound of the proof.
  Rational proof_bound;
  /// False for families that are not |A|^-k universal; the bound is then not asserted.
  bool bound_checked = false;
  bool within_bound = false;
};

CollisionReport collision_probability(const FiniteDistribution& px, const HashFamily& family);
Rational collision_probability(const JointKeyState& joint);

/// |A|^(-(h_plus - k)/2).
double lhl_bound(double h_plus, unsigned k, const Alphabet& alphabet);

enum class KeyLengthMode { inverted, literal };

struct KeyLength {
  long value = 0;
  std::optional<std::string> warning;
};

/// inverted: floor(h_plus + 2 log_|A| eps); literal: floor(h_plus - (2 / ln|A|) ln eps).
KeyLength max_key_length(double h_plus, double epsilon, const Alphabet& alphabet,
                         KeyLengthMode mode = KeyLengthMode::inverted);

struct LhlReport {
  Rational distance;
  Rational collision;
  double bound = 0.0;
  double h_plus = 0.0;
  double h_min = 0.0;
  bool precondition_met = false;
  /// distance <= bound, decided by comparing squares exactly.
  bool satisfied = false;
  /// |A|^(k/2-1) sqrt(|A|^zeta * collision - |A|^-k), squared.
  Rational middle_squared;
  /// distance <= middle <= bound.
  bool chain_holds = false;
  /// (sum |a|)^2 <= N sum a^2 on the deviation vector a = P_KG - uniform.
  bool cauchy_schwarz_holds = false;
  CollisionReport collision_report;
  UniversalityReport universality;
};

/// Full classical pipeline. h_plus defaults to min_entropy(px) in base q, in
/// which case |A|^-h_plus = max_x P_x and every comparison is exact.
LhlReport evaluate_lhl(const FiniteDistribution& px, const HashFamily& family,
                       std::optional<double> h_plus = std::nullopt);

namespace serial {
UniversalityReport verify_universality(const HashFamily& family);
JointKeyState joint_state(const FiniteDistribution& px, const HashFamily& family);
}  // namespace serial

}  // namespace kd
