#include "keydist/hashing.hpp"

#include "keydist/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace kd {

namespace {

std::size_t checked_power(unsigned base, unsigned exponent, std::size_t cap, const char* what) {
  std::size_t n = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    n *= base;
    if (n > cap) throw CapExceeded(std::string(what) + " exceeds enumeration cap");
  }
  return n;
}

std::vector<unsigned> digits_of(std::size_t index, unsigned base, unsigned count) {
  std::vector<unsigned> d(count);
  for (unsigned i = count; i-- > 0;) {
    d[i] = static_cast<unsigned>(index % base);
    index /= base;
  }
  return d;
}

std::size_t index_of(const std::vector<unsigned>& digits, unsigned base) {
  std::size_t idx = 0;
  for (unsigned d : digits) idx = idx * base + d;
  return idx;
}

void check_linear_params(unsigned q, unsigned m, unsigned k) {
  if (!is_prime(q)) throw ValidationError("GF(q) families need prime q, got " + std::to_string(q));
  if (m < 1 || k < 1) throw ValidationError("hash families need m >= 1 and k >= 1");
  if (k > m) throw ValidationError("hash families need m >= k");
}

// Fills table[g * inputs + x] = M_g x over GF(q), where `matrix_of(g)` returns
// the k x m matrix (row-major) of member g.
template <class MatrixOf>
std::vector<std::uint32_t> tabulate(unsigned q, unsigned m, unsigned k, std::size_t members, MatrixOf matrix_of) {
  const std::size_t inputs = checked_power(q, m, kFamilyCap, "input alphabet");
  if (members * inputs > (std::size_t{1} << 26)) throw CapExceeded("family table exceeds 2^26 entries");
  std::vector<std::uint32_t> table(members * inputs);
  std::vector<std::vector<unsigned>> inputs_digits(inputs);
  for (std::size_t x = 0; x < inputs; ++x) inputs_digits[x] = digits_of(x, q, m);
  for (std::size_t g = 0; g < members; ++g) {
    const std::vector<unsigned> mat = matrix_of(g);
    std::vector<unsigned> out(k);
    for (std::size_t x = 0; x < inputs; ++x) {
      const auto& xd = inputs_digits[x];
      for (unsigned i = 0; i < k; ++i) {
        unsigned acc = 0;
        for (unsigned j = 0; j < m; ++j) acc = (acc + mat[i * m + j] * xd[j]) % q;
        out[i] = acc;
      }
      table[g * inputs + x] = static_cast<std::uint32_t>(index_of(out, q));
    }
  }
  return table;
}

}  // namespace

bool is_prime(unsigned q) {
  if (q < 2) return false;
  for (unsigned d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

HashFamily HashFamily::all_linear(unsigned q, unsigned m, unsigned k) {
  check_linear_params(q, m, k);
  HashFamily f;
  f.kind_ = FamilyKind::linear;
  f.q_ = q;
  f.m_ = m;
  f.k_ = k;
  f.members_ = checked_power(q, m * k, kFamilyCap, "linear family");
  f.inputs_ = checked_power(q, m, kFamilyCap, "input alphabet");
  f.outputs_ = checked_power(q, k, kFamilyCap, "output alphabet");
  f.table_ = tabulate(q, m, k, f.members_, [&](std::size_t g) { return digits_of(g, q, m * k); });
  return f;
}

HashFamily HashFamily::toeplitz(unsigned q, unsigned m, unsigned k) {
  check_linear_params(q, m, k);
  HashFamily f;
  f.kind_ = FamilyKind::toeplitz;
  f.q_ = q;
  f.m_ = m;
  f.k_ = k;
  f.members_ = checked_power(q, m + k - 1, kFamilyCap, "Toeplitz family");
  f.inputs_ = checked_power(q, m, kFamilyCap, "input alphabet");
  f.outputs_ = checked_power(q, k, kFamilyCap, "output alphabet");
  f.table_ = tabulate(q, m, k, f.members_, [&](std::size_t g) {
    const std::vector<unsigned> diag = digits_of(g, q, m + k - 1);
    std::vector<unsigned> mat(static_cast<std::size_t>(k) * m);
    // Entry (i, j) depends only on i - j.
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < m; ++j) mat[i * m + j] = diag[i + m - 1 - j];
    return mat;
  });
  return f;
}

HashFamily HashFamily::from_table(unsigned q, unsigned m, unsigned k,
                                  const std::vector<std::vector<std::uint32_t>>& table) {
  if (q < 2) throw ValidationError("alphabet size must be >= 2");
  if (m < 1 || k < 1) throw ValidationError("hash families need m >= 1 and k >= 1");
  if (table.empty()) throw ValidationError("hash family table is empty");
  if (table.size() > kFamilyCap) throw CapExceeded("explicit family exceeds 2^20 members");
  HashFamily f;
  f.kind_ = FamilyKind::table;
  f.q_ = q;
  f.m_ = m;
  f.k_ = k;
  f.members_ = table.size();
  f.inputs_ = checked_power(q, m, kFamilyCap, "input alphabet");
  f.outputs_ = checked_power(q, k, kFamilyCap, "output alphabet");
  if (f.members_ * f.inputs_ > (std::size_t{1} << 26)) throw CapExceeded("family table exceeds 2^26 entries");
  f.table_.reserve(f.members_ * f.inputs_);
  for (std::size_t g = 0; g < table.size(); ++g) {
    if (table[g].size() != f.inputs_)
      throw ValidationError("hash member " + std::to_string(g) + " is not total on A^m");
    for (auto v : table[g]) {
      if (v >= f.outputs_) throw ValidationError("hash member " + std::to_string(g) + " maps outside A^k");
      f.table_.push_back(v);
    }
  }
  return f;
}

double HashFamily::zeta() const {
  return std::log(static_cast<double>(members_)) / std::log(static_cast<double>(q_));
}

HashFamily build_family(FamilyKind kind, unsigned q, unsigned m, unsigned k) {
  switch (kind) {
    case FamilyKind::linear:
      return HashFamily::all_linear(q, m, k);
    case FamilyKind::toeplitz:
      return HashFamily::toeplitz(q, m, k);
    case FamilyKind::table:
      break;
  }
  throw ValidationError("explicit families are loaded from a table, not built");
}

// ---------------------------------------------------------------------------
// Universality

namespace {

UniversalityReport make_report(std::size_t max_count, const HashFamily& family) {
  UniversalityReport r;
  r.max_collision = Rational(static_cast<unsigned long>(max_count), static_cast<unsigned long>(family.size()));
  r.max_collision.canonicalize();
  r.threshold = pow(Rational(family.q()), -static_cast<long>(family.k()));
  r.universal = r.max_collision <= r.threshold;
  return r;
}

std::size_t collisions_for_pair(const HashFamily& family, std::size_t x, std::size_t y) {
  std::size_t count = 0;
  for (std::size_t g = 0; g < family.size(); ++g)
    if (family(g, x) == family(g, y)) ++count;
  return count;
}

}  // namespace

UniversalityReport serial::verify_universality(const HashFamily& family) {
  std::size_t best = 0;
  for (std::size_t x = 0; x < family.inputs(); ++x)
    for (std::size_t y = x + 1; y < family.inputs(); ++y) best = std::max(best, collisions_for_pair(family, x, y));
  return make_report(best, family);
}

UniversalityReport verify_universality(const HashFamily& family) {
  std::size_t best = 0;
  const auto n = static_cast<std::ptrdiff_t>(family.inputs());
#pragma omp parallel for schedule(dynamic) reduction(max : best)
  for (std::ptrdiff_t x = 0; x < n; ++x)
    for (std::ptrdiff_t y = x + 1; y < n; ++y)
      best = std::max(best, collisions_for_pair(family, static_cast<std::size_t>(x), static_cast<std::size_t>(y)));
  return make_report(best, family);
}

// ---------------------------------------------------------------------------
// Joint key state

JointKeyState::JointKeyState(std::size_t keys, std::size_t members, std::vector<Rational> cells)
    : keys_(keys), members_(members), cells_(std::move(cells)) {
  if (cells_.size() != keys_ * members_) throw ValidationError("joint key table has the wrong size");
}

Rational JointKeyState::member_marginal(std::size_t g) const {
  Rational total = 0;
  for (std::size_t kappa = 0; kappa < keys_; ++kappa) total += (*this)(kappa, g);
  return total;
}

Rational JointKeyState::key_marginal(std::size_t kappa) const {
  Rational total = 0;
  for (std::size_t g = 0; g < members_; ++g) total += (*this)(kappa, g);
  return total;
}

Rational JointKeyState::uniform_cell() const {
  Rational u(1, static_cast<unsigned long>(keys_ * members_));
  u.canonicalize();
  return u;
}

namespace {

void check_source(const FiniteDistribution& px, const HashFamily& family) {
  if (!px.is_exact()) throw ValidationError("hashing arithmetic needs an exact (rational) source distribution");
  if (px.size() != family.inputs())
    throw ValidationError("source has " + std::to_string(px.size()) + " symbols, family expects " +
                          std::to_string(family.inputs()));
}

void fill_member_row(const std::vector<Rational>& w, const HashFamily& family, std::size_t g, const Rational& scale,
                     std::vector<Rational>& cells) {
  const std::size_t keys = family.outputs();
  for (std::size_t x = 0; x < family.inputs(); ++x) cells[g * keys + family(g, x)] += w[x];
  for (std::size_t kappa = 0; kappa < keys; ++kappa) cells[g * keys + kappa] *= scale;
}

}  // namespace

JointKeyState serial::joint_state(const FiniteDistribution& px, const HashFamily& family) {
  check_source(px, family);
  const auto& w = px.exact_weights();
  std::vector<Rational> cells(family.outputs() * family.size(), Rational(0));
  const Rational scale(1, static_cast<unsigned long>(family.size()));
  for (std::size_t g = 0; g < family.size(); ++g) fill_member_row(w, family, g, scale, cells);
  return JointKeyState(family.outputs(), family.size(), std::move(cells));
}

JointKeyState joint_state(const FiniteDistribution& px, const HashFamily& family) {
  check_source(px, family);
  const auto& w = px.exact_weights();
  std::vector<Rational> cells(family.outputs() * family.size(), Rational(0));
  const Rational scale(1, static_cast<unsigned long>(family.size()));
  const auto members = static_cast<std::ptrdiff_t>(family.size());
  // Each member owns a disjoint row of the table.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t g = 0; g < members; ++g) fill_member_row(w, family, static_cast<std::size_t>(g), scale, cells);
  return JointKeyState(family.outputs(), family.size(), std::move(cells));
}

// ---------------------------------------------------------------------------
// Distances and bounds

Rational lhl_distance(const JointKeyState& joint, unsigned q) {
  const Rational u = joint.uniform_cell();
  Rational total = 0;
  for (const auto& c : joint.cells()) total += abs(c - u);
  return total / q;
}

Rational lhl_distance(const FiniteDistribution& px, const HashFamily& family) {
  return lhl_distance(joint_state(px, family), family.q());
}

Rational collision_probability(const JointKeyState& joint) {
  Rational total = 0;
  for (const auto& c : joint.cells()) total += c * c;
  return total;
}

CollisionReport collision_probability(const FiniteDistribution& px, const HashFamily& family) {
  const auto joint = joint_state(px, family);
  CollisionReport r;
  r.value = collision_probability(joint);
  Rational p2 = 0;
  for (const auto& p : px.exact_weights()) p2 += p * p;
  const Rational inv_members(1, static_cast<unsigned long>(family.size()));
  r.proof_bound = inv_members * (pow(Rational(family.q()), -static_cast<long>(family.k())) + p2);
  r.bound_checked = verify_universality(family).universal;
  r.within_bound = r.value <= r.proof_bound;
  return r;
}

double lhl_bound(double h_plus, unsigned k, const Alphabet& alphabet) {
  return std::pow(static_cast<double>(alphabet.size), -(h_plus - static_cast<double>(k)) / 2.0);
}

KeyLength max_key_length(double h_plus, double epsilon, const Alphabet& alphabet, KeyLengthMode mode) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in (0, 1]");
  const double ln_a = std::log(static_cast<double>(alphabet.size));
  const double raw = mode == KeyLengthMode::inverted ? h_plus + 2.0 * std::log(epsilon) / ln_a
                                                      : h_plus - (2.0 / ln_a) * std::log(epsilon);
  // Absorb rounding in log ratios such as log2(1/2) before flooring.
  const double floored = std::floor(raw + 1e-9);
  KeyLength out;
  if (floored < 0.0) {
    out.value = 0;
    out.warning = "no key can be extracted at this epsilon; clamped to 0";
  } else {
    out.value = static_cast<long>(floored);
  }
  return out;
}

LhlReport evaluate_lhl(const FiniteDistribution& px, const HashFamily& family, std::optional<double> h_plus) {
  check_source(px, family);
  LhlReport r;
  const unsigned q = family.q();
  const long k = static_cast<long>(family.k());
  const Rational qr(q);
  const Rational pmax = px.exact_max_weight();

  r.h_min = pmax == 1 ? 0.0 : -std::log(pmax.get_d()) / std::log(static_cast<double>(q));
  r.h_plus = h_plus.value_or(r.h_min);

  // |A|^-h_plus as an exact rational: max_x P_x at the default, q^-h for
  // integral h, otherwise the exact value of the double.
  Rational q_pow_minus_h;
  if (!h_plus) {
    q_pow_minus_h = pmax;
    r.precondition_met = true;
  } else {
    const double h = *h_plus;
    if (std::floor(h) == h && std::abs(h) < 1e6)
      q_pow_minus_h = pow(qr, -static_cast<long>(h));
    else
      q_pow_minus_h = Rational(std::pow(static_cast<double>(q), -h));
    r.precondition_met = pmax <= q_pow_minus_h;
  }
  r.bound = lhl_bound(r.h_plus, family.k(), Alphabet{q, 1});

  const auto joint = joint_state(px, family);
  r.distance = lhl_distance(joint, q);
  r.collision = collision_probability(joint);

  const Rational bound_sq = pow(qr, k) * q_pow_minus_h;
  const Rational dist_sq = r.distance * r.distance;
  r.satisfied = dist_sq <= bound_sq;

  const Rational members(static_cast<unsigned long>(family.size()));
  r.middle_squared = pow(qr, k - 2) * (members * r.collision - pow(qr, -k));
  r.chain_holds = dist_sq <= r.middle_squared && r.middle_squared <= bound_sq;

  const Rational u = joint.uniform_cell();
  Rational l1 = 0, l2 = 0;
  for (const auto& c : joint.cells()) {
    const Rational a = c - u;
    l1 += abs(a);
    l2 += a * a;
  }
  r.cauchy_schwarz_holds = l1 * l1 <= Rational(static_cast<unsigned long>(joint.cells().size())) * l2;

  r.universality = verify_universality(family);
  r.collision_report.value = r.collision;
  Rational p2 = 0;
  for (const auto& p : px.exact_weights()) p2 += p * p;
  r.collision_report.proof_bound = (pow(qr, -k) + p2) / members;
  r.collision_report.bound_checked = r.universality.universal;
  r.collision_report.within_bound = r.collision <= r.collision_report.proof_bound;
  return r;
}

}  // namespace kd
