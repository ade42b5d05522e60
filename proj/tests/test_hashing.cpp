#include "keydist/errors.hpp"
#include "keydist/hashing.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using kd::Alphabet;
using kd::FiniteDistribution;
using kd::HashFamily;
using kd::Rational;

namespace {

// Direct enumeration over all k x m binary matrices, independent of the table layout.
std::vector<Rational> brute_joint_binary(const FiniteDistribution& px, unsigned m, unsigned k) {
  const std::size_t members = std::size_t{1} << (m * k), keys = std::size_t{1} << k;
  std::vector<Rational> cells(members * keys);
  for (std::size_t g = 0; g < members; ++g)
    for (std::size_t x = 0; x < (std::size_t{1} << m); ++x) {
      std::size_t key = 0;
      for (unsigned row = 0; row < k; ++row) {
        unsigned bit = 0;
        for (unsigned col = 0; col < m; ++col) bit ^= ((g >> (row * m + col)) & 1u) & ((x >> col) & 1u);
        key |= static_cast<std::size_t>(bit) << row;
      }
      cells[g * keys + key] += px.exact_weights()[x];
    }
  for (auto& c : cells) c /= static_cast<unsigned long>(members);
  return cells;
}

HashFamily bijections_m1() { return HashFamily::from_table(2, 1, 1, {{0, 1}, {1, 0}}); }

}  // namespace

TEST_CASE("family sizes") {
  const auto f = HashFamily::all_linear(2, 2, 1);
  CHECK(f.size() == 4);
  CHECK(f.zeta() == doctest::Approx(2.0));
  CHECK(HashFamily::toeplitz(2, 3, 2).size() == 16);
  CHECK(HashFamily::all_linear(3, 2, 1).size() == 9);
  CHECK_THROWS_AS(HashFamily::all_linear(4, 2, 1), kd::ValidationError);
  CHECK_THROWS_AS(HashFamily::all_linear(2, 1, 2), kd::ValidationError);
  CHECK_THROWS_AS(HashFamily::all_linear(2, 5, 5), kd::CapExceeded);
  CHECK_THROWS_AS(HashFamily::from_table(2, 1, 1, {{0, 2}}), kd::ValidationError);
  CHECK_THROWS_AS(HashFamily::from_table(2, 1, 1, {{0}}), kd::ValidationError);
}

TEST_CASE("m = k = 1 linear family holds the zero map and the identity") {
  const auto f = HashFamily::all_linear(2, 1, 1);
  REQUIRE(f.size() == 2);
  bool zero = false, identity = false;
  for (std::size_t g = 0; g < 2; ++g) {
    zero |= f(g, 0) == 0 && f(g, 1) == 0;
    identity |= f(g, 0) == 0 && f(g, 1) == 1;
  }
  CHECK(zero);
  CHECK(identity);
  CHECK(kd::verify_universality(f).max_collision == Rational(1, 2));
}

TEST_CASE("universality") {
  const auto lin = kd::verify_universality(HashFamily::all_linear(2, 2, 1));
  CHECK(lin.max_collision == Rational(1, 2));
  CHECK(lin.universal);
  const auto id = kd::verify_universality(HashFamily::from_table(2, 1, 1, {{0, 1}}));
  CHECK(id.max_collision == 0);
  const auto constant = kd::verify_universality(HashFamily::from_table(2, 2, 1, {{0, 0, 0, 0}, {1, 1, 1, 1}}));
  CHECK(constant.max_collision == 1);
  CHECK_FALSE(constant.universal);
  for (unsigned q : {2u, 3u})
    for (unsigned m = 2; m <= 3; ++m)
      for (unsigned k = 1; k < m; ++k) {
        CHECK(kd::verify_universality(HashFamily::all_linear(q, m, k)).universal);
        CHECK(kd::verify_universality(HashFamily::toeplitz(q, m, k)).universal);
      }
}

TEST_CASE("joint state against direct enumeration") {
  for (unsigned m = 2; m <= 3; ++m)
    for (unsigned k = 1; k < m; ++k)
      for (std::uint64_t s = 0; s < 10; ++s) {
        const auto px = kd::random_distribution({2, m}, s, 7);
        const auto fam = HashFamily::all_linear(2, m, k);
        const auto joint = kd::joint_state(px, fam);
        // Cells are compared as multisets per member since member order is an implementation detail.
        const auto brute = brute_joint_binary(px, m, k);
        std::map<std::vector<Rational>, int> a, b;
        const std::size_t keys = std::size_t{1} << k;
        for (std::size_t g = 0; g < fam.size(); ++g) {
          std::vector<Rational> ra, rb;
          for (std::size_t kap = 0; kap < keys; ++kap) {
            ra.push_back(joint(kap, g));
            rb.push_back(brute[g * keys + kap]);
          }
          ++a[ra];
          ++b[rb];
        }
        CHECK(a == b);
        for (std::size_t g = 0; g < fam.size(); ++g) CHECK(joint.member_marginal(g) * fam.size() == 1);
      }
}

TEST_CASE("joint state examples") {
  const auto u1 = FiniteDistribution::uniform({2, 1});
  const auto j = kd::joint_state(u1, bijections_m1());
  for (const auto& c : j.cells()) CHECK(c == Rational(1, 4));
  CHECK(kd::lhl_distance(u1, bijections_m1()) == 0);
  const auto u3 = FiniteDistribution::uniform({2, 3});
  const auto lin = HashFamily::all_linear(2, 3, 1);
  const auto j3 = kd::joint_state(u3, lin);
  // Seven balanced maps and the zero map: P_K(0) = (7/2 + 1) / 8.
  CHECK(j3.key_marginal(0) == Rational(9, 16));
  CHECK(j3.key_marginal(0) > Rational(1, 2));
}

TEST_CASE("lhl distance for the uniform 3-bit source") {
  const auto u3 = FiniteDistribution::uniform({2, 3});
  const auto lin = HashFamily::all_linear(2, 3, 1);
  const auto brute = brute_joint_binary(u3, 3, 1);
  Rational l1 = 0;
  for (const auto& c : brute) l1 += abs(c - Rational(1, 16));
  CHECK(kd::lhl_distance(u3, lin) == l1 / 2);
  CHECK(kd::lhl_distance(u3, lin) == Rational(1, 16));
  CHECK(kd::lhl_distance(u3, lin).get_d() <= kd::lhl_bound(3, 1, {2, 1}));
}

TEST_CASE("point-mass source fails the precondition") {
  const auto pm = FiniteDistribution::point_mass({2, 2}, 1);
  const auto rep = kd::evaluate_lhl(pm, HashFamily::all_linear(2, 2, 1), 1.0);
  CHECK_FALSE(rep.precondition_met);
  CHECK(rep.distance > 0);
  CHECK(rep.h_min == 0.0);
}

TEST_CASE("collision probability") {
  const auto u1 = FiniteDistribution::uniform({2, 1});
  const auto c1 = kd::collision_probability(u1, bijections_m1());
  CHECK(c1.value == Rational(1, 4));
  const auto u2 = FiniteDistribution::uniform({2, 2});
  const auto lin = HashFamily::all_linear(2, 2, 1);
  const auto c2 = kd::collision_probability(u2, lin);
  Rational direct = 0;
  for (const auto& c : brute_joint_binary(u2, 2, 1)) direct += c * c;
  CHECK(c2.value == direct);
  CHECK(c2.value <= Rational(1, 8) + Rational(1, 16));
  CHECK(c2.within_bound);
  const auto constant = HashFamily::from_table(2, 2, 1, {{0, 0, 0, 0}, {1, 1, 1, 1}});
  const auto c3 = kd::collision_probability(u2, constant);
  CHECK_FALSE(c3.bound_checked);
  CHECK(c3.value == Rational(1, 2));
}

TEST_CASE("lhl bound and key length") {
  CHECK(kd::lhl_bound(2.0, 2, {2, 1}) == doctest::Approx(1.0));
  CHECK(kd::lhl_bound(3.0, 1, {2, 1}) == doctest::Approx(0.5));
  CHECK(kd::lhl_bound(4.0, 2, {3, 1}) == doctest::Approx(1.0 / 3.0));
  using kd::KeyLengthMode;
  CHECK(kd::max_key_length(3.7, 1.0, {2, 1}, KeyLengthMode::inverted).value == 3);
  CHECK(kd::max_key_length(3.7, 1.0, {2, 1}, KeyLengthMode::literal).value == 3);
  CHECK(kd::max_key_length(3.0, 0.5, {2, 1}, KeyLengthMode::inverted).value == 1);
  CHECK(kd::max_key_length(3.0, 0.5, {2, 1}, KeyLengthMode::literal).value == 5);
  // The inverted length reproduces the requested distance.
  CHECK(kd::lhl_bound(3.0, 1, {2, 1}) == doctest::Approx(0.5));
  const auto clamped = kd::max_key_length(1.0, 0.01, {2, 1});
  CHECK(clamped.value == 0);
  CHECK(clamped.warning.has_value());
  CHECK_THROWS_AS(kd::max_key_length(1.0, 0.0, {2, 1}), kd::DomainError);
}

TEST_CASE("lhl proof chain holds on random sources") {
  for (unsigned q : {2u, 3u})
    for (unsigned m = 2; m <= 3; ++m)
      for (unsigned k = 1; k < m; ++k)
        for (std::uint64_t s = 0; s < 20; ++s) {
          const auto px = kd::random_distribution({q, m}, 1000 * q + 100 * m + s, 1 + s % 9);
          for (const auto& fam : {HashFamily::all_linear(q, m, k), HashFamily::toeplitz(q, m, k)}) {
            const auto r = kd::evaluate_lhl(px, fam);
            CHECK(r.precondition_met);
            CHECK(r.satisfied);
            CHECK(r.chain_holds);
            CHECK(r.cauchy_schwarz_holds);
            CHECK(r.collision_report.within_bound);
            CHECK(r.distance.get_d() <= r.bound * (1 + 1e-12));
          }
        }
}

TEST_CASE("non-integer h_plus below h_min") {
  const auto px = kd::random_distribution({2, 3}, 77, 3);
  const auto r = kd::evaluate_lhl(px, HashFamily::all_linear(2, 3, 1), 0.9 * kd::evaluate_lhl(px, HashFamily::all_linear(2, 3, 1)).h_min);
  CHECK(r.precondition_met);
  CHECK(r.satisfied);
}
