#include "keydist/hashing.hpp"
#include "keydist/markov.hpp"
#include "keydist/parallel.hpp"
#include "keydist/quantum.hpp"
#include "keydist/semigroup.hpp"
#include "keydist/treeproc.hpp"

#include <doctest.h>

#include <omp.h>

#include <cstdlib>

// Every OpenMP kernel must reproduce its serial reference bit for bit.

namespace {

struct Threads {
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("seed mixing") {
  CHECK(kd::parallel::mix_seed(0, 0) != kd::parallel::mix_seed(0, 1));
  CHECK(kd::parallel::mix_seed(1, 0) != kd::parallel::mix_seed(0, 1));
  CHECK(kd::parallel::mix_seed(5, 9) == kd::parallel::mix_seed(5, 9));
}

TEST_CASE("KD_THREADS caps the runtime") {
  Threads guard(omp_get_max_threads());
  setenv("KD_THREADS", "3", 1);
  kd::parallel::configure_from_env();
  CHECK(kd::parallel::max_threads() == 3);
  setenv("KD_THREADS", "zero", 1);
  kd::parallel::configure_from_env();
  CHECK(kd::parallel::max_threads() == 3);
  unsetenv("KD_THREADS");
}

TEST_CASE("hashing kernels") {
  Threads t(4);
  for (const auto& fam : {kd::HashFamily::all_linear(2, 3, 2), kd::HashFamily::toeplitz(3, 3, 2)}) {
    const auto par = kd::verify_universality(fam), ser = kd::serial::verify_universality(fam);
    CHECK(par.max_collision == ser.max_collision);
    const auto px = kd::random_distribution(fam.input_alphabet(), 3);
    CHECK(kd::joint_state(px, fam).cells() == kd::serial::joint_state(px, fam).cells());
  }
}

TEST_CASE("cq key state") {
  Threads t(4);
  const auto fam = kd::HashFamily::all_linear(2, 2, 1);
  const auto e = kd::random_commuting_ensemble(4, 3, 8);
  const auto a = kd::cq_key_state(e, fam), b = kd::serial::cq_key_state(e, fam);
  for (std::size_t i = 0; i < a.blocks().size(); ++i) CHECK(a.blocks()[i].matrix() == b.blocks()[i].matrix());
}

TEST_CASE("resolvent matrix") {
  Threads t(4);
  const auto p = kd::random_chain(4, 5);
  CHECK(kd::resolvent_matrix(p) == kd::serial::resolvent_matrix(p));
}

TEST_CASE("semigroup application") {
  Threads t(4);
  const auto spec = kd::random_cov_spec(2, 4);
  const auto f = [](std::span<const double> x) { return std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1]); };
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 9; ++i) pts.push_back({0.25 * i - 1.0, 0.1 * i});
  CHECK(kd::apply(f, 0.6, spec, pts).values == kd::serial::apply(f, 0.6, spec, pts).values);
  kd::ApplyOptions o;
  o.method = kd::ApplyMethod::monte_carlo;
  o.samples = 20000;
  o.seed = 77;
  const auto mc = kd::apply(f, 0.6, spec, pts, o), mcs = kd::serial::apply(f, 0.6, spec, pts, o);
  CHECK(mc.values == mcs.values);
  CHECK(mc.std_errors == mcs.std_errors);
}

TEST_CASE("tree replications") {
  Threads t(4);
  const auto a = kd::simulate_replications(2, 6, 300, 11), b = kd::serial::simulate_replications(2, 6, 300, 11);
  CHECK(a.values == b.values);
  Threads one(1);
  CHECK(kd::simulate_replications(2, 6, 300, 11).values == a.values);
}
