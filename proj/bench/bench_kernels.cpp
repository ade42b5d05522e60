// Serial reference vs OpenMP kernel, same inputs.
#include "keydist/hashing.hpp"
#include "keydist/markov.hpp"
#include "keydist/quantum.hpp"
#include "keydist/semigroup.hpp"
#include "keydist/treeproc.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

void BM_Universality(benchmark::State& st) {
  const auto fam = kd::HashFamily::all_linear(2, 4, 3);
  for (auto _ : st) benchmark::DoNotOptimize(kd::verify_universality(fam));
}
void BM_UniversalitySerial(benchmark::State& st) {
  const auto fam = kd::HashFamily::all_linear(2, 4, 3);
  for (auto _ : st) benchmark::DoNotOptimize(kd::serial::verify_universality(fam));
}

void BM_JointState(benchmark::State& st) {
  const auto fam = kd::HashFamily::all_linear(2, 4, 3);
  const auto px = kd::random_distribution(fam.input_alphabet(), 1);
  for (auto _ : st) benchmark::DoNotOptimize(kd::joint_state(px, fam));
}
void BM_JointStateSerial(benchmark::State& st) {
  const auto fam = kd::HashFamily::all_linear(2, 4, 3);
  const auto px = kd::random_distribution(fam.input_alphabet(), 1);
  for (auto _ : st) benchmark::DoNotOptimize(kd::serial::joint_state(px, fam));
}

void BM_CqKeyState(benchmark::State& st) {
  const auto fam = kd::HashFamily::all_linear(2, 3, 2);
  const auto e = kd::random_commuting_ensemble(8, 4, 2);
  for (auto _ : st) benchmark::DoNotOptimize(kd::cq_key_state(e, fam));
}
void BM_CqKeyStateSerial(benchmark::State& st) {
  const auto fam = kd::HashFamily::all_linear(2, 3, 2);
  const auto e = kd::random_commuting_ensemble(8, 4, 2);
  for (auto _ : st) benchmark::DoNotOptimize(kd::serial::cq_key_state(e, fam));
}

void BM_Resolvent(benchmark::State& st) {
  const auto p = kd::random_chain(5, 3);
  for (auto _ : st) benchmark::DoNotOptimize(kd::resolvent_matrix(p));
}
void BM_ResolventSerial(benchmark::State& st) {
  const auto p = kd::random_chain(5, 3);
  for (auto _ : st) benchmark::DoNotOptimize(kd::serial::resolvent_matrix(p));
}

std::vector<std::vector<double>> query_points() {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 32; ++i) pts.push_back({-2.0 + 0.125 * i, 0.5});
  return pts;
}
double bump(std::span<const double> x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); }

void BM_Apply(benchmark::State& st) {
  const auto spec = kd::random_cov_spec(2, 1);
  const auto pts = query_points();
  for (auto _ : st) benchmark::DoNotOptimize(kd::apply(bump, 0.5, spec, pts));
}
void BM_ApplySerial(benchmark::State& st) {
  const auto spec = kd::random_cov_spec(2, 1);
  const auto pts = query_points();
  for (auto _ : st) benchmark::DoNotOptimize(kd::serial::apply(bump, 0.5, spec, pts));
}

void BM_TreeReplications(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kd::simulate_replications(3, 8, 1000, 0));
}
void BM_TreeReplicationsSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kd::serial::simulate_replications(3, 8, 1000, 0));
}

}  // namespace

BENCHMARK(BM_Universality)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UniversalitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JointState)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JointStateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CqKeyState)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CqKeyStateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Resolvent)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResolventSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Apply)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TreeReplications)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TreeReplicationsSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
