#include "keydist/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace kd::parallel {

void configure_from_env() {
  const char* raw = std::getenv("KD_THREADS");
  if (raw == nullptr) return;
  try {
    int n = std::stoi(raw);
    if (n > 0) omp_set_num_threads(n);
  } catch (const std::exception&) {
  }
}

int max_threads() { return omp_get_max_threads(); }

unsigned long long mix_seed(unsigned long long seed, unsigned long long stream) {
  unsigned long long z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace kd::parallel
