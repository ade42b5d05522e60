// Runs the ten acceptance checks and prints one line per criterion.
#include "keydist/parallel.hpp"
#include "keydist/verify.hpp"

#include <cstdio>

int main(int argc, char** argv) {
  kd::parallel::configure_from_env();
  const std::string filter = argc > 1 ? argv[1] : "";
  const auto summary = kd::verify::run(filter, kd::verify::Deadline::unlimited());
  for (const auto& r : summary.results) {
    std::printf("criterion %2d  %-20s %s  %7.2fs / %.0fs\n", r.criterion, r.name.c_str(), r.passed ? "PASS" : "FAIL",
                r.seconds, r.limit_seconds);
    for (const auto& f : r.failures) std::printf("    %s\n", f.c_str());
  }
  return summary.all_passed() ? 0 : 1;
}
