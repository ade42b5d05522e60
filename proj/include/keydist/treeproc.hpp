#pragma once

#include "keydist/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

namespace kd {

inline constexpr unsigned kMaxEta = 16;

/// f_eta = (eta/2)! 2^(eta/2).
std::uint64_t grid_scale(unsigned eta);

/// The grid {t / f_eta : 0 <= t <= f_eta}. Points are produced on demand;
/// points() materializes them and is capped at 2^20 + 1 entries.
class TimeGrid {
 public:
  explicit TimeGrid(unsigned eta);

  unsigned eta() const { return eta_; }
  std::uint64_t scale() const { return scale_; }
  std::size_t size() const { return static_cast<std::size_t>(scale_) + 1; }
  Rational point(std::uint64_t i) const;
  double time(std::uint64_t i) const { return static_cast<double>(i) / static_cast<double>(scale_); }
  std::vector<Rational> points() const;

 private:
  unsigned eta_;
  std::uint64_t scale_;
};

TimeGrid grid(unsigned eta);

/// True when every point of grid(coarse) is a point of grid(fine), checked
/// on the exact rational points.
bool grids_nest(unsigned coarse, unsigned fine);

enum class TreeMode { standard, literal };

/// One path on grid(eta) with values W(t) in R^d, row-major [point][coord].
struct PathEnsemble {
  std::size_t d = 1;
  unsigned eta = 0;
  std::uint64_t seed = 0;
  TreeMode mode = TreeMode::standard;
  /// Set for the literal mode, whose refinement is not a Brownian construction.
  bool nonstandard = false;
  std::vector<double> values;

  std::size_t points() const { return values.size() / d; }
  double at(std::size_t point, std::size_t coord) const { return values[point * d + coord]; }
};

/// Refines level by level from W(0) = 0, W(1) ~ N(0, I_d). The points added at
/// level eta + 2 are drawn from a stream derived from (seed, eta + 2), so a
/// path simulated to a deeper level agrees with a shallower one on the
/// shallower grid.
///
/// standard: Brownian bridge between the nearest known neighbours l < t < r,
///   W(t) = W(l) + (t-l)/(r-l) (W(r) - W(l)) + sqrt((t-l)(r-t)/(r-l)) Z,
///   which is (W(l) + W(r))/2 + sqrt(r-l)/2 Z at a midpoint.
/// literal: W(t) = (1/eta!) (W(l) + W(r)) k + Z / f_eta with l, r the
///   enclosing points of the previous level and k the 1-based index of t
///   among the points new at level eta.
PathEnsemble simulate(std::size_t d, unsigned eta_max, std::uint64_t seed, TreeMode mode = TreeMode::standard);

/// Replicated paths stored on a coarse statistics grid only.
struct ReplicationSet {
  std::size_t d = 1;
  unsigned eta = 0;
  unsigned stats_eta = 0;
  std::size_t reps = 0;
  std::vector<double> times;
  /// [rep][point][coord].
  std::vector<double> values;

  double at(std::size_t rep, std::size_t point, std::size_t coord) const {
    return values[(rep * times.size() + point) * d + coord];
  }
};

/// Replication r uses seed mix_seed(seed, r). Replications run in parallel.
ReplicationSet simulate_replications(std::size_t d, unsigned eta, std::size_t reps, std::uint64_t seed,
                                     TreeMode mode = TreeMode::standard, unsigned stats_eta = 4);

struct IncrementStat {
  std::size_t index = 0;
  std::size_t coord = 0;
  double length = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

struct CorrelationStat {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t coord = 0;
  double corr = 0.0;
  bool flagged = false;
};

struct IncrementReport {
  std::size_t reps = 0;
  /// 4 / sqrt(N).
  double threshold = 0.0;
  std::vector<IncrementStat> increments;
  std::vector<CorrelationStat> correlations;
  double max_abs_corr = 0.0;
  double max_abs_mean = 0.0;
  /// max |variance / length - 1|.
  double max_variance_ratio_error = 0.0;
  std::size_t flagged = 0;
  /// Var W(1) per coordinate.
  std::vector<double> terminal_variance;
  /// Kolmogorov-Smirnov distance of W(1) to N(0, 1) per coordinate.
  std::vector<double> terminal_ks;
  /// max over grid pairs and coords of |Cov(W(s), W(t)) - min(s, t)|.
  double max_cov_error = 0.0;
};

/// Statistics of the increments between consecutive statistics-grid points.
/// Needs at least 1000 replications.
IncrementReport increment_stats(const ReplicationSet& set);

/// sup_t max_coord |W_{eta+2}(t) - W_eta(t)| for each eta, where W_eta is the
/// piecewise-linear path through the level-eta values. Levels whose
/// refinement lies beyond the path give 0.
std::vector<double> refinement_delta(const PathEnsemble& path, const std::vector<unsigned>& etas);

struct RefinementReport {
  std::vector<unsigned> etas;
  std::vector<double> medians;
  bool decreasing = false;
};

/// Median refinement deltas over `reps` paths simulated to max(etas) + 2.
RefinementReport refinement_medians(std::size_t d, const std::vector<unsigned>& etas, std::size_t reps,
                                    std::uint64_t seed, TreeMode mode = TreeMode::standard);

/// CSV rows "t,W1,...,Wd".
void write_csv(std::ostream& out, const PathEnsemble& path);

namespace serial {
ReplicationSet simulate_replications(std::size_t d, unsigned eta, std::size_t reps, std::uint64_t seed,
                                     TreeMode mode = TreeMode::standard, unsigned stats_eta = 4);
}  // namespace serial

}  // namespace kd
