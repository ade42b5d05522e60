#include "keydist/treeproc.hpp"

#include "keydist/errors.hpp"
#include "keydist/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace kd {

namespace {

void check_eta(unsigned eta) {
  if (eta % 2 != 0) throw ValidationError("grid level eta must be even, got " + std::to_string(eta));
  if (eta > kMaxEta) throw CapExceeded("grid level eta is capped at 16");
}

// Pairwise summation keeps reductions independent of accumulation order.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double pairwise_mean(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size()); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

std::uint64_t grid_scale(unsigned eta) {
  check_eta(eta);
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= eta / 2; ++i) f *= i;
  return f << (eta / 2);
}

TimeGrid::TimeGrid(unsigned eta) : eta_(eta), scale_(grid_scale(eta)) {}

Rational TimeGrid::point(std::uint64_t i) const {
  if (i > scale_) throw ValidationError("grid index out of range");
  Rational r(static_cast<unsigned long>(i), static_cast<unsigned long>(scale_));
  r.canonicalize();
  return r;
}

std::vector<Rational> TimeGrid::points() const {
  if (scale_ > (std::uint64_t{1} << 20)) throw CapExceeded("grid has more than 2^20 + 1 points");
  std::vector<Rational> out;
  out.reserve(size());
  for (std::uint64_t i = 0; i <= scale_; ++i) out.push_back(point(i));
  return out;
}

TimeGrid grid(unsigned eta) { return TimeGrid(eta); }

bool grids_nest(unsigned coarse, unsigned fine) {
  const TimeGrid a(coarse), b(fine);
  const Rational fb(static_cast<unsigned long>(b.scale()));
  for (const auto& p : a.points()) {
    Rational scaled = p * fb;
    scaled.canonicalize();
    if (scaled.get_den() != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

// Fills `values` (indexed on grid(eta_max)) level by level.
void refine(std::size_t d, unsigned eta_max, std::uint64_t seed, TreeMode mode, std::vector<double>& values) {
  const std::uint64_t fmax = grid_scale(eta_max);
  values.assign((fmax + 1) * d, 0.0);
  std::normal_distribution<double> n01;
  {
    std::mt19937_64 rng(parallel::mix_seed(seed, 0));
    for (std::size_t c = 0; c < d; ++c) values[fmax * d + c] = n01(rng);
  }
  std::vector<double> z(d);
  for (unsigned eta = 2; eta <= eta_max; eta += 2) {
    const std::uint64_t coarse_stride = fmax / grid_scale(eta - 2);
    const std::uint64_t stride = fmax / grid_scale(eta);
    const double f_eta = static_cast<double>(grid_scale(eta));
    const double inv_fact = 1.0 / factorial(eta);
    std::mt19937_64 rng(parallel::mix_seed(seed, eta));
    std::uint64_t ordinal = 0;
    for (std::uint64_t left = 0; left < fmax; left += coarse_stride) {
      const std::uint64_t right = left + coarse_stride;
      std::uint64_t known = left;
      for (std::uint64_t t = left + stride; t < right; t += stride) {
        ++ordinal;
        for (auto& v : z) v = n01(rng);
        if (mode == TreeMode::standard) {
          const double tl = static_cast<double>(t - known), rt = static_cast<double>(right - t);
          const double span = static_cast<double>(right - known);
          const double sd = std::sqrt(tl * rt / span / static_cast<double>(fmax));
          for (std::size_t c = 0; c < d; ++c) {
            const double wl = values[known * d + c], wr = values[right * d + c];
            values[t * d + c] = wl + (tl / span) * (wr - wl) + sd * z[c];
          }
        } else {
          const double k = static_cast<double>(ordinal);
          for (std::size_t c = 0; c < d; ++c) {
            const double wl = values[left * d + c], wr = values[right * d + c];
            values[t * d + c] = inv_fact * (wl + wr) * k + z[c] / f_eta;
          }
        }
        known = t;
      }
    }
  }
}

}  // namespace

PathEnsemble simulate(std::size_t d, unsigned eta_max, std::uint64_t seed, TreeMode mode) {
  if (d == 0) throw ValidationError("path dimension must be >= 1");
  check_eta(eta_max);
  if (grid_scale(eta_max) > (std::uint64_t{1} << 22)) throw CapExceeded("path grid exceeds 2^22 points");
  PathEnsemble p;
  p.d = d;
  p.eta = eta_max;
  p.seed = seed;
  p.mode = mode;
  p.nonstandard = mode == TreeMode::literal;
  refine(d, eta_max, seed, mode, p.values);
  return p;
}

namespace {

void check_replication_args(std::size_t d, unsigned eta, unsigned stats_eta) {
  if (d == 0) throw ValidationError("path dimension must be >= 1");
  check_eta(eta);
  check_eta(stats_eta);
  if (stats_eta > eta) throw ValidationError("statistics grid must be no finer than the simulation grid");
}

ReplicationSet empty_set(std::size_t d, unsigned eta, std::size_t reps, unsigned stats_eta) {
  ReplicationSet s;
  s.d = d;
  s.eta = eta;
  s.stats_eta = stats_eta;
  s.reps = reps;
  const TimeGrid g(stats_eta);
  for (std::uint64_t i = 0; i < g.size(); ++i) s.times.push_back(g.time(i));
  s.values.assign(reps * s.times.size() * d, 0.0);
  return s;
}

void one_replication(ReplicationSet& s, std::size_t r, std::uint64_t seed, TreeMode mode) {
  std::vector<double> values;
  refine(s.d, s.eta, parallel::mix_seed(seed, r), mode, values);
  const std::uint64_t stride = grid_scale(s.eta) / grid_scale(s.stats_eta);
  for (std::size_t p = 0; p < s.times.size(); ++p)
    for (std::size_t c = 0; c < s.d; ++c) s.values[(r * s.times.size() + p) * s.d + c] = values[p * stride * s.d + c];
}

}  // namespace

ReplicationSet serial::simulate_replications(std::size_t d, unsigned eta, std::size_t reps, std::uint64_t seed,
                                             TreeMode mode, unsigned stats_eta) {
  check_replication_args(d, eta, stats_eta);
  ReplicationSet s = empty_set(d, eta, reps, stats_eta);
  for (std::size_t r = 0; r < reps; ++r) one_replication(s, r, seed, mode);
  return s;
}

ReplicationSet simulate_replications(std::size_t d, unsigned eta, std::size_t reps, std::uint64_t seed, TreeMode mode,
                                     unsigned stats_eta) {
  check_replication_args(d, eta, stats_eta);
  ReplicationSet s = empty_set(d, eta, reps, stats_eta);
  const auto n = static_cast<std::ptrdiff_t>(reps);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) one_replication(s, static_cast<std::size_t>(r), seed, mode);
  return s;
}

// ---------------------------------------------------------------------------
// Statistics

IncrementReport increment_stats(const ReplicationSet& set) {
  if (set.reps < 1000) throw ValidationError("increment statistics need at least 1000 replications");
  const std::size_t n = set.reps, pts = set.times.size(), d = set.d;
  const std::size_t incs = pts - 1;
  IncrementReport r;
  r.reps = n;
  r.threshold = 4.0 / std::sqrt(static_cast<double>(n));

  // Centered increments per (increment, coord), each a column over replications.
  std::vector<std::vector<double>> col(incs * d, std::vector<double>(n));
  std::vector<double> sd(incs * d);
  for (std::size_t i = 0; i < incs; ++i)
    for (std::size_t c = 0; c < d; ++c) {
      auto& v = col[i * d + c];
      for (std::size_t k = 0; k < n; ++k) v[k] = set.at(k, i + 1, c) - set.at(k, i, c);
      IncrementStat st;
      st.index = i;
      st.coord = c;
      st.length = set.times[i + 1] - set.times[i];
      st.mean = pairwise_mean(v);
      for (auto& x : v) x -= st.mean;
      std::vector<double> sq(n);
      for (std::size_t k = 0; k < n; ++k) sq[k] = v[k] * v[k];
      st.variance = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
      sd[i * d + c] = std::sqrt(st.variance);
      r.max_abs_mean = std::max(r.max_abs_mean, std::abs(st.mean));
      r.max_variance_ratio_error = std::max(r.max_variance_ratio_error, std::abs(st.variance / st.length - 1.0));
      r.increments.push_back(st);
    }

  std::vector<double> prod(n);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t a = 0; a < incs; ++a)
      for (std::size_t b = a + 1; b < incs; ++b) {
        const auto& va = col[a * d + c];
        const auto& vb = col[b * d + c];
        for (std::size_t k = 0; k < n; ++k) prod[k] = va[k] * vb[k];
        const double cov = pairwise_sum(prod.data(), n) / static_cast<double>(n - 1);
        CorrelationStat cs;
        cs.a = a;
        cs.b = b;
        cs.coord = c;
        cs.corr = cov / (sd[a * d + c] * sd[b * d + c]);
        cs.flagged = std::abs(cs.corr) > r.threshold;
        r.max_abs_corr = std::max(r.max_abs_corr, std::abs(cs.corr));
        if (cs.flagged) ++r.flagged;
        r.correlations.push_back(cs);
      }

  std::vector<double> w(n);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t k = 0; k < n; ++k) w[k] = set.at(k, pts - 1, c);
    const double m = pairwise_mean(w);
    std::vector<double> sq(n);
    for (std::size_t k = 0; k < n; ++k) sq[k] = (w[k] - m) * (w[k] - m);
    r.terminal_variance.push_back(pairwise_sum(sq.data(), n) / static_cast<double>(n - 1));
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double cdf = normal_cdf(sorted[k]);
      ks = std::max({ks, std::abs(static_cast<double>(k + 1) / static_cast<double>(n) - cdf),
                     std::abs(cdf - static_cast<double>(k) / static_cast<double>(n))});
    }
    r.terminal_ks.push_back(ks);
  }

  // Cov(W(s), W(t)) against min(s, t); W(0) = 0 so raw second moments are used.
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t a = 1; a < pts; ++a)
      for (std::size_t b = a; b < pts; ++b) {
        for (std::size_t k = 0; k < n; ++k) prod[k] = set.at(k, a, c) * set.at(k, b, c);
        const double cov = pairwise_sum(prod.data(), n) / static_cast<double>(n);
        r.max_cov_error = std::max(r.max_cov_error, std::abs(cov - std::min(set.times[a], set.times[b])));
      }
  return r;
}

std::vector<double> refinement_delta(const PathEnsemble& path, const std::vector<unsigned>& etas) {
  std::vector<double> out;
  const std::uint64_t fmax = grid_scale(path.eta);
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const unsigned eta = etas[i];
    check_eta(eta);
    if (i > 0 && eta <= etas[i - 1]) throw ValidationError("refinement levels must increase");
    if (eta + 2 > path.eta) {
      out.push_back(0.0);
      continue;
    }
    const std::uint64_t coarse = fmax / grid_scale(eta);
    const std::uint64_t fine = fmax / grid_scale(eta + 2);
    double sup = 0.0;
    for (std::uint64_t left = 0; left < fmax; left += coarse) {
      const std::uint64_t right = left + coarse;
      for (std::uint64_t t = left + fine; t < right; t += fine) {
        const double lambda = static_cast<double>(t - left) / static_cast<double>(coarse);
        for (std::size_t c = 0; c < path.d; ++c) {
          const double interp = (1.0 - lambda) * path.at(left, c) + lambda * path.at(right, c);
          sup = std::max(sup, std::abs(path.at(t, c) - interp));
        }
      }
    }
    out.push_back(sup);
  }
  return out;
}

RefinementReport refinement_medians(std::size_t d, const std::vector<unsigned>& etas, std::size_t reps,
                                    std::uint64_t seed, TreeMode mode) {
  if (etas.empty()) throw ValidationError("refinement needs at least one level");
  if (reps == 0) throw ValidationError("refinement needs at least one replication");
  const unsigned top = etas.back() + 2;
  std::vector<std::vector<double>> deltas(reps);
  const auto n = static_cast<std::ptrdiff_t>(reps);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto path = simulate(d, top, parallel::mix_seed(seed, static_cast<std::uint64_t>(r)), mode);
    deltas[static_cast<std::size_t>(r)] = refinement_delta(path, etas);
  }
  RefinementReport rep;
  rep.etas = etas;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    std::vector<double> v;
    for (const auto& row : deltas) v.push_back(row[i]);
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    rep.medians.push_back(m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]));
  }
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.medians.size(); ++i)
    if (!(rep.medians[i] < rep.medians[i - 1])) rep.decreasing = false;
  return rep;
}

void write_csv(std::ostream& out, const PathEnsemble& path) {
  out << "t";
  for (std::size_t c = 0; c < path.d; ++c) out << ",W" << (c + 1);
  out << "\n";
  const TimeGrid g(path.eta);
  out.precision(17);
  for (std::size_t p = 0; p < path.points(); ++p) {
    out << g.time(p);
    for (std::size_t c = 0; c < path.d; ++c) out << "," << path.at(p, c);
    out << "\n";
  }
}

}  // namespace kd
