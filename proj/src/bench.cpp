#include "eigentrilat/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <ostream>
#include <thread>

#include "eigentrilat/baselines.hpp"
#include "eigentrilat/rng.hpp"
#include "eigentrilat/solver.hpp"
#include "eigentrilat/weights.hpp"

namespace eigentrilat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest decimal that round-trips, so report files stay exact without
// the trailing-digit noise of a fixed precision.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Type-7 quantile on an ascending-sorted sample.
double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

// Runs body(0..trials-1) across workers. Bodies must write only to their
// own trial's slots.
void parallel_trials(int trials, const std::function<void(int)>& body) {
  const int workers = std::min(bench_thread_cap(), trials);
  if (workers <= 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
        body(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

const char* to_string(BenchSolver s) {
  switch (s) {
    case BenchSolver::Proposed:
      return "proposed";
    case BenchSolver::Simple:
      return "simple";
    case BenchSolver::Linear:
      return "linear";
    case BenchSolver::Ml:
      return "ml";
  }
  return "unknown";
}

std::pair<TrilaterationProblem, Vec> gen_synthetic(const SynthConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const int n = cfg.dim;
  const int m = cfg.sender_count;
  TrilaterationProblem p;
  p.dim = n;
  p.senders.resize(n, m);
  for (int j = 0; j < m; ++j) p.senders.col(j) = rng.normal_vec(n);
  if (cfg.degenerate_scale) p.senders.row(0) *= *cfg.degenerate_scale;
  Vec truth = rng.normal_vec(n);
  p.distances.resize(m);
  for (int j = 0; j < m; ++j) {
    double d = (truth - p.senders.col(j)).norm();
    if (cfg.noise_sigma > 0.0) d += cfg.noise_sigma * rng.normal();
    p.distances[j] = d;
  }
  p.distances = clamp_distances(p.distances);
  p.weights = weights_toa(p.distances, Vec::Ones(m));
  return {std::move(p), std::move(truth)};
}

std::pair<TrilaterationProblem, Vec> gen_degenerate(const SynthConfig& cfg) {
  SynthConfig c = cfg;
  if (!c.degenerate_scale) c.degenerate_scale = 1.0;
  c.noise_sigma = 0.0;
  return gen_synthetic(c);
}

double solution_error(const SolutionSet& s, const Vec& truth) {
  double best = kInf;
  for (const Vec& x : s.points) {
    best = std::min(best, (x - truth).norm());
  }
  if (s.sphere) {
    const SolutionSphere& sp = *s.sphere;
    const Vec w = truth - sp.center;
    const Vec in_plane = sp.normal_space.transpose() * w;
    const double off2 = (w - sp.normal_space * in_plane).squaredNorm();
    const double dr = in_plane.norm() - sp.radius;
    best = std::min(best, std::sqrt(off2 + dr * dr));
  }
  return best;
}

TrialResult run_trial(BenchSolver solver, const TrilaterationProblem& p,
                      const Vec& truth) {
  using clock = std::chrono::steady_clock;
  TrialResult res;
  try {
    const auto t0 = clock::now();
    switch (solver) {
      case BenchSolver::Proposed:
        res.error = solution_error(solve(p), truth);
        break;
      case BenchSolver::Simple:
        res.error = solution_error(solve_simple(p), truth);
        break;
      case BenchSolver::Linear:
        res.error = (solve_linear(p) - truth).norm();
        break;
      case BenchSolver::Ml: {
        const SolutionSet init = solve(p);
        if (init.points.empty()) {
          res.error = kInf;
        } else {
          const auto t1 = clock::now();
          const Vec x = refine_ml(p, init.points[0]);
          res.runtime_seconds =
              std::chrono::duration<double>(clock::now() - t1).count();
          res.error = (x - truth).norm();
        }
        res.success = res.error < kSuccessThreshold;
        return res;
      }
    }
    res.runtime_seconds =
        std::chrono::duration<double>(clock::now() - t0).count();
  } catch (const Error&) {
    res.error = kInf;
  }
  res.success = res.error < kSuccessThreshold;
  return res;
}

NoiseReport run_noise_experiment(const std::vector<double>& sigmas, int trials,
                                 std::uint64_t seed, int dim, int m) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  NoiseReport rep;
  rep.dim = dim;
  rep.m = m;
  rep.trials = trials;
  rep.seed = seed;
  constexpr int ns = std::size(kAllBenchSolvers);
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    const double sigma = sigmas[si];
    std::vector<std::vector<double>> errors(ns,
                                            std::vector<double>(trials, kInf));
    parallel_trials(trials, [&](int t) {
      SynthConfig cfg;
      cfg.dim = dim;
      cfg.sender_count = m;
      cfg.noise_sigma = sigma;
      cfg.seed = fork_rng(seed, si, static_cast<std::uint64_t>(t))();
      const auto [p, truth] = gen_synthetic(cfg);
      for (int s = 0; s < ns; ++s) {
        errors[s][t] = run_trial(kAllBenchSolvers[s], p, truth).error;
      }
    });
    const double denom = sigma > 0.0 ? sigma : 1.0;
    for (int s = 0; s < ns; ++s) {
      std::vector<double> e = errors[s];
      for (double& x : e) x /= denom;
      std::sort(e.begin(), e.end());
      rep.rows.push_back({sigma, kAllBenchSolvers[s], mean_of(e),
                          quantile_sorted(e, 0.5), quantile_sorted(e, 0.25),
                          quantile_sorted(e, 0.75)});
    }
  }
  return rep;
}

DegenReport run_degen_experiment(const std::vector<double>& scales, int trials,
                                 std::uint64_t seed) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  DegenReport rep;
  rep.trials = trials;
  rep.seed = seed;
  constexpr int ns = std::size(kAllBenchSolvers);
  for (std::size_t ki = 0; ki < scales.size(); ++ki) {
    const double scale = scales[ki];
    std::vector<std::vector<double>> errors(ns,
                                            std::vector<double>(trials, kInf));
    parallel_trials(trials, [&](int t) {
      SynthConfig cfg;
      cfg.dim = 3;
      cfg.sender_count = 6;
      cfg.degenerate_scale = scale;
      cfg.seed = fork_rng(seed, ki, static_cast<std::uint64_t>(t))();
      const auto [p, truth] = gen_degenerate(cfg);
      for (int s = 0; s < ns; ++s) {
        errors[s][t] = run_trial(kAllBenchSolvers[s], p, truth).error;
      }
    });
    for (int s = 0; s < ns; ++s) {
      std::vector<double> e = errors[s];
      std::sort(e.begin(), e.end());
      const auto successes = std::count_if(
          e.begin(), e.end(), [](double x) { return x < kSuccessThreshold; });
      rep.rows.push_back({scale, kAllBenchSolvers[s],
                          quantile_sorted(e, 0.5),
                          static_cast<double>(successes) /
                              static_cast<double>(trials)});
    }
  }
  return rep;
}

TimingReport run_timing(const std::vector<int>& sender_counts, int reps,
                        std::uint64_t seed) {
  if (reps < 1) fail(ErrorCode::InvalidArgument, "reps must be >= 1");
  TimingReport rep;
  rep.reps = reps;
  rep.seed = seed;
  for (std::size_t mi = 0; mi < sender_counts.size(); ++mi) {
    const int m = sender_counts[mi];
    std::vector<TrilaterationProblem> problems;
    std::vector<Vec> truths;
    problems.reserve(reps);
    truths.reserve(reps);
    for (int t = 0; t < reps; ++t) {
      SynthConfig cfg;
      cfg.dim = 3;
      cfg.sender_count = m;
      cfg.seed = fork_rng(seed, mi, static_cast<std::uint64_t>(t))();
      auto [p, truth] = gen_synthetic(cfg);
      problems.push_back(std::move(p));
      truths.push_back(std::move(truth));
    }
    for (BenchSolver s : kAllBenchSolvers) {
      std::vector<double> times(reps);
      for (int t = 0; t < reps; ++t) {
        times[t] = run_trial(s, problems[t], truths[t]).runtime_seconds;
      }
      std::sort(times.begin(), times.end());
      rep.rows.push_back({m, s, quantile_sorted(times, 0.5)});
    }
  }
  return rep;
}

void write_noise_csv(std::ostream& os, const NoiseReport& r) {
  os << "sigma,solver,mean,median,q1,q3\n";
  for (const NoiseRow& row : r.rows) {
    os << fmt(row.sigma) << ',' << to_string(row.solver) << ','
       << fmt(row.mean) << ',' << fmt(row.median) << ',' << fmt(row.q1) << ','
       << fmt(row.q3) << '\n';
  }
}

void write_degen_csv(std::ostream& os, const DegenReport& r) {
  os << "scale,solver,median_error,success_rate\n";
  for (const DegenRow& row : r.rows) {
    os << fmt(row.scale) << ',' << to_string(row.solver) << ','
       << fmt(row.median_error) << ',' << fmt(row.success_rate) << '\n';
  }
}

void write_timing_csv(std::ostream& os, const TimingReport& r) {
  os << "m,solver,median_seconds\n";
  for (const TimingRow& row : r.rows) {
    os << row.m << ',' << to_string(row.solver) << ','
       << fmt(row.median_seconds) << '\n';
  }
}

void write_noise_gnuplot(std::ostream& os, const NoiseReport& r) {
  os << "# sigma";
  for (BenchSolver s : kAllBenchSolvers) os << " mean_" << to_string(s);
  os << '\n';
  constexpr int ns = std::size(kAllBenchSolvers);
  for (std::size_t i = 0; i + ns <= r.rows.size(); i += ns) {
    os << fmt(r.rows[i].sigma);
    for (int s = 0; s < ns; ++s) os << ' ' << fmt(r.rows[i + s].mean);
    os << '\n';
  }
}

void write_degen_gnuplot(std::ostream& os, const DegenReport& r) {
  os << "# scale";
  for (BenchSolver s : kAllBenchSolvers) os << " median_" << to_string(s);
  for (BenchSolver s : kAllBenchSolvers) os << " success_" << to_string(s);
  os << '\n';
  constexpr int ns = std::size(kAllBenchSolvers);
  for (std::size_t i = 0; i + ns <= r.rows.size(); i += ns) {
    os << fmt(r.rows[i].scale);
    for (int s = 0; s < ns; ++s) os << ' ' << fmt(r.rows[i + s].median_error);
    for (int s = 0; s < ns; ++s) os << ' ' << fmt(r.rows[i + s].success_rate);
    os << '\n';
  }
}

int bench_thread_cap() {
  if (const char* env = std::getenv("EIGENTRILAT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) {
      return static_cast<int>(std::min<long>(v, 1024));
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace eigentrilat
