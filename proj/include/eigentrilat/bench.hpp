#ifndef EIGENTRILAT_BENCH_HPP
#define EIGENTRILAT_BENCH_HPP

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "eigentrilat/types.hpp"

namespace eigentrilat {

// Synthetic scene: sender and receiver coordinates drawn i.i.d. standard
// normal, optional squashing of the sender x-coordinates toward a
// degenerate (coplanar) configuration.
struct SynthConfig {
  int dim = 3;
  int sender_count = 10;
  double noise_sigma = 0.0;  // additive gaussian noise on distances
  std::uint64_t seed = 0;
  std::optional<double> degenerate_scale;  // in [0, 1], multiplies sender
                                           // x-coordinates
};

constexpr double kSuccessThreshold = 1e-6;

struct TrialResult {
  double error = std::numeric_limits<double>::infinity();
  bool success = false;  // error < kSuccessThreshold
  double runtime_seconds = 0.0;
};

enum class BenchSolver { Proposed, Simple, Linear, Ml };

constexpr BenchSolver kAllBenchSolvers[] = {
    BenchSolver::Proposed, BenchSolver::Simple, BenchSolver::Linear,
    BenchSolver::Ml};

const char* to_string(BenchSolver s);

// Deterministic per seed: same seed, same problem and truth, bit for bit.
// Distances are clamped and the weights follow the 1/(4 d_j^2) rule.
std::pair<TrilaterationProblem, Vec> gen_synthetic(const SynthConfig& cfg);

// Same scene family with the degenerate x-scaling forced on (factor 1
// when unset) and no distance noise regardless of noise_sigma.
std::pair<TrilaterationProblem, Vec> gen_degenerate(const SynthConfig& cfg);

// Distance from the truth to the solution set: best point for Unique and
// Pair, closest sphere point for spherical sets, infinity when the set is
// empty.
double solution_error(const SolutionSet& s, const Vec& truth);

// One solver on one instance. The Ml entry is the local refinement seeded
// at the Proposed output; runtime covers the refinement only.
TrialResult run_trial(BenchSolver solver, const TrilaterationProblem& p,
                      const Vec& truth);

struct NoiseRow {
  double sigma = 0.0;
  BenchSolver solver = BenchSolver::Proposed;
  // Statistics of error / sigma over the trials (raw error when sigma == 0).
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct NoiseReport {
  int dim = 3;
  int m = 10;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<NoiseRow> rows;  // sigma-major, solver order as in
                               // kAllBenchSolvers
};

struct DegenRow {
  double scale = 1.0;
  BenchSolver solver = BenchSolver::Proposed;
  double median_error = 0.0;
  double success_rate = 0.0;
};

struct DegenReport {
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<DegenRow> rows;
};

struct TimingRow {
  int m = 0;
  BenchSolver solver = BenchSolver::Proposed;
  double median_seconds = 0.0;
};

struct TimingReport {
  int reps = 0;
  std::uint64_t seed = 0;
  std::vector<TimingRow> rows;
};

// Error statistics over `trials` random instances per sigma, for every
// solver. Per-trial seeds come from a counter scheme keyed on (seed,
// sigma index, trial index), so results are independent of the number of
// worker threads.
NoiseReport run_noise_experiment(const std::vector<double>& sigmas, int trials,
                                 std::uint64_t seed, int dim = 3, int m = 10);

// Median error and success rate per scaling factor on the noiseless
// degenerate family (3-D, 6 senders).
DegenReport run_degen_experiment(const std::vector<double>& scales, int trials,
                                 std::uint64_t seed);

// Median single-solve wall time per sender count on noiseless 3-D
// instances; generation excluded from the timed region. reps should be at
// least 100 for stable medians.
TimingReport run_timing(const std::vector<int>& sender_counts, int reps,
                        std::uint64_t seed);

void write_noise_csv(std::ostream& os, const NoiseReport& r);
void write_degen_csv(std::ostream& os, const DegenReport& r);
void write_timing_csv(std::ostream& os, const TimingReport& r);

// Whitespace-separated blocks, one row per x value, one column per
// solver, ready for `plot ... using`.
void write_noise_gnuplot(std::ostream& os, const NoiseReport& r);
void write_degen_gnuplot(std::ostream& os, const DegenReport& r);

// Worker count for trial fan-out: EIGENTRILAT_THREADS when set (minimum
// 1), hardware concurrency otherwise.
int bench_thread_cap();

}  // namespace eigentrilat

#endif
