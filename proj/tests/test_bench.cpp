#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "eigentrilat/bench.hpp"
#include "eigentrilat/rng.hpp"
#include "eigentrilat/solver.hpp"

using namespace eigentrilat;

namespace {

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

struct ScopedEnv {
  std::string name;
  std::string old;
  bool had = false;
  ScopedEnv(const char* n, const char* value) : name(n) {
    if (const char* prev = std::getenv(n)) {
      had = true;
      old = prev;
    }
    setenv(n, value, 1);
  }
  ~ScopedEnv() {
    if (had) {
      setenv(name.c_str(), old.c_str(), 1);
    } else {
      unsetenv(name.c_str());
    }
  }
};

}  // namespace

TEST_CASE("splitmix64 uniform and normal statistics") {
  SplitMix64 rng(42);
  const int n = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);

  sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::sqrt(var) > 0.97);
  CHECK(std::sqrt(var) < 1.03);
}

TEST_CASE("fork_rng is a pure function of its triple") {
  SplitMix64 a = fork_rng(7, 3, 11);
  SplitMix64 b = fork_rng(7, 3, 11);
  for (int i = 0; i < 16; ++i) CHECK(a() == b());
  SplitMix64 c = fork_rng(7, 3, 12);
  SplitMix64 d = fork_rng(7, 4, 11);
  SplitMix64 a2 = fork_rng(7, 3, 11);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 16; ++i) {
    const auto ref = a2();
    differs_c = differs_c || c() != ref;
    differs_d = differs_d || d() != ref;
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("synthetic generation is deterministic per seed") {
  SynthConfig cfg;
  cfg.dim = 3;
  cfg.sender_count = 7;
  cfg.noise_sigma = 0.05;
  cfg.seed = 99;
  const auto [p1, t1] = gen_synthetic(cfg);
  const auto [p2, t2] = gen_synthetic(cfg);
  CHECK((p1.senders - p2.senders).cwiseAbs().maxCoeff() == 0.0);
  CHECK((p1.distances - p2.distances).cwiseAbs().maxCoeff() == 0.0);
  CHECK((t1 - t2).norm() == 0.0);

  cfg.seed = 100;
  const auto [p3, t3] = gen_synthetic(cfg);
  CHECK((p1.senders - p3.senders).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("synthetic weights follow the quarter inverse square rule") {
  SynthConfig cfg;
  cfg.seed = 5;
  const auto [p, truth] = gen_synthetic(cfg);
  REQUIRE(p.weights.diagonal());
  for (Eigen::Index j = 0; j < p.sender_count(); ++j) {
    CHECK(p.weights.diag()[j] ==
          doctest::Approx(1.0 / (4.0 * p.distances[j] * p.distances[j])));
  }
  // Noiseless: distances match the truth exactly.
  for (Eigen::Index j = 0; j < p.sender_count(); ++j) {
    CHECK(p.distances[j] ==
          doctest::Approx((truth - p.senders.col(j)).norm()));
  }
}

TEST_CASE("degenerate generation scales the first coordinate") {
  SynthConfig cfg;
  cfg.dim = 3;
  cfg.sender_count = 6;
  cfg.seed = 31;
  cfg.degenerate_scale = 0.0;
  const auto [p, truth] = gen_degenerate(cfg);
  CHECK(p.senders.row(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.senders.row(1).cwiseAbs().maxCoeff() > 0.0);

  // Unset scale behaves like the plain noiseless generator.
  SynthConfig plain = cfg;
  plain.degenerate_scale.reset();
  const auto [pd, td] = gen_degenerate(plain);
  SynthConfig same = cfg;
  same.degenerate_scale.reset();
  same.noise_sigma = 0.0;
  const auto [ps, ts] = gen_synthetic(same);
  CHECK((pd.senders - ps.senders).cwiseAbs().maxCoeff() == 0.0);
  CHECK((pd.distances - ps.distances).cwiseAbs().maxCoeff() == 0.0);

  // Noise is forced off even when configured.
  SynthConfig noisy = cfg;
  noisy.noise_sigma = 0.5;
  const auto [pn, tn] = gen_degenerate(noisy);
  CHECK((pn.distances - p.distances).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solution_error distances to each set shape") {
  const Vec truth{{0.9, 0.0}};
  SolutionSet unique;
  unique.kind = SolutionKind::Unique;
  unique.points = {Vec{{0.9, 0.0}}};
  CHECK(solution_error(unique, truth) == doctest::Approx(0.0));

  SolutionSet pair;
  pair.kind = SolutionKind::Pair;
  pair.points = {Vec{{-0.9, 0.0}}, Vec{{0.9, 0.4}}};
  CHECK(solution_error(pair, truth) == doctest::Approx(0.4));

  SolutionSet sphere;
  sphere.kind = SolutionKind::Sphere;
  sphere.sphere = SolutionSphere{Vec{{0.0, 0.0}}, 0.85, Mat::Identity(2, 2)};
  CHECK(solution_error(sphere, truth) ==
        doctest::Approx(0.05).epsilon(1e-9));

  SolutionSet empty;
  CHECK(std::isinf(solution_error(empty, truth)));
}

TEST_CASE("run_trial solves noiseless instances") {
  SynthConfig cfg;
  cfg.seed = 12;
  const auto [p, truth] = gen_synthetic(cfg);
  for (BenchSolver s : kAllBenchSolvers) {
    const TrialResult r = run_trial(s, p, truth);
    CHECK(r.success);
    CHECK(r.error < 1e-6);
    CHECK(r.runtime_seconds >= 0.0);
  }
}

TEST_CASE("run_trial reports failures as infinite error") {
  // Coplanar senders break the linear baseline; the trial must absorb
  // the throw.
  SynthConfig cfg;
  cfg.dim = 3;
  cfg.sender_count = 6;
  cfg.seed = 8;
  cfg.degenerate_scale = 0.0;
  const auto [p, truth] = gen_degenerate(cfg);
  const TrialResult lin = run_trial(BenchSolver::Linear, p, truth);
  CHECK_FALSE(lin.success);
  CHECK(std::isinf(lin.error));
  const TrialResult prop = run_trial(BenchSolver::Proposed, p, truth);
  CHECK(prop.success);
}

TEST_CASE("noise experiment layout and determinism") {
  const std::vector<double> sigmas{0.0, 0.01};
  const NoiseReport a = run_noise_experiment(sigmas, 8, 17, 3, 8);
  REQUIRE(a.rows.size() == 8);  // 2 sigmas x 4 solvers
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const NoiseRow& row = a.rows[i];
    CHECK(row.sigma == sigmas[i / 4]);
    CHECK(row.solver == kAllBenchSolvers[i % 4]);
    CHECK(row.q1 <= row.median);
    CHECK(row.median <= row.q3);
  }
  // Noiseless proposed errors are tiny and reported raw.
  CHECK(a.rows[0].median < 1e-8);
  // Normalized errors at sigma = 0.01 are order one, not order sigma.
  CHECK(a.rows[4].median > 1e-3);
  CHECK(a.rows[4].median < 1e3);

  const NoiseReport b = run_noise_experiment(sigmas, 8, 17, 3, 8);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].mean == b.rows[i].mean);
    CHECK(a.rows[i].median == b.rows[i].median);
  }
}

TEST_CASE("thread fan-out does not change results") {
  const std::vector<double> sigmas{0.01};
  NoiseReport serial;
  {
    ScopedEnv env("EIGENTRILAT_THREADS", "1");
    CHECK(bench_thread_cap() == 1);
    serial = run_noise_experiment(sigmas, 12, 23, 3, 8);
  }
  NoiseReport parallel;
  {
    ScopedEnv env("EIGENTRILAT_THREADS", "4");
    CHECK(bench_thread_cap() == 4);
    parallel = run_noise_experiment(sigmas, 12, 23, 3, 8);
  }
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].mean == parallel.rows[i].mean);
    CHECK(serial.rows[i].median == parallel.rows[i].median);
    CHECK(serial.rows[i].q1 == parallel.rows[i].q1);
    CHECK(serial.rows[i].q3 == parallel.rows[i].q3);
  }
}

TEST_CASE("thread cap parses the environment") {
  {
    ScopedEnv env("EIGENTRILAT_THREADS", "3");
    CHECK(bench_thread_cap() == 3);
  }
  {
    ScopedEnv env("EIGENTRILAT_THREADS", "99999");
    CHECK(bench_thread_cap() == 1024);
  }
  {
    ScopedEnv env("EIGENTRILAT_THREADS", "0");
    CHECK(bench_thread_cap() >= 1);  // invalid, falls back to hardware
  }
  {
    ScopedEnv env("EIGENTRILAT_THREADS", "abc");
    CHECK(bench_thread_cap() >= 1);
  }
}

TEST_CASE("degenerate experiment reports per scale") {
  const std::vector<double> scales{1.0, 1e-8};
  const DegenReport rep = run_degen_experiment(scales, 6, 29);
  REQUIRE(rep.rows.size() == 8);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].scale == scales[i / 4]);
    CHECK(rep.rows[i].success_rate >= 0.0);
    CHECK(rep.rows[i].success_rate <= 1.0);
  }
  // The eigenvalue solver keeps working at extreme flattening.
  CHECK(rep.rows[4].solver == BenchSolver::Proposed);
  CHECK(rep.rows[4].success_rate >= 0.5);
  CHECK(rep.rows[4].median_error < 1e-6);
}

TEST_CASE("timing reports medians per sender count") {
  const TimingReport rep = run_timing({4, 6}, 5, 3);
  REQUIRE(rep.rows.size() == 8);
  CHECK(rep.rows[0].m == 4);
  CHECK(rep.rows[4].m == 6);
  for (const TimingRow& row : rep.rows) {
    CHECK(row.median_seconds >= 0.0);
    CHECK(row.median_seconds < 10.0);
  }
}

TEST_CASE("csv formats are frozen") {
  NoiseReport nr;
  nr.rows.push_back({0.01, BenchSolver::Proposed, 0.5, 0.25, 0.125, 0.75});
  std::ostringstream noise;
  write_noise_csv(noise, nr);
  CHECK(noise.str() ==
        "sigma,solver,mean,median,q1,q3\n"
        "0.01,proposed,0.5,0.25,0.125,0.75\n");

  DegenReport dr;
  dr.rows.push_back({1e-4, BenchSolver::Simple, 2.0, 0.875});
  std::ostringstream degen;
  write_degen_csv(degen, dr);
  // Shortest round-trip form: 1e-4 renders scientific.
  CHECK(degen.str() ==
        "scale,solver,median_error,success_rate\n"
        "1e-04,simple,2,0.875\n");

  TimingReport tr;
  tr.rows.push_back({10, BenchSolver::Ml, 0.5});
  std::ostringstream timing;
  write_timing_csv(timing, tr);
  CHECK(timing.str() ==
        "m,solver,median_seconds\n"
        "10,ml,0.5\n");
}

TEST_CASE("gnuplot blocks carry one row per x value") {
  const NoiseReport nr = run_noise_experiment({0.0, 0.1}, 4, 2, 3, 8);
  std::ostringstream noise;
  write_noise_gnuplot(noise, nr);
  CHECK(count_lines(noise.str()) == 3);  // header + 2 sigma rows
  CHECK(noise.str().rfind("# sigma", 0) == 0);

  const DegenReport dr = run_degen_experiment({1.0, 0.1, 0.01}, 4, 2);
  std::ostringstream degen;
  write_degen_gnuplot(degen, dr);
  CHECK(count_lines(degen.str()) == 4);
  CHECK(degen.str().rfind("# scale", 0) == 0);
}
