#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eigentrilat/baselines.hpp"
#include "eigentrilat/bench.hpp"
#include "eigentrilat/ingest.hpp"
#include "eigentrilat/json_io.hpp"
#include "eigentrilat/solver.hpp"

namespace et = eigentrilat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitIllDefined = 2;

std::string fmt(double v, int digits = 17) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    et::fail(et::ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitInputError;
  }
  out << text;
  return kExitOk;
}

std::vector<double> parse_value_list(const std::string& spec) {
  // Either a comma list or a decade range like 1e0..1e-8.
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const double a = std::stod(spec.substr(0, dots));
    const double b = std::stod(spec.substr(dots + 2));
    const auto decade = [](double v) {
      if (!(v > 0.0)) {
        et::fail(et::ErrorCode::InvalidArgument,
                 "range endpoints must be positive powers of ten");
      }
      const double e = std::log10(v);
      const double r = std::round(e);
      if (std::abs(e - r) > 1e-9) {
        et::fail(et::ErrorCode::InvalidArgument,
                 "range endpoints must be powers of ten, like 1e0..1e-8");
      }
      return static_cast<int>(r);
    };
    const int ea = decade(a);
    const int eb = decade(b);
    std::vector<double> out;
    const int step = eb >= ea ? 1 : -1;
    for (int e = ea;; e += step) {
      out.push_back(std::pow(10.0, e));
      if (e == eb) break;
    }
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) {
    et::fail(et::ErrorCode::InvalidArgument, "empty value list '" + spec + "'");
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  for (double v : parse_value_list(spec)) out.push_back(static_cast<int>(v));
  return out;
}

void parse_known_coords(const std::vector<std::string>& specs,
                        std::vector<int>& coords, et::Vec& values) {
  coords.clear();
  values.resize(static_cast<Eigen::Index>(specs.size()));
  Eigen::Index i = 0;
  for (const std::string& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      et::fail(et::ErrorCode::InvalidArgument,
               "--known-coord expects idx=value, got '" + s + "'");
    }
    coords.push_back(std::stoi(s.substr(0, eq)));
    values[i++] = std::stod(s.substr(eq + 1));
  }
}

// Lifts a reduced-space solution back into the full coordinate space.
et::SolutionSet embed_solution(const et::SolutionSet& s,
                               const et::ReducedProblem& rp) {
  et::SolutionSet out = s;
  for (et::Vec& x : out.points) x = rp.embed(x);
  if (out.sphere) {
    out.sphere->center = rp.embed(out.sphere->center);
    const Eigen::Index full_dim =
        static_cast<Eigen::Index>(rp.free_coords.size() +
                                  rp.known_coords.size());
    et::Mat ns = et::Mat::Zero(full_dim, out.sphere->normal_space.cols());
    for (std::size_t i = 0; i < rp.free_coords.size(); ++i) {
      ns.row(rp.free_coords[i]) = out.sphere->normal_space.row(
          static_cast<Eigen::Index>(i));
    }
    out.sphere->normal_space = ns;
  }
  return out;
}

const char* classification(const et::SolutionSet& s) {
  switch (s.kind) {
    case et::SolutionKind::Unique:
      return "full rank, unique minimizer";
    case et::SolutionKind::Pair:
      return "rank deficiency 1, mirror pair";
    case et::SolutionKind::Sphere:
      return "rank deficiency >= 2, sphere of minimizers";
    case et::SolutionKind::IllDefined:
      return "inconsistent at tolerance, no minimizer reconstructed";
  }
  return "unknown";
}

std::string coords_csv(const et::Vec& x) {
  std::string line;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) line += ',';
    line += fmt(x[i]);
  }
  return line;
}

std::string coords_human(const et::Vec& x) {
  std::string line = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) line += ", ";
    line += fmt(x[i], 12);
  }
  return line + ")";
}

std::string render_solution(const et::SolutionSet& s, const std::string& format,
                            const et::Vec* refined) {
  if (format == "json") {
    et::Json j = et::solution_to_json(s);
    if (refined) {
      et::Json arr = et::Json::array();
      for (Eigen::Index i = 0; i < refined->size(); ++i) {
        arr.push_back((*refined)[i]);
      }
      j["refined_ml"] = arr;
    }
    return j.dump(2) + "\n";
  }
  if (format == "csv") {
    std::string out;
    for (const et::Vec& x : s.points) out += coords_csv(x) + "\n";
    if (s.sphere) out += coords_csv(s.sphere->center) + "\n";
    if (refined) out += coords_csv(*refined) + "\n";
    return out;
  }
  // human
  std::string out;
  out += "lambda_max: " + fmt(s.lambda, 12) + "\n";
  out += "classification: " + std::string(classification(s)) + "\n";
  out += "cost: " + fmt(s.cost, 12) + "\n";
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    out += "point " + std::to_string(i + 1) + ": " +
           coords_human(s.points[i]) + "\n";
  }
  if (s.sphere) {
    out += "sphere center: " + coords_human(s.sphere->center) + "\n";
    out += "sphere radius: " + fmt(s.sphere->radius, 12) + "\n";
  }
  if (refined) out += "refined (ml): " + coords_human(*refined) + "\n";
  return out;
}

struct SolveArgs {
  std::string input;
  std::string output = "-";
  std::string format = "json";
  bool simple = false;
  double rank_tol = 1e-8;
  std::vector<std::string> known_coords;
};

int cmd_solve(const SolveArgs& a) {
  const et::Json j = et::Json::parse(read_file(a.input));
  et::TrilaterationProblem p = et::problem_from_json(j);
  et::SolveOptions opts;
  opts.rank_tol = a.rank_tol;

  std::vector<int> coords;
  et::Vec values;
  parse_known_coords(a.known_coords, coords, values);

  et::SolutionSet sol;
  try {
    if (coords.empty()) {
      sol = a.simple ? et::solve_simple(p, opts) : et::solve(p, opts);
    } else {
      const et::ReducedProblem rp =
          et::reduce_known_coordinates(p, coords, values);
      sol = embed_solution(a.simple ? et::solve_simple(rp.problem, opts)
                                    : et::solve(rp.problem, opts),
                           rp);
    }
  } catch (const et::Error& e) {
    if (e.code() != et::ErrorCode::NearSingular) throw;
    std::cerr << "warning: " << e.what() << "\n";
    sol = et::SolutionSet{};  // ill-defined, nothing reconstructed
  }

  const int rc = emit(render_solution(sol, a.format, nullptr), a.output);
  if (rc != kExitOk) return rc;
  return sol.well_posed() ? kExitOk : kExitIllDefined;
}

struct BenchArgs {
  std::string kind;
  std::string sigmas = "0.001,0.01,0.1";
  std::string scales = "1e0..1e-8";
  std::string ms = "4,10,100";
  int trials = 0;  // 0 means the per-kind default
  std::uint64_t seed = 0;
  std::string output = ".";
};

int cmd_bench(const BenchArgs& a) {
  namespace fs = std::filesystem;
  fs::create_directories(a.output);
  const auto path = [&](const char* name) {
    return (fs::path(a.output) / name).string();
  };
  const auto write_to = [&](const std::string& p, const auto& writer) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
      et::fail(et::ErrorCode::InvalidArgument, "cannot write '" + p + "'");
    }
    writer(out);
    std::cout << p << "\n";
  };

  if (a.kind == "noise") {
    const int trials = a.trials > 0 ? a.trials : 1000;
    const std::vector<int> ms = parse_int_list(a.ms);
    const int m = a.ms == "4,10,100" ? 10 : ms.front();
    const et::NoiseReport rep = et::run_noise_experiment(
        parse_value_list(a.sigmas), trials, a.seed, 3, m);
    write_to(path("noise.csv"),
             [&](std::ostream& os) { et::write_noise_csv(os, rep); });
    write_to(path("noise.json"), [&](std::ostream& os) {
      os << et::noise_report_to_json(rep).dump(2) << "\n";
    });
    write_to(path("noise.dat"),
             [&](std::ostream& os) { et::write_noise_gnuplot(os, rep); });
    return kExitOk;
  }
  if (a.kind == "degen") {
    const int trials = a.trials > 0 ? a.trials : 200;
    const et::DegenReport rep =
        et::run_degen_experiment(parse_value_list(a.scales), trials, a.seed);
    write_to(path("degen.csv"),
             [&](std::ostream& os) { et::write_degen_csv(os, rep); });
    write_to(path("degen.json"), [&](std::ostream& os) {
      os << et::degen_report_to_json(rep).dump(2) << "\n";
    });
    write_to(path("degen.dat"),
             [&](std::ostream& os) { et::write_degen_gnuplot(os, rep); });
    return kExitOk;
  }
  if (a.kind == "timing") {
    const int reps = a.trials > 0 ? a.trials : 200;
    const et::TimingReport rep =
        et::run_timing(parse_int_list(a.ms), reps, a.seed);
    write_to(path("timing.csv"),
             [&](std::ostream& os) { et::write_timing_csv(os, rep); });
    write_to(path("timing.json"), [&](std::ostream& os) {
      os << et::timing_report_to_json(rep).dump(2) << "\n";
    });
    return kExitOk;
  }
  et::fail(et::ErrorCode::InvalidArgument,
           "bench kind must be noise, degen, or timing");
}

struct LocateArgs {
  std::string measurements;
  std::string anchors;
  std::string output = "-";
  std::string format = "json";
  double sigma_rss = et::kDefaultSigmaRss;
  double sigma_rtt = et::kDefaultSigmaRtt;
  bool unweighted = false;
  bool refine = false;
  double rank_tol = 1e-8;
  std::vector<std::string> known_coords;
};

int cmd_locate(const LocateArgs& a) {
  std::ifstream meas_in(a.measurements);
  if (!meas_in) {
    et::fail(et::ErrorCode::InvalidArgument,
             "cannot open '" + a.measurements + "'");
  }
  const auto meas = et::load_measurements_csv(meas_in);
  const auto anchors =
      et::anchors_from_json(et::Json::parse(read_file(a.anchors)));
  et::TrilaterationProblem p =
      et::build_problem(meas, anchors, a.sigma_rss, a.sigma_rtt);
  if (a.unweighted) {
    p.weights = et::WeightMatrix::Unit(p.sender_count());
  }
  et::SolveOptions opts;
  opts.rank_tol = a.rank_tol;

  std::vector<int> coords;
  et::Vec values;
  parse_known_coords(a.known_coords, coords, values);

  et::SolutionSet sol;
  et::Vec refined;
  bool have_refined = false;
  if (coords.empty()) {
    sol = et::solve(p, opts);
    if (a.refine && !sol.points.empty()) {
      refined = et::refine_ml(p, sol.points[0]);
      have_refined = true;
    }
  } else {
    const et::ReducedProblem rp =
        et::reduce_known_coordinates(p, coords, values);
    const et::SolutionSet reduced = et::solve(rp.problem, opts);
    sol = embed_solution(reduced, rp);
    if (a.refine && !reduced.points.empty()) {
      refined = rp.embed(et::refine_ml(rp.problem, reduced.points[0]));
      have_refined = true;
    }
  }

  const int rc = emit(
      render_solution(sol, a.format, have_refined ? &refined : nullptr),
      a.output);
  if (rc != kExitOk) return rc;
  return sol.well_posed() ? kExitOk : kExitIllDefined;
}

struct CalibrateArgs {
  std::string input;
  std::string output = "-";
  std::string format = "json";
};

int cmd_calibrate(const CalibrateArgs& a) {
  std::ifstream in(a.input);
  if (!in) {
    et::fail(et::ErrorCode::InvalidArgument, "cannot open '" + a.input + "'");
  }
  const et::PathLossFit fit =
      et::calibrate_pathloss(et::load_calibration_csv(in));
  std::string text;
  if (a.format == "json") {
    text = et::Json{{"c0", fit.c0}, {"eta", fit.eta}}.dump(2) + "\n";
  } else if (a.format == "csv") {
    text = "c0,eta\n" + fmt(fit.c0) + "," + fmt(fit.eta) + "\n";
  } else {
    text = "c0: " + fmt(fit.c0, 12) + " dBm\neta: " + fmt(fit.eta, 12) + "\n";
  }
  return emit(text, a.output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Globally optimal trilateration via small eigenvalue problems"};
  app.require_subcommand(1);
  const auto format_check = CLI::IsMember({"json", "csv", "human"});

  SolveArgs solve_args;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Solve a problem JSON file");
  solve_cmd->add_option("--input", solve_args.input, "Problem JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--output", solve_args.output, "Output path or -");
  solve_cmd->add_option("--format", solve_args.format, "json|csv|human")
      ->check(format_check);
  solve_cmd->add_flag("--simple", solve_args.simple,
                      "Plain variant: one linear solve after the eigenvalue");
  solve_cmd->add_option("--rank-tol", solve_args.rank_tol,
                        "Relative tie threshold for rank classification");
  solve_cmd->add_option("--known-coord", solve_args.known_coords,
                        "Pin a coordinate, idx=value; repeatable");

  BenchArgs bench_args;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Run synthetic experiments");
  bench_cmd->add_option("kind", bench_args.kind, "noise|degen|timing")
      ->required();
  bench_cmd->add_option("--sigmas", bench_args.sigmas,
                        "Comma list of noise levels");
  bench_cmd->add_option("--scales", bench_args.scales,
                        "Comma list or decade range like 1e0..1e-8");
  bench_cmd->add_option("--m", bench_args.ms, "Comma list of sender counts");
  bench_cmd->add_option("--trials", bench_args.trials,
                        "Trials per configuration (0 = per-kind default)");
  bench_cmd->add_option("--seed", bench_args.seed, "Master seed");
  bench_cmd->add_option("--output", bench_args.output,
                        "Directory for report files");

  LocateArgs locate_args;
  CLI::App* locate_cmd =
      app.add_subcommand("locate", "Position from measurement files");
  locate_cmd
      ->add_option("measurements", locate_args.measurements,
                   "CSV with anchor_id,kind,value rows")
      ->required()
      ->check(CLI::ExistingFile);
  locate_cmd
      ->add_option("anchors", locate_args.anchors, "Anchor registry JSON")
      ->required()
      ->check(CLI::ExistingFile);
  locate_cmd->add_option("--output", locate_args.output, "Output path or -");
  locate_cmd->add_option("--format", locate_args.format, "json|csv|human")
      ->check(format_check);
  locate_cmd->add_option("--sigma-rss", locate_args.sigma_rss,
                         "RSS noise std in dBm");
  locate_cmd->add_option("--sigma-rtt", locate_args.sigma_rtt,
                         "RTT distance noise std in meters");
  locate_cmd->add_flag("--unweighted", locate_args.unweighted,
                       "Use W = I instead of the model weights");
  locate_cmd->add_flag("--refine-ml", locate_args.refine,
                       "Append a local range-residual refinement");
  locate_cmd->add_option("--rank-tol", locate_args.rank_tol,
                         "Relative tie threshold for rank classification");
  locate_cmd->add_option("--known-coord", locate_args.known_coords,
                         "Pin a coordinate, idx=value; repeatable");

  CalibrateArgs cal_args;
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate", "Fit path loss parameters from distance,rss_dbm CSV");
  cal_cmd->add_option("--input", cal_args.input, "Calibration CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cal_cmd->add_option("--output", cal_args.output, "Output path or -");
  cal_cmd->add_option("--format", cal_args.format, "json|csv|human")
      ->check(format_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (bench_cmd->parsed()) return cmd_bench(bench_args);
    if (locate_cmd->parsed()) return cmd_locate(locate_args);
    if (cal_cmd->parsed()) return cmd_calibrate(cal_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
