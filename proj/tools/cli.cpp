#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "quartz/analysis.hpp"
#include "quartz/eso.hpp"
#include "quartz/errors.hpp"
#include "quartz/libsvm.hpp"
#include "quartz/problem.hpp"
#include "quartz/property_suite.hpp"
#include "quartz/sampling.hpp"
#include "quartz/solver.hpp"
#include "quartz/synth.hpp"

namespace quartz::cli {

namespace {

using json = nlohmann::ordered_json;

struct DataOptions {
  std::string path;
  std::size_t features = 0;
  bool normalize = false;
  std::size_t synth_n = 1000;
  std::size_t synth_d = 100;
  double synth_density = 0.1;
  std::string synth_profile = "uniform";
  std::uint64_t synth_seed = 1;
};

struct ProblemOptions {
  std::string loss = "smoothed-hinge";
  double gamma = 1.0;
  double lambda = 0.0;  // 0 means 1/n
};

struct SamplingOptions {
  std::string kind = "serial";
  std::size_t tau = 1;
  std::size_t nodes = 1;
  std::string partition;
  CLI::Option* tau_opt = nullptr;
  CLI::Option* nodes_opt = nullptr;
  CLI::Option* partition_opt = nullptr;
};

void add_data_options(CLI::App* app, DataOptions& o) {
  app->add_option("--data", o.path, "LIBSVM file; omit to use a synthetic instance");
  app->add_option("--features", o.features, "Feature count (default: largest index)");
  app->add_flag("--normalize,!--no-normalize", o.normalize, "Scale examples to unit norm");
  app->add_option("--synth-n", o.synth_n, "Synthetic example count")->capture_default_str();
  app->add_option("--synth-d", o.synth_d, "Synthetic feature count")->capture_default_str();
  app->add_option("--synth-density", o.synth_density, "Synthetic density")->capture_default_str();
  app->add_option("--synth-profile", o.synth_profile, "uniform | fully-sparse | fully-dense")
      ->capture_default_str();
  app->add_option("--synth-seed", o.synth_seed, "Synthetic generator seed")->capture_default_str();
}

void add_problem_options(CLI::App* app, ProblemOptions& o) {
  app->add_option("--loss", o.loss, "smoothed-hinge | squared-hinge")->capture_default_str();
  app->add_option("--gamma", o.gamma, "Loss smoothness")->capture_default_str();
  app->add_option("--lambda", o.lambda, "Regularization weight (default 1/n)");
}

void add_sampling_options(CLI::App* app, SamplingOptions& o) {
  app->add_option("--sampling", o.kind, "serial | importance | tau-nice | product | distributed")
      ->capture_default_str();
  o.tau_opt = app->add_option("--tau", o.tau, "Batch size (tau-nice) or per-node batch (distributed)");
  o.nodes_opt = app->add_option("--nodes", o.nodes, "Node count c (distributed)");
  o.partition_opt = app->add_option("--partition", o.partition,
                                    "Partition file: one group per line, 0-based indices");
}

struct Loaded {
  DataMatrix matrix;
  json source;
  std::vector<std::string> warnings;
};

Loaded load_data(const DataOptions& o) {
  Loaded out;
  if (!o.path.empty()) {
    LibsvmOptions lo;
    lo.normalize = o.normalize;
    if (o.features > 0) lo.features = o.features;
    LoadedData data = load_libsvm(o.path, lo);
    out.matrix = std::move(data.matrix);
    out.warnings = std::move(data.warnings);
    out.source = {{"data", o.path}, {"normalize", o.normalize}};
  } else {
    SynthSpec spec;
    spec.n = o.synth_n;
    spec.d = o.synth_d;
    spec.density = o.synth_density;
    spec.profile = parse_omega_profile(o.synth_profile);
    spec.seed = o.synth_seed;
    spec.normalize = o.normalize;
    out.matrix = synth_instance(spec);
    out.source = {{"synthetic",
                   {{"n", spec.n},
                    {"d", spec.d},
                    {"density", spec.density},
                    {"profile", to_string(spec.profile)},
                    {"seed", spec.seed}}},
                  {"normalize", o.normalize}};
  }
  out.source["n"] = out.matrix.cols();
  out.source["d"] = out.matrix.rows();
  out.source["density"] = out.matrix.density();
  return out;
}

double resolve_lambda(const ProblemOptions& o, std::size_t n) {
  return o.lambda > 0.0 ? o.lambda : 1.0 / static_cast<double>(n);
}

SamplingScheme build_scheme(const DataMatrix& m, const SamplingOptions& o, double lambda,
                            double gamma) {
  const std::size_t n = m.cols();
  const bool has_tau = o.tau_opt && o.tau_opt->count() > 0;
  const bool has_nodes = o.nodes_opt && o.nodes_opt->count() > 0;
  const bool has_partition = o.partition_opt && o.partition_opt->count() > 0;
  auto reject = [&](bool present, const char* flag) {
    if (present) {
      throw CLI::ValidationError(flag, std::string("not valid with --sampling ") + o.kind);
    }
  };
  if (o.kind == "serial" || o.kind == "importance") {
    reject(has_tau, "--tau");
    reject(has_nodes, "--nodes");
    reject(has_partition, "--partition");
    if (o.kind == "serial") return SamplingScheme::serial_uniform(n);
    return SamplingScheme::serial(importance_probs(v_serial(m), lambda, gamma, n));
  }
  if (o.kind == "tau-nice") {
    reject(has_nodes, "--nodes");
    reject(has_partition, "--partition");
    return SamplingScheme::tau_nice(n, o.tau);
  }
  if (o.kind == "product") {
    reject(has_tau, "--tau");
    reject(has_nodes, "--nodes");
    if (has_partition) return SamplingScheme::product(load_partition(o.partition));
    auto groups = detect_product_partition(m);
    if (!groups) throw DataError("data admits no product partition (single connected component)");
    return SamplingScheme::product(std::move(*groups));
  }
  if (o.kind == "distributed") {
    if (has_partition) {
      Partition cells = load_partition(o.partition);
      if (has_nodes && cells.size() != o.nodes) {
        throw CLI::ValidationError("--nodes", "does not match the partition file");
      }
      return SamplingScheme::distributed(std::move(cells), o.tau);
    }
    return SamplingScheme::distributed(n, o.nodes, o.tau);
  }
  throw CLI::ValidationError("--sampling", "unknown sampling '" + o.kind + "'");
}

json sampling_json(const SamplingScheme& s) {
  json j = {{"kind", s.describe()}, {"tau", s.tau()}, {"nodes", s.nodes()},
            {"expected_size", s.expected_size()}};
  return j;
}

unsigned worker_count(std::size_t jobs) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QUARTZ_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) cap = static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return static_cast<unsigned>(std::min<std::size_t>(cap, std::max<std::size_t>(jobs, 1)));
}

// Runs fn(k) for k in [0, jobs) on up to QUARTZ_THREADS workers. The first
// exception is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t jobs, Fn&& fn) {
  const unsigned workers = worker_count(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto work = [&] {
    for (std::size_t k = next++; k < jobs; k = next++) {
      try {
        fn(k);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::string with_seed_suffix(const std::string& path, std::uint64_t seed) {
  std::filesystem::path p(path);
  std::string name = p.stem().string() + "_seed" + std::to_string(seed) + p.extension().string();
  return (p.parent_path() / name).string();
}

void write_trace(const std::string& path, const json& config,
                 const std::vector<TraceRecord>& trace) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write '" + path + "'");
  f << "# config " << config.dump() << '\n';
  f << "iteration,epoch,primal,dual,gap,wall_ns\n";
  f << std::setprecision(17);
  for (const auto& r : trace) {
    f << r.iteration << ',' << r.epoch << ',' << r.primal << ',' << r.dual << ',' << r.gap << ','
      << r.wall_ns << '\n';
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw DataError("cannot write '" + path + "'");
  f << text;
}

json v_stats(const std::vector<double>& v) {
  double lo = kInfinity, hi = 0.0, sum = 0.0;
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
  }
  return {{"min", lo}, {"max", hi}, {"mean", sum / static_cast<double>(v.size())}};
}

struct SolveOptions {
  DataOptions data;
  ProblemOptions problem;
  SamplingOptions sampling;
  std::string option = "I";
  double beta = 1.0;
  double epsilon = 1e-6;
  std::uint64_t max_epochs = 1000;
  std::uint64_t gap_every = 0;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;
  std::string trace = "quartz_trace.csv";
  std::string summary = "quartz_summary.json";
};

int cmd_solve(const SolveOptions& o, std::ostream& out) {
  Loaded data = load_data(o.data);
  const double lambda = resolve_lambda(o.problem, data.matrix.cols());
  const LossModel loss(parse_loss_kind(o.problem.loss), o.problem.gamma);
  SamplingScheme scheme = build_scheme(data.matrix, o.sampling, lambda, o.problem.gamma);
  if (o.option != "I" && o.option != "II") {
    throw CLI::ValidationError("--option", "must be I or II");
  }
  const ProblemInstance prob(std::move(data.matrix), loss, lambda);

  std::vector<std::uint64_t> seeds = o.seeds.empty() ? std::vector<std::uint64_t>{o.seed} : o.seeds;

  json config = {{"command", "solve"},
                 {"source", data.source},
                 {"loss", to_string(loss.kind())},
                 {"gamma", loss.gamma()},
                 {"lambda", lambda},
                 {"sampling", sampling_json(scheme)},
                 {"option", o.option},
                 {"beta", o.beta},
                 {"epsilon", o.epsilon},
                 {"max_epochs", o.max_epochs},
                 {"gap_check_every", o.gap_every},
                 {"seeds", seeds}};

  SolverConfig base(scheme);
  base.option = o.option == "I" ? DualOption::I : DualOption::II;
  base.beta = o.beta;
  base.epsilon = o.epsilon;
  base.max_epochs = o.max_epochs;
  base.gap_check_every = o.gap_every;

  // Probe once for theta, v and warnings; each run recomputes its own copy.
  QuartzSolver probe(prob, base);

  struct RunOut {
    QuartzSolver::Result result;
    std::string trace_path;
  };
  std::vector<RunOut> runs(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t k) {
    SolverConfig cfg = base;
    cfg.seed = seeds[k];
    cfg.v = probe.v();
    runs[k].result = solve(prob, cfg);
    runs[k].trace_path = seeds.size() == 1 ? o.trace : with_seed_suffix(o.trace, seeds[k]);
    json run_config = config;
    run_config["seed"] = seeds[k];
    write_trace(runs[k].trace_path, run_config, runs[k].result.trace);
  });

  json summary = {{"config", config},
                  {"theta", probe.theta()},
                  {"primal_weight", probe.primal_weight()},
                  {"gap_check_every", probe.gap_check_every()},
                  {"v", v_stats(probe.v())},
                  {"warnings", probe.warnings()}};
  for (const auto& w : data.warnings) summary["warnings"].push_back(w);
  bool all_converged = true;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k].result;
    const auto& last = r.trace.back();
    all_converged = all_converged && r.status == SolveStatus::converged;
    json run = {{"seed", seeds[k]},
                {"status", to_string(r.status)},
                {"iterations", r.iterations},
                {"epochs", last.epoch},
                {"primal", last.primal},
                {"dual", last.dual},
                {"gap", last.gap},
                {"wall_ns", r.wall.count()},
                {"trace", runs[k].trace_path}};
    if (!r.diagnostic.empty()) run["diagnostic"] = r.diagnostic;
    summary["runs"].push_back(run);
    out << "seed " << seeds[k] << ": " << to_string(r.status) << " after " << r.iterations
        << " iterations, gap " << last.gap << '\n';
  }
  summary["status"] = all_converged ? "converged" : "not_converged";
  write_text(o.summary, summary.dump(2) + "\n", out);
  return all_converged ? kOk : kNotConverged;
}

struct EsoOptions {
  DataOptions data;
  ProblemOptions problem;
  SamplingOptions sampling;
  std::string out;
};

int cmd_eso(const EsoOptions& o, std::ostream& out) {
  Loaded data = load_data(o.data);
  const double lambda = resolve_lambda(o.problem, data.matrix.cols());
  const SamplingScheme scheme = build_scheme(data.matrix, o.sampling, lambda, o.problem.gamma);
  const EsoParams params = eso_params(data.matrix, scheme, lambda, o.problem.gamma);
  json hist = json::object();
  for (const auto& [omega, count] : omega_histogram(data.matrix)) hist[std::to_string(omega)] = count;
  json report = {{"config",
                  {{"command", "eso"},
                   {"source", data.source},
                   {"gamma", o.problem.gamma},
                   {"lambda", lambda},
                   {"sampling", sampling_json(scheme)}}},
                 {"theta", params.theta},
                 {"lambda_gamma_n", params.lambda_gamma_n},
                 {"p", params.p},
                 {"v", params.v},
                 {"omega_histogram", hist}};
  write_text(o.out, report.dump(2) + "\n", out);
  return kOk;
}

struct SpeedupOptions {
  DataOptions data;
  ProblemOptions problem;
  std::string sampling = "tau-nice";
  std::vector<std::size_t> taus;
  std::vector<std::size_t> nodes;
  std::size_t grid_points = 0;
  bool practical = false;
  std::size_t seeds = 5;
  double epsilon = 1e-6;
  std::uint64_t max_epochs = 1000;
  std::string out;
  std::string report;
};

int cmd_speedup(SpeedupOptions o, std::ostream& out) {
  Loaded data = load_data(o.data);
  const DataMatrix& m = data.matrix;
  const std::size_t n = m.cols();
  const double lambda = resolve_lambda(o.problem, n);
  const double gamma = o.problem.gamma;
  json config = {{"command", "speedup"}, {"source", data.source}, {"loss", o.problem.loss},
                 {"gamma", gamma}, {"lambda", lambda}, {"sampling", o.sampling}};
  json report = {{"config", config}};
  std::ostringstream csv;
  csv << std::setprecision(10);
  csv << "# config " << config.dump() << '\n';

  if (o.sampling == "tau-nice") {
    if (o.taus.empty()) o.taus = log_grid(n, o.grid_points);
    const double t1 = leading_term_tau_nice(m, 1, lambda, gamma);
    std::vector<double> practical(o.taus.size(), std::nan(""));
    if (o.practical) {
      const LossModel loss(parse_loss_kind(o.problem.loss), gamma);
      const ProblemInstance prob(m, loss, lambda);
      // Job 0..seeds-1 is the serial baseline, then seeds per tau.
      std::vector<std::vector<TraceRecord>> traces((o.taus.size() + 1) * o.seeds);
      parallel_for(traces.size(), [&](std::size_t k) {
        const std::size_t which = k / o.seeds;
        SolverConfig cfg(which == 0 ? SamplingScheme::serial_uniform(n)
                                    : SamplingScheme::tau_nice(n, o.taus[which - 1]));
        cfg.epsilon = o.epsilon;
        cfg.max_epochs = o.max_epochs;
        cfg.seed = k % o.seeds + 1;
        auto r = solve(prob, cfg);
        if (r.status != SolveStatus::converged) {
          throw Error("practical run did not reach epsilon (" + cfg.scheme.describe() + ", seed " +
                      std::to_string(cfg.seed) + ")");
        }
        traces[k] = std::move(r.trace);
      });
      std::span<const std::vector<TraceRecord>> all(traces);
      for (std::size_t q = 0; q < o.taus.size(); ++q) {
        practical[q] = practical_speedup(all.subspan(0, o.seeds),
                                         all.subspan((q + 1) * o.seeds, o.seeds), o.epsilon);
      }
    }
    csv << "tau,theoretical,practical\n";
    for (std::size_t q = 0; q < o.taus.size(); ++q) {
      const double theory = t1 / leading_term_tau_nice(m, o.taus[q], lambda, gamma);
      csv << o.taus[q] << ',' << theory << ',';
      if (!std::isnan(practical[q])) csv << practical[q];
      csv << '\n';
      json row = {{"tau", o.taus[q]}, {"theoretical", theory}};
      if (!std::isnan(practical[q])) row["practical"] = practical[q];
      if (o.taus[q] >= 2) {
        row["omega_tilde"] = omega_tilde_from_v(v_serial(m), v_tau_nice(m, o.taus[q]), n, o.taus[q]);
      }
      report["rows"].push_back(row);
    }
  } else if (o.sampling == "distributed") {
    if (o.practical) throw CLI::ValidationError("--practical", "only supported for tau-nice");
    if (o.nodes.empty()) o.nodes = log_grid(n, o.grid_points);
    if (o.taus.empty()) o.taus = log_grid(n, o.grid_points);
    csv << "c,tau,T_ctau,speedup\n";
    for (const auto& p : speedup_contour(m, o.nodes, o.taus, lambda, gamma)) {
      csv << p.nodes << ',' << p.tau << ',' << p.t_ctau << ',' << p.speedup << '\n';
      report["rows"].push_back(
          {{"c", p.nodes}, {"tau", p.tau}, {"T_ctau", p.t_ctau}, {"speedup", p.speedup}});
    }
  } else {
    throw CLI::ValidationError("--sampling", "speedup supports tau-nice or distributed");
  }
  write_text(o.out, csv.str(), out);
  if (!o.report.empty()) write_text(o.report, report.dump(2) + "\n", out);
  return kOk;
}

struct DetectOptions {
  DataOptions data;
  std::size_t balance = 0;
  std::string out;
};

int cmd_detect(const DetectOptions& o, std::ostream& out) {
  Loaded data = load_data(o.data);
  auto groups = detect_product_partition(data.matrix);
  if (!groups) {
    out << "no product partition: all examples share features transitively\n";
    return kOk;
  }
  if (o.balance > 0) *groups = balance_partition(*groups, o.balance);
  std::ostringstream text;
  write_partition(text, *groups);
  write_text(o.out, text.str(), out);
  if (!o.out.empty() && o.out != "-") {
    out << groups->size() << " groups written to " << o.out << '\n';
  }
  return kOk;
}

int cmd_verify(const PropertySuiteOptions& o, std::ostream& out) {
  bool ok = true;
  for (const auto& c : run_property_suite(o)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.passed;
  }
  return ok ? kOk : kNotConverged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic primal-dual solver for regularized ERM", "quartz"};
  app.require_subcommand(1);

  SolveOptions solve_o;
  auto* solve_cmd = app.add_subcommand("solve", "Run the solver, write a trace CSV and a JSON summary");
  add_data_options(solve_cmd, solve_o.data);
  add_problem_options(solve_cmd, solve_o.problem);
  add_sampling_options(solve_cmd, solve_o.sampling);
  solve_cmd->add_option("--option", solve_o.option, "Dual update: I or II")->capture_default_str();
  solve_cmd->add_option("--beta", solve_o.beta, "Primal step multiplier")->capture_default_str();
  solve_cmd->add_option("--epsilon", solve_o.epsilon, "Target duality gap")->capture_default_str();
  solve_cmd->add_option("--max-epochs", solve_o.max_epochs, "Epoch budget")->capture_default_str();
  solve_cmd->add_option("--gap-every", solve_o.gap_every, "Iterations between gap checks (0 = one epoch)");
  solve_cmd->add_option("--seed", solve_o.seed, "Seed")->capture_default_str();
  solve_cmd->add_option("--seeds", solve_o.seeds, "Comma separated seeds, run in parallel")
      ->delimiter(',');
  solve_cmd->add_option("--trace", solve_o.trace, "Trace CSV path")->capture_default_str();
  solve_cmd->add_option("--summary", solve_o.summary, "Summary JSON path ('-' for stdout)")
      ->capture_default_str();

  EsoOptions eso_o;
  auto* eso_cmd = app.add_subcommand("eso", "Report v, theta and the omega histogram as JSON");
  add_data_options(eso_cmd, eso_o.data);
  add_problem_options(eso_cmd, eso_o.problem);
  add_sampling_options(eso_cmd, eso_o.sampling);
  eso_cmd->add_option("--out", eso_o.out, "Output path (default stdout)");

  SpeedupOptions sp_o;
  sp_o.data.normalize = true;
  auto* sp_cmd = app.add_subcommand("speedup", "Theoretical and measured speedup over tau or (c, tau)");
  add_data_options(sp_cmd, sp_o.data);
  add_problem_options(sp_cmd, sp_o.problem);
  sp_cmd->add_option("--sampling", sp_o.sampling, "tau-nice | distributed")->capture_default_str();
  sp_cmd->add_option("--tau-list", sp_o.taus, "Comma separated tau values")->delimiter(',');
  sp_cmd->add_option("--nodes-list", sp_o.nodes, "Comma separated node counts")->delimiter(',');
  sp_cmd->add_option("--grid-points", sp_o.grid_points, "Thin default log grids to this many points");
  sp_cmd->add_flag("--practical", sp_o.practical, "Also measure iterations to epsilon");
  sp_cmd->add_option("--seeds", sp_o.seeds, "Seeds per measured configuration")->capture_default_str();
  sp_cmd->add_option("--epsilon", sp_o.epsilon, "Target gap for measurement")->capture_default_str();
  sp_cmd->add_option("--max-epochs", sp_o.max_epochs, "Epoch budget per run")->capture_default_str();
  sp_cmd->add_option("--out", sp_o.out, "CSV path (default stdout)");
  sp_cmd->add_option("--report", sp_o.report, "JSON report path");

  DetectOptions det_o;
  auto* det_cmd = app.add_subcommand("detect-groups", "Find a feature-disjoint partition of the examples");
  add_data_options(det_cmd, det_o.data);
  det_cmd->add_option("--balance", det_o.balance, "Merge components into at most this many groups");
  det_cmd->add_option("--out", det_o.out, "Partition file path (default stdout)");

  PropertySuiteOptions ver_o;
  auto* ver_cmd = app.add_subcommand("verify", "Run randomized property checks on small instances");
  ver_cmd->add_option("--instances", ver_o.instances, "Random instances")->capture_default_str();
  ver_cmd->add_option("--vectors", ver_o.vectors_per_instance, "Vectors per instance")
      ->capture_default_str();
  ver_cmd->add_option("--runs", ver_o.contraction_runs, "Seeded runs for the contraction check")
      ->capture_default_str();
  ver_cmd->add_option("--seed", ver_o.seed, "Seed")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // Help and version requests are successful exits.
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve_o, out);
    if (eso_cmd->parsed()) return cmd_eso(eso_o, out);
    if (sp_cmd->parsed()) return cmd_speedup(sp_o, out);
    if (det_cmd->parsed()) return cmd_detect(det_o, out);
    if (ver_cmd->parsed()) return cmd_verify(ver_o, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error";
    if (e.line() > 0) err << " (line " << e.line() << ")";
    err << ": " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace quartz::cli
