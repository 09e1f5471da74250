#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "arm/evaluation.hpp"
#include "arm/matrix_io.hpp"
#include "arm/pipeline.hpp"
#include "manifest.hpp"

namespace arm::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path with_suffix(const std::string& prefix, const std::string& suffix) { return fs::path(prefix + suffix); }

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

// Solver options shared by solve, cluster and the lambda sweep. Explicit
// flags override the chosen preset.
struct SolverFlags {
  std::string preset = "motion";
  std::string method = "arm";
  double lambda = 0.0;
  double mu0 = 0.0;
  double rho = 0.0;
  std::string error_model;
  double tol = 1e-5;
  int max_iters = 150;
  int dc_max_iters = 50;
  double dc_tol = 1e-8;
  bool check_descent = false;

  CLI::Option* lambda_opt = nullptr;
  CLI::Option* mu0_opt = nullptr;
  CLI::Option* rho_opt = nullptr;
  CLI::Option* model_opt = nullptr;

  void add_to(CLI::App* app, bool with_lambda = true) {
    app->add_option("--preset", preset, "Parameter preset")
        ->check(CLI::IsMember({"motion", "face"}))
        ->capture_default_str();
    app->add_option("--method", method, "arm (arctangent) or lrr (nuclear-norm baseline)")
        ->check(CLI::IsMember({"arm", "lrr"}))
        ->capture_default_str();
    if (with_lambda) lambda_opt = app->add_option("--lambda", lambda, "Error trade-off lambda > 0");
    mu0_opt = app->add_option("--mu0", mu0, "Initial penalty mu0 > 0");
    rho_opt = app->add_option("--rho", rho, "Penalty growth factor rho > 1");
    model_opt = app->add_option("--error-model", error_model, "fro, l1 or l21")
                    ->check(CLI::IsMember({"fro", "l1", "l21"}));
    app->add_option("--tol", tol, "Stop when max(r1, r2) <= tol")->capture_default_str();
    app->add_option("--max-iters", max_iters, "Outer iteration cap")->capture_default_str();
    app->add_option("--dc-max-iters", dc_max_iters, "DC iteration cap")->capture_default_str();
    app->add_option("--dc-tol", dc_tol, "DC step tolerance")->capture_default_str();
    app->add_flag("--check-descent", check_descent, "Count augmented-Lagrangian increases per block");
  }

  SolverConfig resolve() const {
    SolverConfig cfg = preset == "face" ? SolverConfig::face_preset() : SolverConfig::motion_preset();
    if (lambda_opt && lambda_opt->count()) cfg.lambda = lambda;
    if (mu0_opt->count()) cfg.mu0 = mu0;
    if (rho_opt->count()) cfg.rho = rho;
    if (model_opt->count()) cfg.error_model = parse_error_model(error_model);
    cfg.rel_tol = tol;
    cfg.max_iters = max_iters;
    cfg.dc.max_iters = dc_max_iters;
    cfg.dc.tol = dc_tol;
    cfg.check_descent = check_descent;
    cfg.validate();
    return cfg;
  }

  RankSurrogate surrogate() const { return method == "lrr" ? RankSurrogate::Nuclear : RankSurrogate::Arctan; }
};

void record_solver(Manifest& m, const SolverConfig& cfg, const SolverFlags& flags) {
  m.set("solver.method", flags.method);
  m.set("solver.preset", flags.preset);
  m.set("solver.lambda", cfg.lambda);
  m.set("solver.mu0", cfg.mu0);
  m.set("solver.rho", cfg.rho);
  m.set("solver.error_model", to_string(cfg.error_model));
  m.set("solver.rel_tol", cfg.rel_tol);
  m.set("solver.max_iters", cfg.max_iters);
  m.set("solver.dc_max_iters", cfg.dc.max_iters);
  m.set("solver.dc_tol", cfg.dc.tol);
  m.set("solver.check_descent", cfg.check_descent);
}

void record_trace_summary(Manifest& m, const SolveResult& r) {
  m.set("result.iterations", r.iterations());
  m.set("result.converged", r.converged);
  m.set("result.gram_invertible", r.gram_invertible);
  m.set("result.dc_all_converged", r.dc_all_converged);
  if (!r.trace.empty()) {
    const auto& last = r.trace.back();
    m.set("result.objective", last.objective);
    m.set("result.r1", last.r1);
    m.set("result.r2", last.r2);
    m.set("result.mu", last.mu);
    m.set("result.arctan_rank", last.arctan_rank);
    m.set("result.nuclear_norm", last.nuclear_norm);
  }
  m.set("result.descent_violations", r.descent_violations);
}

void write_trace_csv(const SolveResult& r, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "iter,objective,r1,r2,mu,dc_iters,arctan_rank,nuclear_norm,y1_max,y2_max\n" << std::setprecision(17);
  for (const auto& t : r.trace) {
    out << t.iter << ',' << t.objective << ',' << t.r1 << ',' << t.r2 << ',' << t.mu << ',' << t.dc_iters << ','
        << t.arctan_rank << ',' << t.nuclear_norm << ',' << t.y1_max << ',' << t.y2_max << '\n';
  }
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Matrix load_input(const std::string& path, const std::string& format) {
  return format.empty() ? load_matrix(path) : load_matrix(path, parse_matrix_format(format));
}

std::string percent(double rate) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << 100.0 * rate << '%';
  return ss.str();
}

std::vector<double> parse_lambda_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse lambda '" + item + "'");
    }
    if (used != item.size() || !(v > 0.0)) throw std::invalid_argument("invalid lambda '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--lambdas is empty");
  return out;
}

// ---- solve ---------------------------------------------------------------

struct SolveCmd {
  std::string input, format, out_prefix = "arm";
  SolverFlags solver;

  void add_to(CLI::App* app) {
    app->add_option("--input", input, "Data matrix X (m x n, columns are samples)")->required();
    app->add_option("--format", format, "csv or mm (default: from extension)");
    app->add_option("--out-prefix", out_prefix, "Prefix for output files")->capture_default_str();
    solver.add_to(app);
  }

  int run(const std::vector<std::string>& args, std::ostream& out) const {
    const auto t0 = Clock::now();
    const SolverConfig cfg = solver.resolve();
    const Matrix x = load_input(input, format);
    const double t_load = seconds_since(t0);

    const auto t1 = Clock::now();
    const SolveResult r = solve(x, cfg, solver.surrogate());
    const double t_solve = seconds_since(t1);

    const auto t2 = Clock::now();
    const auto z_path = with_suffix(out_prefix, "_Z.csv");
    const auto e_path = with_suffix(out_prefix, "_E.csv");
    const auto xz_path = with_suffix(out_prefix, "_XZ.csv");
    const auto trace_path = with_suffix(out_prefix, "_trace.csv");
    const auto manifest_path = with_suffix(out_prefix, "_manifest.txt");
    ensure_parent(z_path);
    save_matrix(r.z, z_path, MatrixFormat::Csv);
    save_matrix(r.e, e_path, MatrixFormat::Csv);
    save_matrix(x * r.z, xz_path, MatrixFormat::Csv);
    write_trace_csv(r, trace_path);
    const double t_write = seconds_since(t2);

    Manifest m;
    m.set("command", "solve");
    m.set_args(args);
    m.set("input", input);
    m.set("input.rows", static_cast<long long>(x.rows()));
    m.set("input.cols", static_cast<long long>(x.cols()));
    record_solver(m, cfg, solver);
    m.set("output.Z", z_path.string());
    m.set("output.E", e_path.string());
    m.set("output.XZ", xz_path.string());
    m.set("output.trace", trace_path.string());
    m.set("time.load_s", t_load);
    m.set("time.solve_s", t_solve);
    m.set("time.write_s", t_write);
    record_trace_summary(m, r);
    m.write(manifest_path);

    const auto& last = r.trace.back();
    out << (r.converged ? "converged" : "not converged") << " after " << r.iterations()
        << " iterations: objective=" << last.objective << " r1=" << last.r1 << " r2=" << last.r2 << '\n';
    return r.converged ? kSuccess : kNotConverged;
  }
};

// ---- cluster -------------------------------------------------------------

struct ClusterCmd {
  std::string input, format, truth, out_prefix = "arm";
  int k = 0;
  int alpha = 2;
  std::uint64_t seed = 0;
  int restarts = 20;
  int kmeans_max_iters = 300;
  double svd_tol = 1e-6;
  SolverFlags solver;

  void add_to(CLI::App* app) {
    app->add_option("--input", input, "Data matrix X (m x n, columns are samples)")->required();
    app->add_option("--format", format, "csv or mm (default: from extension)");
    app->add_option("--k", k, "Number of subspaces")->required()->check(CLI::PositiveNumber);
    app->add_option("--alpha", alpha, "Affinity sharpening exponent")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seed", seed, "k-means seed")->capture_default_str();
    app->add_option("--restarts", restarts, "k-means restarts")->capture_default_str();
    app->add_option("--kmeans-max-iters", kmeans_max_iters, "Lloyd iteration cap")->capture_default_str();
    app->add_option("--svd-tol", svd_tol, "Relative cut for the skinny SVD")->capture_default_str();
    app->add_option("--truth", truth, "Ground-truth labels; prints the clustering error");
    app->add_option("--out-prefix", out_prefix, "Prefix for output files")->capture_default_str();
    solver.add_to(app);
  }

  PipelineConfig pipeline() const {
    PipelineConfig p;
    p.solver = solver.resolve();
    p.surrogate = solver.surrogate();
    p.spectral.k = k;
    p.spectral.seed = seed;
    p.spectral.restarts = restarts;
    p.spectral.kmeans_max_iters = kmeans_max_iters;
    p.alpha = alpha;
    p.svd_rel_tol = svd_tol;
    return p;
  }

  int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) const {
    const auto t0 = Clock::now();
    const PipelineConfig cfg = pipeline();
    const Matrix x = load_input(input, format);
    std::optional<ClusterLabels> truth_labels;
    if (!truth.empty()) {
      truth_labels = load_labels(truth);
      if (truth_labels->size() != static_cast<std::size_t>(x.cols()))
        throw std::invalid_argument("--truth has " + std::to_string(truth_labels->size()) + " labels but X has " +
                                    std::to_string(x.cols()) + " samples");
    }
    cfg.spectral.validate(x.cols());
    const double t_load = seconds_since(t0);

    const auto t1 = Clock::now();
    const SolveResult r = solve(x, cfg.solver, cfg.surrogate);
    const double t_solve = seconds_since(t1);

    const auto t2 = Clock::now();
    const AffinityGraph g = build_affinity(r.z, cfg.alpha, cfg.svd_rel_tol);
    const double t_affinity = seconds_since(t2);

    const auto t3 = Clock::now();
    const NcutsResult c = ncuts(g.w, cfg.spectral);
    const double t_ncuts = seconds_since(t3);

    if (g.rank == 0) err << "warning: coefficient matrix is zero; affinity graph is empty\n";
    if (!g.isolated.empty()) err << "warning: " << g.isolated.size() << " samples have a zero embedding row\n";
    if (c.degenerate) err << "warning: k-means produced degenerate clusters\n";

    const auto labels_path = with_suffix(out_prefix, "_labels.txt");
    const auto w_path = with_suffix(out_prefix, "_W.csv");
    const auto trace_path = with_suffix(out_prefix, "_trace.csv");
    const auto manifest_path = with_suffix(out_prefix, "_manifest.txt");
    ensure_parent(labels_path);
    save_labels(c.labels, labels_path);
    save_matrix(g.w, w_path, MatrixFormat::Csv);
    write_trace_csv(r, trace_path);

    Manifest m;
    m.set("command", "cluster");
    m.set_args(args);
    m.set("input", input);
    m.set("input.rows", static_cast<long long>(x.rows()));
    m.set("input.cols", static_cast<long long>(x.cols()));
    if (!truth.empty()) m.set("truth", truth);
    record_solver(m, cfg.solver, solver);
    m.set("spectral.k", cfg.spectral.k);
    m.set("spectral.seed", std::to_string(cfg.spectral.seed));
    m.set("spectral.restarts", cfg.spectral.restarts);
    m.set("spectral.kmeans_max_iters", cfg.spectral.kmeans_max_iters);
    m.set("affinity.alpha", cfg.alpha);
    m.set("affinity.svd_tol", cfg.svd_rel_tol);
    m.set("affinity.rank", static_cast<long long>(g.rank));
    m.set("affinity.isolated", static_cast<long long>(g.isolated.size()));
    m.set("clusters.degenerate", c.degenerate);
    m.set("output.labels", labels_path.string());
    m.set("output.W", w_path.string());
    m.set("output.trace", trace_path.string());
    m.set("time.load_s", t_load);
    m.set("time.solve_s", t_solve);
    m.set("time.affinity_s", t_affinity);
    m.set("time.ncuts_s", t_ncuts);
    record_trace_summary(m, r);
    if (truth_labels) {
      const double e = clustering_error(c.labels, *truth_labels);
      m.set("result.clustering_error", e);
      m.set("result.block_diag_mass", block_diag_mass(g.w, *truth_labels));
      out << "clustering error: " << percent(e) << '\n';
    }
    m.write(manifest_path);
    return r.converged ? kSuccess : kNotConverged;
  }
};

// ---- synth ---------------------------------------------------------------

struct SynthCmd {
  int m = 50, k = 5, dim = 4, points = 40;
  std::string mode = "independent";
  std::string corruption = "none";
  double level = 0.0, magnitude = 1.0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> corruption_seed;
  std::string out_prefix = "synth";

  void add_to(CLI::App* app) {
    app->add_option("--m", m, "Ambient dimension")->capture_default_str();
    app->add_option("--k", k, "Number of subspaces")->capture_default_str();
    app->add_option("--dim", dim, "Dimension of every subspace")->capture_default_str();
    app->add_option("--points", points, "Points per subspace")->capture_default_str();
    app->add_option("--mode", mode, "independent or random bases")
        ->check(CLI::IsMember({"independent", "random"}))
        ->capture_default_str();
    app->add_option("--corruption", corruption, "none, gaussian, sparse or sample")
        ->check(CLI::IsMember({"none", "gaussian", "sparse", "sample"}))
        ->capture_default_str();
    app->add_option("--level", level, "Noise std-dev, or fraction of entries / columns")->capture_default_str();
    app->add_option("--magnitude", magnitude, "Sparse value range or sample-specific column norm")
        ->capture_default_str();
    app->add_option("--seed", seed, "Data seed")->capture_default_str();
    app->add_option("--corruption-seed", corruption_seed, "Corruption seed (default: seed + 1)");
    app->add_option("--out-prefix", out_prefix, "Prefix for output files")->capture_default_str();
  }

  int run(const std::vector<std::string>& args, std::ostream& out) const {
    const auto t0 = Clock::now();
    if (m < 1 || k < 1 || dim < 1 || points < 1) throw std::invalid_argument("--m, --k, --dim, --points must be positive");
    const auto spec = SubspaceSpec::uniform(m, k, dim, points, seed,
                                            mode == "random" ? SubspaceMode::Random : SubspaceMode::Independent);
    const SyntheticData data = generate_subspaces(spec);
    CorruptionSpec cs{parse_corruption_model(corruption), level, magnitude, corruption_seed.value_or(seed + 1)};
    const CorruptedData cd = corrupt(data.x, cs);
    const double t_gen = seconds_since(t0);

    const auto x_path = with_suffix(out_prefix, "_X.csv");
    const auto labels_path = with_suffix(out_prefix, "_labels.txt");
    const auto e_path = with_suffix(out_prefix, "_E.csv");
    const auto manifest_path = with_suffix(out_prefix, "_manifest.txt");
    ensure_parent(x_path);
    save_matrix(cd.x, x_path, MatrixFormat::Csv);
    save_labels(data.labels, labels_path);
    save_matrix(cd.e_true, e_path, MatrixFormat::Csv);

    Manifest mf;
    mf.set("command", "synth");
    mf.set_args(args);
    mf.set("synth.m", m);
    mf.set("synth.k", k);
    mf.set("synth.dim", dim);
    mf.set("synth.points", points);
    mf.set("synth.mode", mode);
    mf.set("synth.seed", std::to_string(seed));
    mf.set("corruption.model", corruption);
    mf.set("corruption.level", level);
    mf.set("corruption.magnitude", magnitude);
    mf.set("corruption.seed", std::to_string(cs.seed));
    mf.set("corruption.touched", static_cast<long long>(cd.touched.size()));
    mf.set("output.X", x_path.string());
    mf.set("output.labels", labels_path.string());
    mf.set("output.E", e_path.string());
    mf.set("time.generate_s", t_gen);
    mf.write(manifest_path);

    out << "wrote " << cd.x.rows() << "x" << cd.x.cols() << " data to " << x_path.string() << '\n';
    return kSuccess;
  }
};

// ---- rankfig -------------------------------------------------------------

struct RankfigCmd {
  std::string mode;
  double sigma_max = 20.0;
  int steps = 41;
  std::string input, format, truth, lambdas = "1,1.5,2,2.5,3";
  int k = 0;
  int alpha = 2;
  std::uint64_t seed = 0;
  int restarts = 20;
  int jobs = 1;
  std::string out_path;
  SolverFlags solver;

  void add_to(CLI::App* app) {
    app->add_option("--mode", mode, "surface or lambda-sweep")
        ->required()
        ->check(CLI::IsMember({"surface", "lambda-sweep"}));
    app->add_option("--sigma-max", sigma_max, "Surface: grid upper bound")->capture_default_str();
    app->add_option("--steps", steps, "Surface: grid points per axis")->capture_default_str();
    app->add_option("--input", input, "Sweep: data matrix");
    app->add_option("--format", format, "Sweep: csv or mm (default: from extension)");
    app->add_option("--truth", truth, "Sweep: ground-truth labels");
    app->add_option("--lambdas", lambdas, "Sweep: comma-separated lambda values")->capture_default_str();
    app->add_option("--k", k, "Sweep: number of subspaces");
    app->add_option("--alpha", alpha, "Sweep: affinity exponent")->capture_default_str();
    app->add_option("--seed", seed, "Sweep: k-means seed")->capture_default_str();
    app->add_option("--restarts", restarts, "Sweep: k-means restarts")->capture_default_str();
    app->add_option("--jobs", jobs, "Sweep: concurrent instances")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--out", out_path, "Output CSV (default: stdout)");
    solver.add_to(app, false);
  }

  void emit(const std::string& csv, std::ostream& out) const {
    if (out_path.empty()) {
      out << csv;
      return;
    }
    ensure_parent(out_path);
    std::ofstream f(out_path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    f << csv;
    if (!f) throw std::runtime_error("write to '" + out_path + "' failed");
  }

  void write_manifest(const std::vector<std::string>& args, Manifest m) const {
    if (out_path.empty()) return;
    m.set("command", "rankfig");
    m.set_args(args);
    m.set("rankfig.mode", mode);
    m.set("output.csv", out_path);
    m.write(fs::path(out_path).replace_extension().string() + "_manifest.txt");
  }

  int run(const std::vector<std::string>& args, std::ostream& out) const {
    if (mode == "surface") {
      const auto t0 = Clock::now();
      std::ostringstream csv;
      write_rank_profile_csv(rank_approx_profile(sigma_max, steps), csv);
      emit(csv.str(), out);
      Manifest m;
      m.set("surface.sigma_max", sigma_max);
      m.set("surface.steps", steps);
      m.set("time.total_s", seconds_since(t0));
      write_manifest(args, m);
      return kSuccess;
    }

    if (input.empty() || truth.empty() || k < 1)
      throw std::invalid_argument("lambda-sweep needs --input, --truth and --k");
    const auto t0 = Clock::now();
    const Matrix x = load_input(input, format);
    const ClusterLabels truth_labels = load_labels(truth);
    if (truth_labels.size() != static_cast<std::size_t>(x.cols()))
      throw std::invalid_argument("--truth length does not match the number of samples");
    const std::vector<double> lams = parse_lambda_list(lambdas);

    PipelineConfig base;
    base.solver = solver.resolve();
    base.surrogate = solver.surrogate();
    base.spectral.k = k;
    base.spectral.seed = seed;
    base.spectral.restarts = restarts;
    base.alpha = alpha;
    base.spectral.validate(x.cols());

    struct Row {
      double error = 0.0;
      bool converged = false;
      int iterations = 0;
      std::string failure;
    };
    std::vector<Row> rows(lams.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < lams.size(); i = next++) {
        try {
          PipelineConfig cfg = base;
          cfg.solver.lambda = lams[i];
          const ClusteringRun run = cluster_subspaces(x, cfg);
          rows[i] = {clustering_error(run.clusters.labels, truth_labels), run.solve.converged,
                     run.solve.iterations(), {}};
        } catch (const std::exception& e) {
          rows[i].failure = e.what();
        }
      }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(lams.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream csv;
    csv << "lambda,error,converged,iterations\n" << std::setprecision(17);
    for (std::size_t i = 0; i < lams.size(); ++i) {
      if (!rows[i].failure.empty())
        throw NumericalError("lambda " + std::to_string(lams[i]) + ": " + rows[i].failure);
      csv << lams[i] << ',' << rows[i].error << ',' << (rows[i].converged ? 1 : 0) << ',' << rows[i].iterations
          << '\n';
    }
    emit(csv.str(), out);

    Manifest m;
    m.set("input", input);
    m.set("truth", truth);
    m.set("sweep.lambdas", lambdas);
    record_solver(m, base.solver, solver);
    m.set("spectral.k", k);
    m.set("spectral.seed", std::to_string(seed));
    m.set("spectral.restarts", restarts);
    m.set("affinity.alpha", alpha);
    m.set("sweep.jobs", jobs);
    m.set("time.total_s", seconds_since(t0));
    write_manifest(args, m);
    return kSuccess;
  }
};

}  // namespace

void apply_thread_env() {
  if (const char* env = std::getenv("ARM_NUM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) Eigen::setNbThreads(static_cast<int>(n));
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arctangent rank minimization for robust subspace clustering", "arm"};
  app.require_subcommand(1);

  SolveCmd solve_cmd;
  ClusterCmd cluster_cmd;
  SynthCmd synth_cmd;
  RankfigCmd rankfig_cmd;
  std::string replay_manifest;

  auto* solve_app = app.add_subcommand("solve", "Solve for the representation Z of X = XZ + E");
  solve_cmd.add_to(solve_app);
  auto* cluster_app = app.add_subcommand("cluster", "Solve, build the affinity graph and cluster the samples");
  cluster_cmd.add_to(cluster_app);
  auto* synth_app = app.add_subcommand("synth", "Generate a union-of-subspaces data set");
  synth_cmd.add_to(synth_app);
  auto* rankfig_app = app.add_subcommand("rankfig", "Emit rank-surrogate surface or lambda-sweep CSV data");
  rankfig_cmd.add_to(rankfig_app);
  auto* replay_app = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_app->add_option("--manifest", replay_manifest, "Manifest written by a previous run")->required();

  // CLI11 parses a reversed argv vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kInputError;
  }

  try {
    if (*solve_app) return solve_cmd.run(args, out);
    if (*cluster_app) return cluster_cmd.run(args, out, err);
    if (*synth_app) return synth_cmd.run(args, out);
    if (*rankfig_app) return rankfig_cmd.run(args, out);
    if (*replay_app) {
      const auto recorded = Manifest::read(replay_manifest).args();
      if (!recorded.empty() && recorded.front() == "replay") throw std::invalid_argument("manifest records a replay");
      return run(recorded, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace arm::cli
