#include "slr/experiment.hpp"

#include "slr/baselines.hpp"
#include "slr/point_cloud_io.hpp"
#include "slr/random.hpp"
#include "slr/registration.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <thread>
#include <tuple>

namespace slr {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct KindName {
  ExperimentKind kind;
  std::string_view name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::LsVsSnr, "ls_vs_snr"},
    {ExperimentKind::LsVsPe, "ls_vs_pe"},
    {ExperimentKind::LsVsT, "ls_vs_t"},
    {ExperimentKind::LsVsN, "ls_vs_n"},
    {ExperimentKind::LassoVsSnr, "lasso_vs_snr"},
    {ExperimentKind::LassoVsT, "lasso_vs_t"},
    {ExperimentKind::LassoVsSparsity, "lasso_vs_sparsity"},
    {ExperimentKind::Registration, "registration"},
};

struct MethodName {
  Method method;
  std::string_view name;
};

constexpr MethodName kMethods[] = {
    {Method::Spectral, "spectral"}, {Method::Oracle, "oracle"},       {Method::Spatial, "spatial"},
    {Method::Leverage, "leverage"}, {Method::Threshold, "threshold"},
};

TrialMetrics failed_metrics() {
  TrialMetrics m;
  m.perm_error_rate = m.nmse_x = m.nmse_x_db = m.optimality_gap = m.reconstruction_mse = kNaN;
  return m;
}

template <typename F>
ResultRow guarded_row(const std::string& id, Method method, double value, int trial, F&& body) {
  ResultRow row{id, method, value, trial, {}, {}};
  const auto start = std::chrono::steady_clock::now();
  try {
    row.metrics = body();
  } catch (const Error& e) {
    row.metrics = failed_metrics();
    row.metrics.elapsed = std::chrono::steady_clock::now() - start;
    row.error = e.tag();
  } catch (const std::exception&) {
    row.metrics = failed_metrics();
    row.metrics.elapsed = std::chrono::steady_clock::now() - start;
    row.error = "Exception";
  }
  return row;
}

std::vector<ResultRow> run_regression_trial(const ExperimentSpec& spec, const FixedParams& p, double value, int trial) {
  SolverConfig config;
  config.rho = p.rho;
  config.gap_threshold = p.gap_threshold;
  config.max_components = p.max_components;
  const std::uint64_t seed = derive_seed(spec.seed, value, static_cast<std::uint64_t>(trial));
  const bool lasso = is_lasso_kind(spec.kind);
  const Recovery recovery = lasso ? Recovery::Lasso : Recovery::LeastSquares;

  std::vector<ResultRow> rows;
  std::optional<SyntheticInstance> inst;
  std::string gen_error;
  try {
    inst = lasso ? generate_sparse_problem(p.m, p.n, p.t, p.snr_db, p.s, seed, config)
                 : generate_dense_problem(p.m, p.n, p.t, p.snr_db, p.p_e, seed, config);
  } catch (const Error& e) {
    gen_error = e.tag();
  }
  if (!inst) {
    for (Method method : spec.methods) {
      ResultRow row{spec.id, method, value, trial, failed_metrics(), gen_error};
      rows.push_back(std::move(row));
    }
    return rows;
  }

  const auto& problem = inst->problem;
  const auto& truth = inst->truth;
  const Eigen::MatrixXd c_x = Eigen::MatrixXd::Identity(p.n, p.n);
  std::optional<SpectralBasis> signal;
  try {
    signal = build_signal_basis(problem.A, c_x, config);
  } catch (const Error&) {
  }

  for (Method method : spec.methods) {
    rows.push_back(guarded_row(spec.id, method, value, trial, [&] {
      const auto start = std::chrono::steady_clock::now();
      SlrSolution sol;
      switch (method) {
        case Method::Spectral:
          sol = lasso ? solve_shuffled_lasso(problem, c_x) : solve_shuffled_ls(problem, c_x);
          break;
        case Method::Oracle:
          sol = oracle_solution(problem, truth, lasso);
          break;
        case Method::Spatial:
        case Method::Leverage:
        case Method::Threshold:
          sol.perm = method == Method::Spatial    ? spatial_match(problem)
                     : method == Method::Leverage ? leverage_match(problem)
                                                  : threshold_match(problem);
          sol.X = recover_features(problem, sol.perm, recovery);
          break;
      }
      TrialMetrics m;
      m.elapsed = std::chrono::steady_clock::now() - start;
      m.perm_error_rate = permutation_error_rate(sol.perm, truth.perm);
      m.nmse_x = nmse(sol.X, truth.X);
      m.nmse_x_db = to_db(m.nmse_x);
      m.optimality_gap = signal ? optimality_gap(sol.perm, truth.perm, *signal) : kNaN;
      m.reconstruction_mse = reconstruction_mse(sol.perm, sol.X, truth.perm, truth.X, problem.A);
      return m;
    }));
  }
  return rows;
}

std::vector<ResultRow> run_registration_trial(const ExperimentSpec& spec, const FixedParams& p, double value,
                                              int trial, const PointCloud& model) {
  const std::uint64_t seed = derive_seed(spec.seed, value, static_cast<std::uint64_t>(trial));
  std::vector<ResultRow> rows;
  std::optional<GeneratedScene> gen;
  std::string gen_error;
  try {
    gen = generate_scene(model, p.points, p.sigma2, seed);
  } catch (const Error& e) {
    gen_error = e.tag();
  }
  if (!gen) {
    for (Method method : spec.methods) rows.push_back({spec.id, method, value, trial, failed_metrics(), gen_error});
    return rows;
  }
  const auto& scene = gen->scene;
  const auto& truth = gen->truth;

  std::optional<SpectralBasis> signal;
  try {
    const auto q = center(scene.Q).cloud.points;
    auto eig = eigendecompose_descending(Eigen::MatrixXd(q * q.transpose()));
    auto sel = select_components(eig.eigenvalues, p.gap_threshold, Index{3});
    signal = SpectralBasis{std::move(eig.eigenvalues), std::move(eig.vectors), sel.selected, sel.delta};
  } catch (const Error&) {
  }

  for (Method method : spec.methods) {
    rows.push_back(guarded_row(spec.id, method, value, trial, [&] {
      const auto start = std::chrono::steady_clock::now();
      RegistrationResult res;
      if (method == Method::Oracle) {
        res.perm = truth.perm;
        res.rotation =
            estimate_rotation(center(scene.P).cloud.points, center(scene.Q).cloud.points, truth.perm);
        res.translation = estimate_translation(scene.P.points, scene.Q.points, res.rotation);
      } else {
        res = register_point_sets(scene, &truth.perm, p.gap_threshold);
      }
      TrialMetrics m;
      m.elapsed = std::chrono::steady_clock::now() - start;
      const auto rebuilt = reconstruct_model(scene.P, res.perm, res.rotation, res.translation);
      m.perm_error_rate = permutation_error_rate(res.perm, truth.perm);
      m.nmse_x = (res.rotation - truth.rotation).squaredNorm() / 9.0;
      m.nmse_x_db = to_db(m.nmse_x);
      m.optimality_gap = signal ? optimality_gap(res.perm, truth.perm, *signal) : kNaN;
      m.reconstruction_mse = (rebuilt - scene.Q.points).squaredNorm() / static_cast<double>(rebuilt.size());
      return m;
    }));
  }
  return rows;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (const auto& k : kKinds)
    if (k.name == name) return k.kind;
  throw InvalidArgument(fmt::format("unknown experiment kind '{}'", name));
}

std::string_view to_string(Method method) {
  for (const auto& m : kMethods)
    if (m.method == method) return m.name;
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto& m : kMethods)
    if (m.name == name) return m.method;
  throw InvalidArgument(fmt::format("unknown method '{}'", name));
}

bool is_lasso_kind(ExperimentKind kind) {
  return kind == ExperimentKind::LassoVsSnr || kind == ExperimentKind::LassoVsT ||
         kind == ExperimentKind::LassoVsSparsity;
}

void ExperimentSpec::validate() const {
  detail::require(trials >= 1, "trials must be >= 1");
  detail::require(!sweep.empty(), "sweep must not be empty");
  detail::require(!methods.empty(), "methods must not be empty");
  if (kind == ExperimentKind::Registration) {
    for (Method m : methods)
      detail::require(m == Method::Spectral || m == Method::Oracle,
                      fmt::format("method '{}' is not available for registration", to_string(m)));
  }
  for (double v : sweep) detail::require(std::isfinite(v), "sweep values must be finite");
}

FixedParams sweep_point(const ExperimentSpec& spec, double value) {
  FixedParams p = spec.fixed;
  switch (spec.kind) {
    case ExperimentKind::LsVsSnr:
    case ExperimentKind::LassoVsSnr:
      p.snr_db = value;
      break;
    case ExperimentKind::LsVsPe:
      p.p_e = value;
      break;
    case ExperimentKind::LsVsT:
    case ExperimentKind::LassoVsT:
      p.t = static_cast<Index>(std::llround(value));
      break;
    case ExperimentKind::LsVsN:
      p.n = static_cast<Index>(std::llround(value));
      break;
    case ExperimentKind::LassoVsSparsity:
      p.s = value * static_cast<double>(p.n);
      break;
    case ExperimentKind::Registration:
      p.sigma2 = value;
      break;
  }
  return p;
}

unsigned resolve_thread_count(unsigned requested) {
  unsigned threads = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SLR_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) threads = std::min(threads, static_cast<unsigned>(cap));
  }
  return std::max(1u, threads);
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();
  std::optional<PointCloud> model = options.model;
  if (spec.kind == ExperimentKind::Registration && !model) {
    model = spec.fixed.model == "synthetic" ? synthetic_model_cloud(std::max<Index>(spec.fixed.points, 2000), spec.seed)
                                            : load_point_cloud(spec.fixed.model);
  }

  const std::size_t points = spec.sweep.size();
  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<std::vector<ResultRow>> per_job(points * trials);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t job = next++; job < per_job.size(); job = next++) {
      const std::size_t point = job / trials;
      const int trial = static_cast<int>(job % trials);
      const double value = spec.sweep[point];
      const FixedParams params = sweep_point(spec, value);
      per_job[job] = spec.kind == ExperimentKind::Registration
                         ? run_registration_trial(spec, params, value, trial, *model)
                         : run_regression_trial(spec, params, value, trial);
    }
  };

  const unsigned threads = std::min<std::size_t>(resolve_thread_count(options.threads), per_job.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<ResultRow> rows;
  rows.reserve(per_job.size() * spec.methods.size());
  for (std::size_t point = 0; point < points; ++point)
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
      for (std::size_t trial = 0; trial < trials; ++trial) rows.push_back(per_job[point * trials + trial][mi]);
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  struct Group {
    std::string experiment;
    Method method;
    double sweep_value;
    std::vector<const ResultRow*> rows;
  };
  std::vector<Group> groups;
  std::map<std::tuple<std::string, int, double>, std::size_t> index;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.experiment, static_cast<int>(r.method), r.sweep_value);
    auto [it, fresh] = index.try_emplace(key, groups.size());
    if (fresh) groups.push_back({r.experiment, r.method, r.sweep_value, {}});
    groups[it->second].rows.push_back(&r);
  }

  using Getter = double (*)(const ResultRow&);
  const std::pair<std::string_view, Getter> metrics[] = {
      {"perm_error_rate", [](const ResultRow& r) { return r.metrics.perm_error_rate; }},
      {"nmse_x", [](const ResultRow& r) { return r.metrics.nmse_x; }},
      {"nmse_x_db", [](const ResultRow& r) { return r.metrics.nmse_x_db; }},
      {"optimality_gap", [](const ResultRow& r) { return r.metrics.optimality_gap; }},
      {"reconstruction_mse", [](const ResultRow& r) { return r.metrics.reconstruction_mse; }},
      {"elapsed_ms", [](const ResultRow& r) { return r.metrics.elapsed.count() * 1e3; }},
  };

  std::vector<SummaryRow> out;
  for (const auto& g : groups) {
    int errors = 0;
    for (const auto* r : g.rows) errors += r->error.empty() ? 0 : 1;
    for (const auto& [name, get] : metrics) {
      std::vector<double> values;
      for (const auto* r : g.rows) {
        const double v = get(*r);
        if (r->error.empty() && std::isfinite(v)) values.push_back(v);
      }
      SummaryRow s;
      s.experiment = g.experiment;
      s.method = g.method;
      s.sweep_value = g.sweep_value;
      s.metric = std::string(name);
      s.count = static_cast<int>(values.size());
      s.errors = errors;
      s.mean = values.empty() ? kNaN : std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
      s.median = quantile(values, 0.5);
      s.q25 = quantile(values, 0.25);
      s.q75 = quantile(values, 0.75);
      out.push_back(std::move(s));
    }
  }
  return out;
}

void apply_desk_preset(ExperimentSpec& spec) {
  spec.trials = 30;
  auto cap_t = [](Index t) { return std::min<Index>(t, 10'000); };
  spec.fixed.t = cap_t(spec.fixed.t);
  if (spec.kind == ExperimentKind::LsVsT || spec.kind == ExperimentKind::LassoVsT) {
    std::vector<double> kept;
    for (double v : spec.sweep)
      if (v <= 10'000) kept.push_back(v);
    if (kept.empty()) kept.push_back(10'000);
    spec.sweep = std::move(kept);
  }
  if (!is_lasso_kind(spec.kind) && spec.kind != ExperimentKind::Registration && spec.fixed.m != 100) {
    const double scale = 100.0 / static_cast<double>(spec.fixed.m);
    spec.fixed.m = 100;
    spec.fixed.n = std::max<Index>(1, static_cast<Index>(std::llround(static_cast<double>(spec.fixed.n) * scale)));
    if (spec.kind == ExperimentKind::LsVsN)
      for (double& v : spec.sweep) v = std::max(1.0, std::round(v * scale));
  }
}

PointCloud synthetic_model_cloud(Index count, std::uint64_t seed) {
  detail::require(count >= 1, "synthetic_model_cloud: count must be >= 1");
  Rng rng(seed ^ 0x5eed5eedULL);
  PointCloud::Points pts(count, 3);
  // Bumpy, tilted ellipsoid with an off-axis lobe: no mirror symmetry survives
  // axis-wise normalization, so the centered Gram matrix has three distinct
  // leading eigenvalues.
  const Eigen::Matrix3d tilt = (Eigen::AngleAxisd(0.6, Eigen::Vector3d(1, 2, 3).normalized())).toRotationMatrix();
  for (Index i = 0; i < count; ++i) {
    Eigen::Vector3d dir;
    do {
      fill_gaussian(rng, dir);
    } while (dir.norm() < 1e-9);
    dir.normalize();
    const double theta = std::acos(std::clamp(dir.z(), -1.0, 1.0));
    const double phi = std::atan2(dir.y(), dir.x());
    double radius = 1.0 + 0.25 * std::sin(3.0 * theta + 0.7) * std::cos(2.0 * phi - 0.3) + 0.1 * std::cos(5.0 * phi);
    Eigen::Vector3d p = radius * Eigen::Vector3d(1.0 * dir.x(), 0.62 * dir.y(), 0.38 * dir.z());
    if (uniform01(rng) < 0.15) {
      // lobe
      p = Eigen::Vector3d(0.9, 0.5, 0.35) + 0.25 * dir.cwiseProduct(Eigen::Vector3d(1.0, 0.5, 0.8));
    }
    pts.row(i) = (tilt * p).transpose();
  }
  return PointCloud(std::move(pts));
}

}  // namespace slr
