// slr: benchmark runner and point-set registration front-end.

#include "slr/experiment.hpp"
#include "slr/point_cloud_io.hpp"
#include "slr/random.hpp"
#include "slr/registration.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

int run_bench(const std::string& spec_path, const std::string& preset, std::optional<int> trials,
              std::optional<std::uint64_t> seed, const std::string& out_path, const std::string& format,
              unsigned threads) {
  auto spec = slr::load_experiment_spec(spec_path);
  if (preset == "desk") slr::apply_desk_preset(spec);
  if (trials) spec.trials = *trials;
  if (seed) spec.seed = *seed;
  const auto fmt_kind = slr::parse_result_format(format);

  slr::RunOptions options;
  options.threads = threads;
  const auto rows = slr::run_experiment(spec, options);
  slr::write_results(rows, out_path, fmt_kind);

  const auto summary = slr::summarize(rows);
  const std::string summary_path = out_path + ".summary.csv";
  {
    std::ofstream out(summary_path);
    if (!out) throw slr::Error(fmt::format("cannot write '{}'", summary_path));
    slr::write_summary_csv(summary, out);
  }

  fmt::print("{} ({}): {} sweep points x {} trials x {} methods -> {} rows\n", spec.id, slr::to_string(spec.kind),
             spec.sweep.size(), spec.trials, spec.methods.size(), rows.size());
  fmt::print("{:>12} {:>10} {:>16} {:>14} {:>7}\n", "sweep", "method", "perm_err(mean)", "nmse_dB(med)", "errors");
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const auto& s = summary[i];
    if (s.metric != "perm_error_rate") continue;
    const auto& db = summary[i + 2];  // nmse_x_db follows nmse_x
    fmt::print("{:>12.6g} {:>10} {:>16.4g} {:>14.4g} {:>7}\n", s.sweep_value, slr::to_string(s.method), s.mean,
               db.median, s.errors);
  }
  fmt::print("wrote {} and {}\n", out_path, summary_path);
  return 0;
}

int run_register(const std::string& q_path, const std::string& p_path, double sigma2, std::uint64_t seed,
                 const std::string& out_path) {
  slr::PointCloud q = slr::load_point_cloud(q_path);
  const slr::PointCloud p = slr::load_point_cloud(p_path);
  if (sigma2 > 0) {
    slr::Rng rng(seed);
    slr::PointCloud::Points noise(q.size(), 3);
    slr::fill_gaussian(rng, noise, std::sqrt(sigma2));
    q = slr::PointCloud(q.points + noise);
  }
  const slr::RegistrationScene scene(p, q);
  const auto result = slr::register_point_sets(scene);
  const auto rebuilt = slr::reconstruct_model(scene.P, result.perm, result.rotation, result.translation);
  const double rms = std::sqrt((rebuilt - scene.Q.points).squaredNorm() / static_cast<double>(q.size()));

  const Eigen::IOFormat rowfmt(Eigen::FullPrecision, 0, " ", "\n", "  ", "");
  std::cout << "rotation:\n" << result.rotation.format(rowfmt) << "\n";
  std::cout << "translation:\n" << result.translation.transpose().format(rowfmt) << "\n";
  fmt::print("points: {}  rms reconstruction residual: {:.6g}\n", q.size(), rms);

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw slr::Error(fmt::format("cannot write '{}'", out_path));
    out << "q_index,p_index,x,y,z,residual\n";
    const slr::Permutation inv = result.perm.inverse();
    for (slr::Index qi = 0; qi < q.size(); ++qi) {
      const double res = (rebuilt.row(qi) - scene.Q.points.row(qi)).norm();
      out << fmt::format("{},{},{:.9g},{:.9g},{:.9g},{:.9g}\n", qi, inv[qi], rebuilt(qi, 0), rebuilt(qi, 1),
                         rebuilt(qi, 2), res);
    }
    fmt::print("wrote {}\n", out_path);
  }
  return 0;
}

int run_scene(const std::string& model_path, slr::Index points, double sigma2, std::uint64_t seed,
              const std::string& q_out, const std::string& p_out, const std::string& truth_out) {
  const slr::PointCloud model =
      model_path == "synthetic" ? slr::synthetic_model_cloud(std::max<slr::Index>(points, 2000), seed)
                                : slr::load_point_cloud(model_path);
  const auto gen = slr::generate_scene(model, points, sigma2, seed);
  auto format_of = [](const std::string& path) {
    return path.size() > 4 && path.substr(path.size() - 4) == ".ply" ? slr::CloudFormat::AsciiPly
                                                                      : slr::CloudFormat::Xyz;
  };
  slr::write_point_cloud(gen.scene.Q, q_out, format_of(q_out));
  slr::write_point_cloud(gen.scene.P, p_out, format_of(p_out));
  if (!truth_out.empty()) {
    std::ofstream out(truth_out);
    out << "p_index,q_index\n";
    for (slr::Index k = 0; k < gen.truth.perm.size(); ++k) out << k << ',' << gen.truth.perm[k] << '\n';
  }
  fmt::print("wrote {} (model, noisy) and {} (observed)\n", q_out, p_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shuffled linear regression by spectral matching: benchmarks and point-set registration"};
  app.require_subcommand(1);

  auto* bench = app.add_subcommand("bench", "Run a Monte-Carlo experiment described by a YAML spec file");
  std::string spec_path, preset, out_path = "results.csv", format = "csv";
  std::optional<int> trials;
  std::optional<std::uint64_t> bench_seed;
  unsigned threads = 0;
  bench->add_option("spec-file", spec_path, "Experiment spec (YAML)")->required()->check(CLI::ExistingFile);
  bench->add_option("--preset", preset, "Scale preset")->check(CLI::IsMember({"desk"}));
  bench->add_option("--trials", trials, "Override the number of trials")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "Override the base seed");
  bench->add_option("--out", out_path, "Result file (a .summary.csv is written next to it)");
  bench->add_option("--format", format, "Result format")->check(CLI::IsMember({"csv", "jsonl"}));
  bench->add_option("--threads", threads, "Worker threads (SLR_THREADS caps this)");

  auto* reg = app.add_subcommand("register", "Register an observed point set P to a model point set Q");
  std::string q_path, p_path, aligned_out;
  double sigma2 = 0;
  std::uint64_t reg_seed = 1;
  reg->add_option("Q", q_path, "Model point set (PLY or XYZ)")->required()->check(CLI::ExistingFile);
  reg->add_option("P", p_path, "Observed point set (PLY or XYZ)")->required()->check(CLI::ExistingFile);
  reg->add_option("--sigma2", sigma2, "Perturb Q with N(0, sigma2) coordinate noise before registering")
      ->check(CLI::NonNegativeNumber);
  reg->add_option("--seed", reg_seed, "Seed for the --sigma2 perturbation");
  reg->add_option("--out", aligned_out, "CSV of the matched, model-frame reconstruction");

  auto* scene = app.add_subcommand("scene", "Sample a registration scene from a model point set");
  std::string model_path = "synthetic", q_out, p_out, truth_out;
  slr::Index points = 200;
  double scene_sigma2 = 1e-4;
  std::uint64_t scene_seed = 1;
  scene->add_option("model", model_path, "Model point set (PLY or XYZ), or 'synthetic'");
  scene->add_option("--points", points, "Points to sample")->check(CLI::PositiveNumber);
  scene->add_option("--sigma2", scene_sigma2, "Coordinate noise variance of the model copy")
      ->check(CLI::NonNegativeNumber);
  scene->add_option("--seed", scene_seed, "Seed");
  scene->add_option("--q-out", q_out, "Noisy model output (.ply or .xyz)")->required();
  scene->add_option("--p-out", p_out, "Observed set output (.ply or .xyz)")->required();
  scene->add_option("--truth", truth_out, "Ground-truth correspondence CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) return run_bench(spec_path, preset, trials, bench_seed, out_path, format, threads);
    if (*reg) return run_register(q_path, p_path, sigma2, reg_seed, aligned_out);
    if (*scene) return run_scene(model_path, points, scene_sigma2, scene_seed, q_out, p_out, truth_out);
  } catch (const slr::Error& e) {
    fmt::print(stderr, "error [{}]: {}\n", e.tag(), e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
