#pragma once

#include "slr/metrics.hpp"
#include "slr/model.hpp"
#include "slr/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slr {

enum class ExperimentKind {
  LsVsSnr,
  LsVsPe,
  LsVsT,
  LsVsN,
  LassoVsSnr,
  LassoVsT,
  LassoVsSparsity,
  Registration,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);
std::string_view to_string(Method method);
Method parse_method(std::string_view name);

bool is_lasso_kind(ExperimentKind kind);

/// Parameters held fixed across a sweep; the swept one is overridden per point.
struct FixedParams {
  Index m = 200;
  Index n = 100;
  Index t = 10'000;
  double snr_db = 20.0;
  double p_e = 0.5;
  double s = 2.0;
  double rho = 1.0;
  std::optional<Index> max_components;  // empty: every eligible component
  double gap_threshold = 1e-3;
  // registration
  Index points = 200;
  double sigma2 = 1e-4;
  std::string model = "synthetic";  // point-cloud path, or "synthetic"
};

struct ExperimentSpec {
  std::string id;
  ExperimentKind kind = ExperimentKind::LsVsSnr;
  /// Values of the swept parameter: snr_db, p_e, t, n, s/n or sigma2 depending on kind.
  std::vector<double> sweep;
  FixedParams fixed;
  int trials = 300;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::Spectral, Method::Oracle, Method::Spatial, Method::Leverage, Method::Threshold};

  void validate() const;
};

/// Parameters of one sweep point.
FixedParams sweep_point(const ExperimentSpec& spec, double value);

struct ResultRow {
  std::string experiment;
  Method method = Method::Spectral;
  double sweep_value = 0;
  int trial = 0;
  TrialMetrics metrics;
  std::string error;  // error tag; empty on success
};

struct RunOptions {
  /// 0: SLR_THREADS if set, else hardware concurrency.
  unsigned threads = 0;
  /// Model cloud for registration sweeps; falls back to fixed.model.
  std::optional<PointCloud> model;
};

/// Runs every (sweep point, trial, method) combination. Rows come back sorted
/// by sweep-point order, method order in the spec, and trial, so the output is
/// independent of the thread count. Solver failures are recorded per row.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Worker count from SLR_THREADS (if set and positive) capped by `requested`.
unsigned resolve_thread_count(unsigned requested);

struct SummaryRow {
  std::string experiment;
  Method method = Method::Spectral;
  double sweep_value = 0;
  std::string metric;
  int count = 0;   // successful trials
  int errors = 0;  // failed trials
  double mean = 0;
  double median = 0;
  double q25 = 0;
  double q75 = 0;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

enum class ResultFormat { Csv, Jsonl };
ResultFormat parse_result_format(std::string_view name);

inline constexpr std::string_view kResultCsvHeader =
    "experiment,method,sweep_value,trial,perm_error_rate,nmse_x,nmse_x_db,optimality_gap,reconstruction_mse,elapsed_ms";

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path, ResultFormat format);
void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_results_jsonl(const std::vector<ResultRow>& rows, std::ostream& out);
void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

/// Parses a CSV produced by write_results_csv (error tags are not stored in CSV).
std::vector<ResultRow> read_results_csv(std::istream& in);

/// Reads an experiment description (YAML) from disk.
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
ExperimentSpec parse_experiment_spec(std::string_view text, const std::filesystem::path& base_dir = {});

/// Scales a spec down to the desk preset: m = 100 with n scaled alongside for
/// least-squares kinds, t capped at 10^4 and 30 trials.
void apply_desk_preset(ExperimentSpec& spec);

/// Deterministic non-symmetric point cloud used when no model file is given.
PointCloud synthetic_model_cloud(Index count, std::uint64_t seed);

}  // namespace slr
