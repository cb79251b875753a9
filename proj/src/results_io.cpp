#include "slr/experiment.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace slr {
namespace {

std::string num(double v) { return fmt::format("{:.9g}", v); }

double parse_num(const std::string& tok, std::size_t line_no) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(fmt::format("results line {}: bad number '{}'", line_no, tok));
  return v;
}

// JSON has no NaN; failed metrics become null.
nlohmann::json json_num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

ResultFormat parse_result_format(std::string_view name) {
  if (name == "csv") return ResultFormat::Csv;
  if (name == "jsonl") return ResultFormat::Jsonl;
  throw InvalidArgument(fmt::format("unknown result format '{}'", name));
}

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kResultCsvHeader << '\n';
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out << r.experiment << ',' << to_string(r.method) << ',' << num(r.sweep_value) << ',' << r.trial << ','
        << num(m.perm_error_rate) << ',' << num(m.nmse_x) << ',' << num(m.nmse_x_db) << ',' << num(m.optimality_gap)
        << ',' << num(m.reconstruction_mse) << ',' << num(m.elapsed.count() * 1e3) << '\n';
  }
}

void write_results_jsonl(const std::vector<ResultRow>& rows, std::ostream& out) {
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["method"] = to_string(r.method);
    j["sweep_value"] = r.sweep_value;
    j["trial"] = r.trial;
    j["perm_error_rate"] = json_num(m.perm_error_rate);
    j["nmse_x"] = json_num(m.nmse_x);
    j["nmse_x_db"] = json_num(m.nmse_x_db);
    j["optimality_gap"] = json_num(m.optimality_gap);
    j["reconstruction_mse"] = json_num(m.reconstruction_mse);
    j["elapsed_ms"] = m.elapsed.count() * 1e3;
    j["error"] = r.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.error);
    out << j.dump() << '\n';
  }
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << "experiment,method,sweep_value,metric,count,errors,mean,median,q25,q75\n";
  for (const auto& s : rows) {
    out << s.experiment << ',' << to_string(s.method) << ',' << num(s.sweep_value) << ',' << s.metric << ','
        << s.count << ',' << s.errors << ',' << num(s.mean) << ',' << num(s.median) << ',' << num(s.q25) << ','
        << num(s.q75) << '\n';
  }
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path, ResultFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
  if (format == ResultFormat::Csv)
    write_results_csv(rows, out);
  else
    write_results_jsonl(rows, out);
  out.flush();
  if (!out) throw Error(fmt::format("write failed for '{}'", path.string()));
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kResultCsvHeader) throw ParseError("results: missing or unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw ParseError(fmt::format("results line {}: expected 10 fields, found {}", line_no, f.size()));
    ResultRow r;
    r.experiment = f[0];
    r.method = parse_method(f[1]);
    r.sweep_value = parse_num(f[2], line_no);
    r.trial = static_cast<int>(parse_num(f[3], line_no));
    r.metrics.perm_error_rate = parse_num(f[4], line_no);
    r.metrics.nmse_x = parse_num(f[5], line_no);
    r.metrics.nmse_x_db = parse_num(f[6], line_no);
    r.metrics.optimality_gap = parse_num(f[7], line_no);
    r.metrics.reconstruction_mse = parse_num(f[8], line_no);
    r.metrics.elapsed = std::chrono::duration<double>(parse_num(f[9], line_no) / 1e3);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace slr
