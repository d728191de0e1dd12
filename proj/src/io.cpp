#include "unifdr/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace unifdr::io {

namespace {

void require_stream(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  // Shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

IngestError::IngestError(const std::string& message, std::size_t row)
    : std::runtime_error(message), row_(row) {}

void write_sample_csv(const std::filesystem::path& path, const LabeledPValues& sample) {
  std::ofstream out(path);
  require_stream(out, path);
  out << "index,p,h\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out << (i + 1) << ',' << format_double(sample.p[i]) << ',';
    if (sample.labeled()) out << static_cast<int>(sample.h[i]);
    out << '\n';
  }
}

LabeledPValues read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());

  LabeledPValues sample;
  std::string line;
  std::size_t row = 0;
  bool any_label = false;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("index", 0) == 0) continue;  // header
    }
    ++row;
    const auto fields = split_csv_line(line);
    if (fields.size() < 2) throw IngestError("row " + std::to_string(row) + ": expected index,p[,h]", row);
    char* end = nullptr;
    const double p = std::strtod(fields[1].c_str(), &end);
    if (end == fields[1].c_str()) {
      throw IngestError("row " + std::to_string(row) + ": p is not a number", row);
    }
    if (!(p > 0.0 && p < 1.0)) {
      throw IngestError("row " + std::to_string(row) + ": p = " + fields[1] +
                            " outside the open interval (0,1)",
                        row);
    }
    sample.p.push_back(p);
    if (fields.size() >= 3 && !fields[2].empty()) {
      const int h = std::atoi(fields[2].c_str());
      if (h != 0 && h != 1) throw IngestError("row " + std::to_string(row) + ": h must be 0 or 1", row);
      sample.h.push_back(static_cast<std::uint8_t>(h));
      any_label = true;
    } else {
      sample.h.push_back(0);
    }
  }
  if (!any_label) sample.h.clear();
  if (sample.p.empty()) throw std::runtime_error("empty sample file: " + path.string());
  return sample;
}

void write_bin_counts_csv(const std::filesystem::path& path,
                          const std::vector<std::size_t>& counts, double upto) {
  std::ofstream out(path);
  require_stream(out, path);
  out << "bin_mid,count\n";
  const double width = 1.0 / static_cast<double>(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const double mid = (static_cast<double>(j) + 0.5) * width;
    if (mid > upto) break;
    out << format_double(mid) << ',' << counts[j] << '\n';
  }
}

void write_replications_csv(const std::filesystem::path& path,
                            const sim::PipelineResult& result) {
  std::ofstream out(path);
  require_stream(out, path);
  out << "rep,theta_hat,delta_hat,eps_hat,fdr_hat,fdp,tpp\n";
  for (std::size_t i = 0; i < result.replications.size(); ++i) {
    const auto& r = result.replications[i];
    out << (i + 1) << ',' << format_double(r.theta_hat) << ',' << format_double(r.delta_hat)
        << ',' << format_double(r.eps_hat) << ',' << format_double(r.fdr_hat) << ','
        << format_double(r.fdp) << ',' << format_double(r.tpp) << '\n';
  }
  const auto line = [&](const char* tag, auto pick) {
    out << tag << ',' << format_double(pick(result.theta_hat)) << ','
        << format_double(pick(result.delta_hat)) << ',' << format_double(pick(result.eps_hat))
        << ',' << format_double(pick(result.fdr_hat)) << ',' << format_double(pick(result.fdp))
        << ',' << format_double(pick(result.tpp)) << '\n';
  };
  line("mean", [](const sim::MetricSummary& s) { return s.mean; });
  line("se", [](const sim::MetricSummary& s) { return s.se; });
}

void write_table1_csv(const std::filesystem::path& path,
                      const std::vector<sim::EnrichmentResult>& results) {
  std::ofstream out(path);
  require_stream(out, path);
  out << "family,epsilon,xi,mu,m,deleted,true_alternatives,theoretical_remaining,"
         "sim_mean,sim_se\n";
  for (const auto& r : results) {
    out << family_name(r.row.model.family) << ',' << format_double(r.row.model.epsilon) << ','
        << format_double(r.row.xi) << ',' << format_double(r.row.model.mu) << ',' << r.row.m
        << ',' << r.deletions << ',' << format_double(r.true_alternatives) << ',';
    if (r.theoretical_valid) out << format_double(r.theoretical_remaining);
    out << ',' << format_double(r.retained_alternatives.mean) << ','
        << format_double(r.retained_alternatives.se) << '\n';
  }
}

void write_asymptotic_csv(const std::filesystem::path& path,
                          const std::vector<sim::AsymptoticPoint>& points) {
  std::ofstream out(path);
  require_stream(out, path);
  out << "m,epsilon_m,mu_m,vacuous,fe_fraction_mean,fe_fraction_se\n";
  for (const auto& pt : points) {
    out << pt.m << ',' << format_double(pt.epsilon_m) << ',' << format_double(pt.mu_m) << ','
        << (pt.vacuous ? 1 : 0) << ',';
    if (!pt.vacuous) {
      out << format_double(pt.fe_fraction.mean) << ',' << format_double(pt.fe_fraction.se);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

void write_mode_convergence_csv(const std::filesystem::path& path,
                                const std::vector<sim::ModeConvergencePoint>& points) {
  std::ofstream out(path);
  require_stream(out, path);
  out << "m,median_abs_error\n";
  for (const auto& pt : points) {
    out << pt.m << ',' << format_double(pt.median_abs_error) << '\n';
  }
}

nlohmann::ordered_json report_to_json(const FdrReport& report) {
  nlohmann::ordered_json j;
  j["theta_hat"] = report.theta;
  j["xi"] = report.xi;
  j["alpha"] = report.alpha;
  j["epsilon_hat"] = report.epsilon_hat;
  j["W"] = report.W;
  j["R"] = report.R;
  j["delta_hat"] = report.delta_hat;
  j["fdr_hat"] = report.fdr_hat;
  j["pfdr_hat"] = std::isfinite(report.pfdr_hat) ? nlohmann::ordered_json(report.pfdr_hat)
                                                 : nlohmann::ordered_json("inf");
  nlohmann::ordered_json rejected = nlohmann::ordered_json::array();
  for (std::size_t idx : report.rejected) rejected.push_back(idx + 1);  // 1-based, as in CSV
  j["rejected"] = std::move(rejected);
  return j;
}

nlohmann::ordered_json confusion_to_json(const ConfusionCounts& cc) {
  nlohmann::ordered_json j;
  j["V"] = cc.V;
  j["S"] = cc.S;
  j["R"] = cc.R;
  j["alternatives"] = cc.alternatives;
  j["fdp"] = cc.fdp();
  j["tpp"] = cc.tpp();
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  require_stream(out, path);
  out << j.dump(2) << '\n';
}

void write_manifest(const std::filesystem::path& output_path, const std::string& command,
                    const nlohmann::ordered_json& params, std::uint64_t master_seed) {
  nlohmann::ordered_json j;
  j["tool"] = "unifdr";
  j["version"] = kArtifactVersion;
  j["command"] = command;
  j["seed"] = master_seed;
  j["params"] = params;
  j["output"] = output_path.filename().string();
  std::filesystem::path mpath = output_path;
  mpath += ".manifest.json";
  write_json(mpath, j);
}

}  // namespace unifdr::io
