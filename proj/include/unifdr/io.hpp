// File formats: sample CSV (index,p,h), bin-count CSV, replication CSV with
// a trailing summary block, JSON analysis reports, and the run manifest that
// accompanies every emitted file.  All output is deterministic: fixed column
// order, fixed float formatting, no timestamps.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "unifdr/fdr.hpp"
#include "unifdr/mixtures.hpp"
#include "unifdr/sim.hpp"

namespace unifdr::io {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Shortest-roundtrip decimal rendering of a double.
std::string format_double(double v);

// Parse error or out-of-domain value in an input file; carries the 1-based
// data row so the message can name it.
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& message, std::size_t row);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

void write_sample_csv(const std::filesystem::path& path, const LabeledPValues& sample);

// Reads index,p[,h] with a header line.  Every p must lie strictly in (0,1).
LabeledPValues read_sample_csv(const std::filesystem::path& path);

void write_bin_counts_csv(const std::filesystem::path& path,
                          const std::vector<std::size_t>& counts, double upto);

void write_replications_csv(const std::filesystem::path& path,
                            const sim::PipelineResult& result);

void write_table1_csv(const std::filesystem::path& path,
                      const std::vector<sim::EnrichmentResult>& results);

void write_asymptotic_csv(const std::filesystem::path& path,
                          const std::vector<sim::AsymptoticPoint>& points);

void write_mode_convergence_csv(const std::filesystem::path& path,
                                const std::vector<sim::ModeConvergencePoint>& points);

nlohmann::ordered_json report_to_json(const FdrReport& report);
nlohmann::ordered_json confusion_to_json(const ConfusionCounts& cc);

// Writes `<path>` plus `<path>.manifest.json` describing how to re-run it.
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

void write_manifest(const std::filesystem::path& output_path, const std::string& command,
                    const nlohmann::ordered_json& params, std::uint64_t master_seed);

}  // namespace unifdr::io
