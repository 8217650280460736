// Dataset read/write: raw float32 interleaved IQ files, a JSON manifest with
// per-file checksums, plan-driven corpus generation and the throughput
// benchmark.
#pragma once

#include "bbtk/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bbtk::harness {

/// Raw interleaved little-endian float32 I/Q pairs, no header. Metadata lives
/// in the manifest (or a JSON sidecar for standalone files).
void write_iq_file(const std::string& path, const IqBuffer& buf);
IqBuffer read_iq_file(const std::string& path, double sample_rate_hz);

/// FNV-1a 64-bit over the file bytes, hex encoded.
std::string file_checksum(const std::string& path);
std::string fnv1a_hex(const std::string& bytes);

struct FileRef {
  std::string path;  // relative to the manifest directory
  std::string checksum;
  std::int64_t n_samples = 0;
};

struct SampleEntry {
  std::string id;
  std::uint64_t seed = 0;
  double sample_rate_hz = 0.0;
  nlohmann::json scenario;
  FileRef mixture;
  std::vector<FileRef> components;
  nlohmann::json metrics;
};

struct DatasetManifest {
  std::string format_version = "1";
  std::uint64_t master_seed = 0;
  std::string config_hash;
  std::vector<SampleEntry> samples;

  nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& j);
  /// FNV-1a over the canonical JSON dump.
  std::string hash() const;
};

void write_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest read_manifest(const std::string& path);

/// One plan row: a scenario template expanded `count` times with randomized
/// placements drawn from the given ranges.
struct PlanTemplate {
  int count = 1;
  std::vector<StandardKind> standards;      // one source per entry
  double duration_s = 0.002;
  double common_rate_hz = 15.36e6;
  double power_db_min = -6.0, power_db_max = 0.0;
  double freq_offset_abs_max_hz = 0.0;
  double snr_db_min = 15.0, snr_db_max = 25.0;
  double doppler_hz = 0.0;
  double shadowing_sigma_db = 0.0;
  std::string profile = "flat";
  std::string id_prefix = "sample";
};

struct GenerationPlan {
  std::uint64_t master_seed = 1;
  std::vector<PlanTemplate> templates;
};

GenerationPlan plan_from_json(const nlohmann::json& j);

/// Expands the scenario template for one sample; sample seeds derive from
/// (master_seed, global sample index) only, so subsets regenerate
/// independently.
ScenarioSpec expand_template(const PlanTemplate& tpl, std::uint64_t master_seed,
                             std::uint64_t sample_index, int index_in_template);

DatasetManifest generate_dataset(const GenerationPlan& plan, const std::string& out_dir);

struct LoadedSample {
  IqBuffer mixture;
  std::vector<IqBuffer> components;
  nlohmann::json scenario;
};

/// Lossless reload with checksum verification; a truncated or altered file is
/// an IoError, an unknown id an InvalidParameter.
LoadedSample read_sample(const DatasetManifest& manifest, const std::string& dir,
                         const std::string& id);

/// Checks every referenced file against its checksum and sample count.
/// Returns the list of failures (empty means the manifest verifies).
std::vector<std::string> verify_dataset(const DatasetManifest& manifest,
                                        const std::string& dir);

struct BenchRow {
  std::string standard;
  double sample_rate_hz = 0.0;
  double signal_s = 0.0;
  double elapsed_s = 0.0;
  double realtime_multiple = 0.0;
};

/// Generates a fixed signal duration per standard and reports wall-clock
/// real-time multiples (best of `reps`).
std::vector<BenchRow> run_benchmark(double duration_s = 0.01, int reps = 3);

}  // namespace bbtk::harness
