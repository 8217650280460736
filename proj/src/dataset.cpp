#include "bbtk/dataset.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace bbtk::harness {

using nlohmann::json;
namespace fs = std::filesystem;

void write_iq_file(const std::string& path, const IqBuffer& buf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  std::vector<float> interleaved(static_cast<size_t>(buf.samples.size()) * 2);
  for (Eigen::Index i = 0; i < buf.samples.size(); ++i) {
    interleaved[2 * i] = static_cast<float>(buf.samples[i].real());
    interleaved[2 * i + 1] = static_cast<float>(buf.samples[i].imag());
  }
  out.write(reinterpret_cast<const char*>(interleaved.data()),
            static_cast<std::streamsize>(interleaved.size() * sizeof(float)));
  if (!out) throw IoError("short write: " + path);
}

IqBuffer read_iq_file(const std::string& path, double sample_rate_hz) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open: " + path);
  const std::streamsize bytes = in.tellg();
  if (bytes % (2 * sizeof(float)) != 0)
    throw IoError("file size is not a whole number of IQ pairs: " + path);
  in.seekg(0);
  std::vector<float> interleaved(static_cast<size_t>(bytes) / sizeof(float));
  in.read(reinterpret_cast<char*>(interleaved.data()), bytes);
  if (!in) throw IoError("short read: " + path);

  IqBuffer buf;
  buf.sample_rate_hz = sample_rate_hz;
  buf.samples.resize(static_cast<Eigen::Index>(interleaved.size() / 2));
  for (Eigen::Index i = 0; i < buf.samples.size(); ++i)
    buf.samples[i] = Cplx(interleaved[2 * i], interleaved[2 * i + 1]);
  return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a_hex(ss.str());
}

namespace {

json fileref_to_json(const FileRef& f) {
  return {{"path", f.path}, {"checksum", f.checksum}, {"n_samples", f.n_samples}};
}

FileRef fileref_from_json(const json& j) {
  return {j.at("path").get<std::string>(), j.at("checksum").get<std::string>(),
          j.at("n_samples").get<std::int64_t>()};
}

}  // namespace

json DatasetManifest::to_json() const {
  json j;
  j["format_version"] = format_version;
  j["master_seed"] = master_seed;
  j["config_hash"] = config_hash;
  j["samples"] = json::array();
  for (const auto& s : samples) {
    json e;
    e["id"] = s.id;
    e["seed"] = s.seed;
    e["sample_rate_hz"] = s.sample_rate_hz;
    e["scenario"] = s.scenario;
    e["mixture"] = fileref_to_json(s.mixture);
    e["components"] = json::array();
    for (const auto& c : s.components) e["components"].push_back(fileref_to_json(c));
    e["metrics"] = s.metrics;
    j["samples"].push_back(std::move(e));
  }
  return j;
}

DatasetManifest DatasetManifest::from_json(const json& j) {
  DatasetManifest m;
  m.format_version = j.at("format_version").get<std::string>();
  if (m.format_version != "1")
    throw IoError("unsupported manifest format_version " + m.format_version);
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.config_hash = j.at("config_hash").get<std::string>();
  for (const auto& e : j.at("samples")) {
    SampleEntry s;
    s.id = e.at("id").get<std::string>();
    s.seed = e.at("seed").get<std::uint64_t>();
    s.sample_rate_hz = e.at("sample_rate_hz").get<double>();
    s.scenario = e.at("scenario");
    s.mixture = fileref_from_json(e.at("mixture"));
    for (const auto& c : e.at("components")) s.components.push_back(fileref_from_json(c));
    s.metrics = e.value("metrics", json::object());
    m.samples.push_back(std::move(s));
  }
  return m;
}

std::string DatasetManifest::hash() const { return fnv1a_hex(to_json().dump()); }

void write_manifest(const DatasetManifest& manifest, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << manifest.to_json().dump(2) << "\n";
  if (!out) throw IoError("short write: " + path);
}

DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError(std::string("manifest parse failure: ") + e.what());
  }
  return DatasetManifest::from_json(j);
}

GenerationPlan plan_from_json(const json& j) {
  GenerationPlan plan;
  plan.master_seed = j.value("master_seed", std::uint64_t{1});
  for (const auto& t : j.at("templates")) {
    PlanTemplate tpl;
    tpl.count = t.value("count", 1);
    if (tpl.count < 1) throw InvalidParameter("plan: count must be >= 1");
    for (const auto& s : t.at("standards"))
      tpl.standards.push_back(standard_from_string(s.get<std::string>()));
    if (tpl.standards.empty() || tpl.standards.size() > 4)
      throw InvalidParameter("plan: 1..4 standards per template");
    tpl.duration_s = t.value("duration_s", 0.002);
    tpl.common_rate_hz = t.value("common_rate_hz", 15.36e6);
    tpl.power_db_min = t.value("power_db_min", -6.0);
    tpl.power_db_max = t.value("power_db_max", 0.0);
    tpl.freq_offset_abs_max_hz = t.value("freq_offset_abs_max_hz", 0.0);
    tpl.snr_db_min = t.value("snr_db_min", 15.0);
    tpl.snr_db_max = t.value("snr_db_max", 25.0);
    tpl.doppler_hz = t.value("doppler_hz", 0.0);
    tpl.shadowing_sigma_db = t.value("shadowing_sigma_db", 0.0);
    tpl.profile = t.value("profile", std::string("flat"));
    tpl.id_prefix = t.value("id_prefix", std::string("sample"));
    plan.templates.push_back(std::move(tpl));
  }
  return plan;
}

ScenarioSpec expand_template(const PlanTemplate& tpl, std::uint64_t master_seed,
                             std::uint64_t sample_index, int index_in_template) {
  ScenarioSpec spec;
  spec.seed = Rng::derive(master_seed, sample_index);
  spec.id = tpl.id_prefix + "_" + std::to_string(index_in_template);
  spec.duration_s = tpl.duration_s;
  spec.common_rate_hz = tpl.common_rate_hz;

  Rng draw(spec.seed, 0x9145);
  spec.noise_snr_db = draw.uniform(tpl.snr_db_min, tpl.snr_db_max);
  for (const StandardKind kind : tpl.standards) {
    SourceSpec src;
    src.standard = kind;
    src.config = default_config(kind);
    src.placement.power_db = draw.uniform(tpl.power_db_min, tpl.power_db_max);
    src.placement.freq_offset_hz =
        tpl.freq_offset_abs_max_hz > 0.0
            ? draw.uniform(-tpl.freq_offset_abs_max_hz, tpl.freq_offset_abs_max_hz)
            : 0.0;
    src.profile = chan::standard_profile(tpl.profile);
    src.fading.doppler_hz = tpl.doppler_hz;
    src.fading.shadowing_sigma_db = tpl.shadowing_sigma_db;
    spec.sources.push_back(std::move(src));
  }
  spec.validate();
  return spec;
}

DatasetManifest generate_dataset(const GenerationPlan& plan, const std::string& out_dir) {
  if (plan.templates.empty()) throw InvalidParameter("generate_dataset: empty plan");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  DatasetManifest manifest;
  manifest.master_seed = plan.master_seed;
  {
    json plan_summary;
    plan_summary["master_seed"] = plan.master_seed;
    plan_summary["templates"] = json::array();
    for (const auto& t : plan.templates) {
      json tj;
      tj["count"] = t.count;
      tj["id_prefix"] = t.id_prefix;
      for (const auto& s : t.standards) tj["standards"].push_back(to_string(s));
      plan_summary["templates"].push_back(std::move(tj));
    }
    manifest.config_hash = fnv1a_hex(plan_summary.dump());
  }

  struct Throughput {
    double generate_s = 0.0;
    double signal_s = 0.0;
    std::int64_t n_samples = 0;
  };
  std::map<std::string, Throughput> throughput;

  std::uint64_t sample_index = 0;
  for (const auto& tpl : plan.templates) {
    for (int k = 0; k < tpl.count; ++k, ++sample_index) {
      const ScenarioSpec spec = expand_template(tpl, plan.master_seed, sample_index, k);
      const auto t0 = std::chrono::steady_clock::now();
      const ScenarioResult result = run_scenario(spec);
      const double gen_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      for (const auto& src : spec.sources) {
        Throughput& row = throughput[to_string(src.standard)];
        row.generate_s += gen_s / static_cast<double>(spec.sources.size());
        row.signal_s += spec.duration_s;
        row.n_samples += result.mixture.samples.size();
      }

      SampleEntry entry;
      entry.id = spec.id;
      entry.seed = spec.seed;
      entry.sample_rate_hz = spec.common_rate_hz;
      entry.scenario = scenario_to_json(spec);

      const std::string mix_name = spec.id + "_mixture.iq";
      write_iq_file((fs::path(out_dir) / mix_name).string(), result.mixture);
      entry.mixture = {mix_name, file_checksum((fs::path(out_dir) / mix_name).string()),
                       result.mixture.samples.size()};
      for (size_t c = 0; c < result.components.size(); ++c) {
        const std::string name = spec.id + "_src" + std::to_string(c) + ".iq";
        write_iq_file((fs::path(out_dir) / name).string(), result.components[c]);
        entry.components.push_back(
            {name, file_checksum((fs::path(out_dir) / name).string()),
             result.components[c].samples.size()});
      }

      entry.metrics = {{"papr_db", result.mixture_metrics.papr_db},
                       {"obw_hz", result.mixture_metrics.obw_hz},
                       {"mean_power_db", result.mixture_metrics.mean_power_db}};
      manifest.samples.push_back(std::move(entry));
    }
  }

  write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());

  // Timing varies run to run, so the throughput report lives next to the
  // manifest instead of inside the (hash-stable) manifest itself.
  json report;
  for (const auto& [standard, row] : throughput) {
    report[standard] = {{"samples_per_s", row.n_samples / std::max(row.generate_s, 1e-12)},
                        {"realtime_multiple", row.signal_s / std::max(row.generate_s, 1e-12)},
                        {"signal_s", row.signal_s}};
  }
  std::ofstream tp((fs::path(out_dir) / "throughput.json").string());
  if (tp) tp << report.dump(2) << "\n";
  return manifest;
}

LoadedSample read_sample(const DatasetManifest& manifest, const std::string& dir,
                         const std::string& id) {
  const SampleEntry* entry = nullptr;
  for (const auto& s : manifest.samples)
    if (s.id == id) entry = &s;
  if (entry == nullptr) throw InvalidParameter("read_sample: unknown id '" + id + "'");

  auto load = [&](const FileRef& ref) {
    const std::string path = (fs::path(dir) / ref.path).string();
    if (file_checksum(path) != ref.checksum)
      throw IoError("checksum mismatch: " + ref.path);
    IqBuffer buf = read_iq_file(path, entry->sample_rate_hz);
    if (buf.samples.size() != ref.n_samples)
      throw IoError("sample count mismatch: " + ref.path);
    return buf;
  };

  LoadedSample out;
  out.mixture = load(entry->mixture);
  for (const auto& c : entry->components) out.components.push_back(load(c));
  out.scenario = entry->scenario;
  return out;
}

std::vector<std::string> verify_dataset(const DatasetManifest& manifest,
                                        const std::string& dir) {
  std::vector<std::string> failures;
  for (const auto& s : manifest.samples) {
    auto check = [&](const FileRef& ref) {
      const std::string path = (fs::path(dir) / ref.path).string();
      try {
        if (file_checksum(path) != ref.checksum) {
          failures.push_back(s.id + ": checksum mismatch for " + ref.path);
          return;
        }
        std::error_code ec;
        const auto bytes = fs::file_size(path, ec);
        if (ec || static_cast<std::int64_t>(bytes) != ref.n_samples * 8)
          failures.push_back(s.id + ": size mismatch for " + ref.path);
      } catch (const std::exception& e) {
        failures.push_back(s.id + ": " + e.what());
      }
    };
    check(s.mixture);
    for (const auto& c : s.components) check(c);
  }
  return failures;
}

std::vector<BenchRow> run_benchmark(double duration_s, int reps) {
  if (!(duration_s > 0.0) || reps < 1)
    throw InvalidParameter("run_benchmark: need positive duration and reps");

  std::vector<BenchRow> rows;
  const StandardKind kinds[] = {StandardKind::GSM, StandardKind::UMTS,
                                StandardKind::LTE, StandardKind::NR};
  for (const StandardKind kind : kinds) {
    WaveformConfig cfg = default_config(kind);
    if (kind == StandardKind::LTE) {
      auto& c = std::get<ofdm::OfdmConfig>(cfg);
      c.bandwidth_hz = 20e6;
      c.modulation = ofdm::Modulation::QAM64;
    }
    if (kind == StandardKind::NR) {
      auto& c = std::get<ofdm::OfdmConfig>(cfg);
      c.bandwidth_hz = 100e6;
      c.numerology_mu = 1;
      c.modulation = ofdm::Modulation::QAM64;
    }

    BenchRow row;
    row.standard = to_string(kind);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < reps; ++r) {
      Rng rng(17, static_cast<std::uint64_t>(r));
      const auto start = std::chrono::steady_clock::now();
      const IqBuffer buf = generate_waveform(kind, cfg, duration_s, rng);
      const auto stop = std::chrono::steady_clock::now();
      const double elapsed = std::chrono::duration<double>(stop - start).count();
      if (elapsed < best) {
        best = elapsed;
        row.sample_rate_hz = buf.sample_rate_hz;
        row.signal_s = buf.duration_s();
      }
    }
    row.elapsed_s = best;
    row.realtime_multiple = row.signal_s / best;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bbtk::harness
