// bbtk command line: waveform generation, scenario mixing, dataset
// production, measurement, spectrogram export, separation and benchmarks.
#include "bbtk/dataset.hpp"
#include "bbtk/dsp.hpp"
#include "bbtk/separation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using nlohmann::json;
namespace fs = std::filesystem;
using namespace bbtk;
using namespace bbtk::harness;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InvalidParameter(std::string("JSON parse failure in ") + path + ": " + e.what());
  }
  return j;
}

void write_sidecar(const std::string& iq_path, const IqBuffer& buf) {
  json meta = {{"sample_rate_hz", buf.sample_rate_hz},
               {"label", buf.label},
               {"seed", buf.seed},
               {"n_samples", buf.samples.size()}};
  std::ofstream out(iq_path + ".json");
  if (!out) throw IoError("cannot write sidecar for " + iq_path);
  out << meta.dump(2) << "\n";
}

IqBuffer load_iq(const std::string& path, double rate_hz) {
  if (rate_hz <= 0.0) {
    const std::string sidecar = path + ".json";
    if (!fs::exists(sidecar))
      throw InvalidParameter("no --rate given and no sidecar " + sidecar);
    rate_hz = load_json(sidecar).at("sample_rate_hz").get<double>();
  }
  return read_iq_file(path, rate_hz);
}

json metrics_to_json(const MetricsReport& r) {
  return {{"papr_db", r.papr_db},
          {"obw_hz", r.obw_hz},
          {"mean_power_db", r.mean_power_db},
          {"sample_rate_hz", r.sample_rate_hz},
          {"n_samples", r.n_samples}};
}

json score_to_json(const SinrScore& s) {
  json j;
  j["mean_improvement_db"] = s.mean_improvement_db;
  for (Eigen::Index i = 0; i < s.improvement_db.size(); ++i) {
    j["per_source"].push_back({{"sinr_in_db", s.per_source_sinr_in_db[i]},
                               {"sinr_out_db", s.per_source_sinr_out_db[i]},
                               {"improvement_db", s.improvement_db[i]},
                               {"estimate_index", s.permutation[i]}});
  }
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"bbtk - multi-standard baseband signal toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a single-standard IQ file");
  std::string gen_standard = "LTE", gen_out = "out.iq", gen_config;
  double gen_duration = 0.002;
  std::uint64_t gen_seed = 1;
  gen->add_option("--standard", gen_standard, "GSM, UMTS, LTE or NR");
  gen->add_option("--out", gen_out, "Output IQ file")->required();
  gen->add_option("--config", gen_config, "Waveform config JSON file");
  gen->add_option("--duration", gen_duration, "Signal duration in seconds");
  gen->add_option("--seed", gen_seed, "RNG seed");

  // mix
  auto* mix = app.add_subcommand("mix", "Run one scenario spec file");
  std::string mix_spec, mix_out_dir = ".";
  mix->add_option("--spec", mix_spec, "Scenario spec JSON")->required();
  mix->add_option("--out-dir", mix_out_dir, "Output directory");

  // dataset
  auto* dataset = app.add_subcommand("dataset", "Generate a corpus from a plan file");
  std::string ds_plan, ds_out;
  dataset->add_option("--plan", ds_plan, "Plan JSON file")->required();
  dataset->add_option("--out", ds_out, "Output directory")->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Measure an IQ file");
  std::string met_in;
  double met_rate = 0.0;
  metrics->add_option("--in", met_in, "Input IQ file")->required();
  metrics->add_option("--rate", met_rate, "Sample rate in Hz (else sidecar)");

  // spectrogram
  auto* spec = app.add_subcommand("spectrogram", "Export an STFT magnitude array");
  std::string sp_in, sp_out = "spectrogram.csv";
  double sp_rate = 0.0;
  int sp_window = 256, sp_hop = 128;
  spec->add_option("--in", sp_in, "Input IQ file")->required();
  spec->add_option("--out", sp_out, "Output CSV (rows = frames)");
  spec->add_option("--rate", sp_rate, "Sample rate in Hz (else sidecar)");
  spec->add_option("--window", sp_window, "STFT window");
  spec->add_option("--hop", sp_hop, "STFT hop");

  // separate
  auto* sep_cmd = app.add_subcommand("separate", "Separate a dataset sample");
  std::string sep_manifest, sep_id, sep_method = "nmf", sep_out_dir;
  sep_cmd->add_option("--manifest", sep_manifest, "Dataset manifest")->required();
  sep_cmd->add_option("--id", sep_id, "Sample id")->required();
  sep_cmd->add_option("--method", sep_method, "ica or nmf");
  sep_cmd->add_option("--out-dir", sep_out_dir, "Where to write estimates");

  // bench
  auto* bench = app.add_subcommand("bench", "Per-standard generation throughput");
  double bench_duration = 0.01;
  int bench_reps = 3;
  bench->add_option("--duration", bench_duration, "Signal seconds per standard");
  bench->add_option("--reps", bench_reps, "Repetitions (best taken)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check manifest integrity");
  std::string ver_manifest;
  verify->add_option("--manifest", ver_manifest, "Dataset manifest")->required();

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    const StandardKind kind = standard_from_string(gen_standard);
    WaveformConfig config = gen_config.empty()
                                ? default_config(kind)
                                : config_from_json(kind, load_json(gen_config));
    Rng rng(gen_seed);
    IqBuffer buf = generate_waveform(kind, config, gen_duration, rng);
    buf.seed = gen_seed;
    write_iq_file(gen_out, buf);
    write_sidecar(gen_out, buf);
    std::cout << "wrote " << buf.samples.size() << " samples at "
              << buf.sample_rate_hz << " Hz to " << gen_out << "\n";
  } else if (mix->parsed()) {
    const ScenarioSpec scenario = scenario_from_json(load_json(mix_spec));
    const ScenarioResult result = run_scenario(scenario);
    fs::create_directories(mix_out_dir);
    const std::string mix_path =
        (fs::path(mix_out_dir) / (scenario.id + "_mixture.iq")).string();
    write_iq_file(mix_path, result.mixture);
    write_sidecar(mix_path, result.mixture);
    for (size_t i = 0; i < result.components.size(); ++i) {
      const std::string p =
          (fs::path(mix_out_dir) / (scenario.id + "_src" + std::to_string(i) + ".iq"))
              .string();
      write_iq_file(p, result.components[i]);
      write_sidecar(p, result.components[i]);
    }
    json summary = {{"id", scenario.id},
                    {"mixture", metrics_to_json(result.mixture_metrics)}};
    std::cout << summary.dump(2) << "\n";
  } else if (dataset->parsed()) {
    const GenerationPlan plan = plan_from_json(load_json(ds_plan));
    const DatasetManifest manifest = generate_dataset(plan, ds_out);
    std::cout << "wrote " << manifest.samples.size() << " samples to " << ds_out
              << "\nmanifest hash " << manifest.hash() << "\n";
  } else if (metrics->parsed()) {
    const IqBuffer buf = load_iq(met_in, met_rate);
    std::cout << metrics_to_json(measure(buf)).dump(2) << "\n";
  } else if (spec->parsed()) {
    const IqBuffer buf = load_iq(sp_in, sp_rate);
    const Eigen::MatrixXd s = stft_spectrogram(buf, sp_window, sp_hop);
    std::ofstream out(sp_out);
    if (!out) throw IoError("cannot open for writing: " + sp_out);
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      for (Eigen::Index c = 0; c < s.cols(); ++c)
        out << s(r, c) << (c + 1 < s.cols() ? "," : "");
      out << "\n";
    }
    std::cout << "wrote " << s.rows() << "x" << s.cols() << " frames to " << sp_out << "\n";
  } else if (sep_cmd->parsed()) {
    const DatasetManifest manifest = read_manifest(sep_manifest);
    const std::string dir = fs::path(sep_manifest).parent_path().string();
    const LoadedSample sample = read_sample(manifest, dir, sep_id);
    const int n_src = static_cast<int>(sample.components.size());

    std::vector<IqBuffer> estimates;
    if (sep_method == "nmf") {
      sep::NmfParams params;
      params.n_components = n_src * params.components_per_source;
      estimates =
          sep::nmf_separate_grouped(sample.mixture, sample.components, params).estimates;
    } else if (sep_method == "ica") {
      // Instantaneous observation model synthesized from the stored
      // components: n_src + 1 virtual antennas with a seeded mixing matrix.
      const int n_obs = n_src + 1;
      Rng rng(manifest.master_seed, 0x1CA);
      std::vector<IqBuffer> obs(n_obs);
      for (int o = 0; o < n_obs; ++o) {
        obs[o].samples = Eigen::VectorXcd::Zero(sample.mixture.samples.size());
        obs[o].sample_rate_hz = sample.mixture.sample_rate_hz;
        for (int s = 0; s < n_src; ++s)
          obs[o].samples += rng.cgaussian() * sample.components[s].samples;
      }
      obs[0] = sample.mixture;
      sep::IcaParams params;
      params.n_sources = n_src;
      estimates = sep::fastica_separate(obs, params).estimates;
    } else {
      throw InvalidParameter("--method must be ica or nmf");
    }

    const SinrScore score = sinr_improvement(estimates, sample.components, sample.mixture);
    if (!sep_out_dir.empty()) {
      fs::create_directories(sep_out_dir);
      for (size_t i = 0; i < estimates.size(); ++i) {
        const std::string p =
            (fs::path(sep_out_dir) / (sep_id + "_est" + std::to_string(i) + ".iq")).string();
        write_iq_file(p, estimates[i]);
      }
    }
    std::cout << score_to_json(score).dump(2) << "\n";
  } else if (bench->parsed()) {
    const auto rows = run_benchmark(bench_duration, bench_reps);
    json out = json::array();
    for (const auto& r : rows) {
      out.push_back({{"standard", r.standard},
                     {"sample_rate_hz", r.sample_rate_hz},
                     {"signal_s", r.signal_s},
                     {"elapsed_s", r.elapsed_s},
                     {"realtime_multiple", r.realtime_multiple}});
      std::cerr << r.standard << ": " << r.realtime_multiple << "x real time ("
                << r.sample_rate_hz / 1e6 << " Msps)\n";
    }
    std::cout << out.dump(2) << "\n";
  } else if (verify->parsed()) {
    const DatasetManifest manifest = read_manifest(ver_manifest);
    const std::string dir = fs::path(ver_manifest).parent_path().string();
    const auto failures = verify_dataset(manifest, dir);
    if (!failures.empty()) {
      for (const auto& f : failures) std::cerr << "FAIL " << f << "\n";
      throw IoError(std::to_string(failures.size()) + " file(s) failed verification");
    }
    std::cout << "manifest verified: " << manifest.samples.size() << " samples, hash "
              << manifest.hash() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
