// Scenario orchestration: a declarative description of one dataset sample and
// the machinery that turns it into a mixture plus ground-truth components.
#pragma once

#include "bbtk/channel.hpp"
#include "bbtk/gsm.hpp"
#include "bbtk/metrics.hpp"
#include "bbtk/mimo.hpp"
#include "bbtk/ofdm.hpp"
#include "bbtk/rng.hpp"
#include "bbtk/umts.hpp"

#include <json.hpp>

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bbtk::harness {

enum class StandardKind { GSM, UMTS, LTE, NR };

std::string to_string(StandardKind kind);
StandardKind standard_from_string(const std::string& name);

using WaveformConfig =
    std::variant<gsm::GsmConfig, umts::UmtsConfig, ofdm::OfdmConfig>;

struct SourceSpec {
  StandardKind standard = StandardKind::LTE;
  WaveformConfig config;
  chan::SourcePlacement placement;
  chan::DelayProfile profile = chan::flat_profile();
  chan::FadingSpec fading;
};

struct ScenarioSpec {
  std::string id = "scenario";
  double duration_s = 0.002;
  double common_rate_hz = 15.36e6;
  std::vector<SourceSpec> sources;
  double noise_snr_db = std::numeric_limits<double>::infinity();
  std::optional<mimo::MimoConfig> mimo;  // n_tx is forced to the source count
  std::uint64_t seed = 1;

  void validate() const;
};

ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioSpec& spec);

/// Default per-standard configuration used when a scenario names a standard
/// without parameters.
WaveformConfig default_config(StandardKind kind);

/// Per-standard config (de)serialization; a null json yields the default.
WaveformConfig config_from_json(StandardKind kind, const nlohmann::json& j);
nlohmann::json config_to_json(StandardKind kind, const WaveformConfig& config);

/// Generates one source at its native rate, sized to cover duration_s.
IqBuffer generate_waveform(StandardKind kind, const WaveformConfig& config,
                           double duration_s, Rng& rng);

struct ScenarioResult {
  IqBuffer mixture;                      // observations[0] when MIMO is active
  std::vector<IqBuffer> components;      // ground truth at the reference antenna
  std::vector<IqBuffer> observations;    // all receive antennas (MIMO only)
  Eigen::VectorXcd noise;                // realization added to the mixture
  MetricsReport mixture_metrics;
  std::vector<MetricsReport> component_metrics;
};

/// Fully deterministic in (spec, spec.seed). Errors from the per-source chain
/// are annotated with the source index.
ScenarioResult run_scenario(const ScenarioSpec& spec);

}  // namespace bbtk::harness
