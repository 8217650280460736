#include "bbtk/scenario.hpp"

#include <cmath>

namespace bbtk::harness {

using nlohmann::json;

std::string to_string(StandardKind kind) {
  switch (kind) {
    case StandardKind::GSM: return "GSM";
    case StandardKind::UMTS: return "UMTS";
    case StandardKind::LTE: return "LTE";
    case StandardKind::NR: return "NR";
  }
  throw InvalidParameter("unknown standard");
}

StandardKind standard_from_string(const std::string& name) {
  if (name == "GSM") return StandardKind::GSM;
  if (name == "UMTS") return StandardKind::UMTS;
  if (name == "LTE") return StandardKind::LTE;
  if (name == "NR" || name == "5GNR") return StandardKind::NR;
  throw InvalidParameter("unknown standard '" + name + "'");
}

WaveformConfig default_config(StandardKind kind) {
  switch (kind) {
    case StandardKind::GSM:
      return gsm::GsmConfig{};
    case StandardKind::UMTS: {
      umts::UmtsConfig cfg;
      cfg.users = {{16, 1, 0.0, {}}, {16, 3, -3.0, {}}, {32, 9, -6.0, {}}};
      cfg.duration_chips = 0;  // sized from the scenario duration
      return cfg;
    }
    case StandardKind::LTE: {
      ofdm::OfdmConfig cfg;
      cfg.standard = ofdm::Standard::LTE;
      cfg.bandwidth_hz = 10e6;
      cfg.modulation = ofdm::Modulation::QAM16;
      cfg.n_slots = 0;  // sized from the scenario duration
      return cfg;
    }
    case StandardKind::NR: {
      ofdm::OfdmConfig cfg;
      cfg.standard = ofdm::Standard::NR;
      cfg.bandwidth_hz = 20e6;
      cfg.numerology_mu = 1;
      cfg.modulation = ofdm::Modulation::QAM64;
      cfg.n_slots = 0;  // sized from the scenario duration
      return cfg;
    }
  }
  throw InvalidParameter("unknown standard");
}

void ScenarioSpec::validate() const {
  if (sources.empty() || sources.size() > 4)
    throw InvalidParameter("ScenarioSpec: source count must be in 1..4");
  if (!(duration_s > 0.0))
    throw InvalidParameter("ScenarioSpec: duration must be positive");
  if (!(common_rate_hz > 0.0))
    throw InvalidParameter("ScenarioSpec: common rate must be positive");
  for (const auto& s : sources) {
    s.profile.validate();
    if (s.placement.delay_s < 0.0 || s.placement.delay_s >= duration_s)
      throw InvalidParameter("ScenarioSpec: source delay must be in [0, duration)");
    if (std::abs(s.placement.freq_offset_hz) >= common_rate_hz / 2.0)
      throw InvalidParameter("ScenarioSpec: frequency offset beyond Nyquist");
  }
}

namespace {

json placement_to_json(const chan::SourcePlacement& p) {
  return {{"power_db", p.power_db},
          {"delay_s", p.delay_s},
          {"freq_offset_hz", p.freq_offset_hz}};
}

chan::SourcePlacement placement_from_json(const json& j) {
  chan::SourcePlacement p;
  p.power_db = j.value("power_db", 0.0);
  p.delay_s = j.value("delay_s", 0.0);
  p.freq_offset_hz = j.value("freq_offset_hz", 0.0);
  return p;
}

json fading_to_json(const chan::FadingSpec& f) {
  return {{"model", f.model == chan::FadingModel::Rayleigh ? "Rayleigh" : "Rician"},
          {"k_factor_db", f.k_factor_db},
          {"doppler_hz", f.doppler_hz},
          {"shadowing_sigma_db", f.shadowing_sigma_db}};
}

chan::FadingSpec fading_from_json(const json& j) {
  chan::FadingSpec f;
  const std::string model = j.value("model", "Rayleigh");
  if (model == "Rayleigh") {
    f.model = chan::FadingModel::Rayleigh;
  } else if (model == "Rician") {
    f.model = chan::FadingModel::Rician;
  } else {
    throw InvalidParameter("fading model must be Rayleigh or Rician");
  }
  f.k_factor_db = j.value("k_factor_db", 0.0);
  f.doppler_hz = j.value("doppler_hz", 0.0);
  f.shadowing_sigma_db = j.value("shadowing_sigma_db", 0.0);
  return f;
}

json profile_to_json(const chan::DelayProfile& p) {
  if (p.name != "custom") return p.name;
  return {{"delay_ns", p.delay_ns}, {"power_db", p.power_db}};
}

chan::DelayProfile profile_from_json(const json& j) {
  if (j.is_string()) return chan::standard_profile(j.get<std::string>());
  chan::DelayProfile p;
  p.delay_ns = j.at("delay_ns").get<std::vector<double>>();
  p.power_db = j.at("power_db").get<std::vector<double>>();
  p.validate();
  return p;
}

std::string modulation_name(ofdm::Modulation m) {
  switch (m) {
    case ofdm::Modulation::QPSK: return "QPSK";
    case ofdm::Modulation::QAM16: return "QAM16";
    case ofdm::Modulation::QAM64: return "QAM64";
    case ofdm::Modulation::QAM256: return "QAM256";
  }
  throw InvalidParameter("unknown modulation");
}

ofdm::Modulation modulation_from_name(const std::string& s) {
  if (s == "QPSK") return ofdm::Modulation::QPSK;
  if (s == "QAM16") return ofdm::Modulation::QAM16;
  if (s == "QAM64") return ofdm::Modulation::QAM64;
  if (s == "QAM256") return ofdm::Modulation::QAM256;
  throw InvalidParameter("unknown modulation '" + s + "'");
}

}  // namespace

json config_to_json(StandardKind kind, const WaveformConfig& config) {
  switch (kind) {
    case StandardKind::GSM: {
      const auto& c = std::get<gsm::GsmConfig>(config);
      const char* burst = "NB";
      switch (c.burst_type) {
        case gsm::BurstType::NormalBurst: burst = "NB"; break;
        case gsm::BurstType::FrequencyCorrectionBurst: burst = "FCB"; break;
        case gsm::BurstType::SynchronizationBurst: burst = "SB"; break;
        case gsm::BurstType::AccessBurst: burst = "AB"; break;
      }
      return {{"burst_type", burst},
              {"tsc_index", c.tsc_index},
              {"samples_per_symbol", c.samples_per_symbol},
              {"apply_channel_coding", c.apply_channel_coding},
              {"n_bursts", c.n_bursts}};
    }
    case StandardKind::UMTS: {
      const auto& c = std::get<umts::UmtsConfig>(config);
      json users = json::array();
      for (const auto& u : c.users)
        users.push_back({{"spreading_factor", u.spreading_factor},
                         {"code_index", u.code_index},
                         {"power_db", u.power_db}});
      return {{"users", users},
              {"scrambling_code_id", c.scrambling_code_id},
              {"samples_per_chip", c.samples_per_chip},
              {"duration_chips", c.duration_chips}};
    }
    case StandardKind::LTE:
    case StandardKind::NR: {
      const auto& c = std::get<ofdm::OfdmConfig>(config);
      return {{"bandwidth_hz", c.bandwidth_hz},
              {"numerology_mu", c.numerology_mu},
              {"modulation", modulation_name(c.modulation)},
              {"n_slots", c.n_slots}};
    }
  }
  throw InvalidParameter("unknown standard");
}

WaveformConfig config_from_json(StandardKind kind, const json& j) {
  WaveformConfig config = default_config(kind);
  if (j.is_null()) return config;
  switch (kind) {
    case StandardKind::GSM: {
      auto& c = std::get<gsm::GsmConfig>(config);
      const std::string burst = j.value("burst_type", "NB");
      if (burst == "NB") c.burst_type = gsm::BurstType::NormalBurst;
      else if (burst == "FCB") c.burst_type = gsm::BurstType::FrequencyCorrectionBurst;
      else if (burst == "SB") c.burst_type = gsm::BurstType::SynchronizationBurst;
      else if (burst == "AB") c.burst_type = gsm::BurstType::AccessBurst;
      else throw InvalidParameter("gsm burst_type must be NB, FCB, SB or AB");
      c.tsc_index = j.value("tsc_index", 0);
      c.samples_per_symbol = j.value("samples_per_symbol", 8);
      c.apply_channel_coding = j.value("apply_channel_coding", true);
      c.n_bursts = j.value("n_bursts", 0);
      break;
    }
    case StandardKind::UMTS: {
      auto& c = std::get<umts::UmtsConfig>(config);
      if (j.contains("users")) {
        c.users.clear();
        for (const auto& u : j.at("users"))
          c.users.push_back({u.value("spreading_factor", 16),
                             u.value("code_index", 0), u.value("power_db", 0.0), {}});
      }
      c.scrambling_code_id = j.value("scrambling_code_id", 0);
      c.samples_per_chip = j.value("samples_per_chip", 4);
      c.duration_chips = j.value("duration_chips", 0);  // 0 -> sized from duration
      break;
    }
    case StandardKind::LTE:
    case StandardKind::NR: {
      auto& c = std::get<ofdm::OfdmConfig>(config);
      c.standard = kind == StandardKind::LTE ? ofdm::Standard::LTE : ofdm::Standard::NR;
      c.bandwidth_hz = j.value("bandwidth_hz", c.bandwidth_hz);
      c.numerology_mu = j.value("numerology_mu", c.numerology_mu);
      if (j.contains("modulation"))
        c.modulation = modulation_from_name(j.at("modulation").get<std::string>());
      c.n_slots = j.value("n_slots", 0);  // 0 -> sized from duration
      break;
    }
  }
  return config;
}

ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec spec;
  spec.id = j.value("id", "scenario");
  spec.duration_s = j.value("duration_s", 0.002);
  spec.common_rate_hz = j.value("common_rate_hz", 15.36e6);
  spec.noise_snr_db = j.value("noise_snr_db", std::numeric_limits<double>::infinity());
  spec.seed = j.value("seed", std::uint64_t{1});
  for (const auto& s : j.at("sources")) {
    SourceSpec src;
    src.standard = standard_from_string(s.at("standard").get<std::string>());
    src.config = config_from_json(src.standard,
                                  s.contains("config") ? s.at("config") : json());
    if (s.contains("placement")) src.placement = placement_from_json(s.at("placement"));
    if (s.contains("profile")) src.profile = profile_from_json(s.at("profile"));
    if (s.contains("fading")) src.fading = fading_from_json(s.at("fading"));
    spec.sources.push_back(std::move(src));
  }
  if (j.contains("mimo")) {
    mimo::MimoConfig m;
    m.n_rx = j.at("mimo").value("n_rx", 2);
    m.rx_corr_rho = j.at("mimo").value("rx_corr_rho", 0.0);
    m.tx_corr_rho = j.at("mimo").value("tx_corr_rho", 0.0);
    if (j.at("mimo").contains("fading"))
      m.fading = fading_from_json(j.at("mimo").at("fading"));
    spec.mimo = m;
  }
  spec.validate();
  return spec;
}

json scenario_to_json(const ScenarioSpec& spec) {
  json j;
  j["id"] = spec.id;
  j["duration_s"] = spec.duration_s;
  j["common_rate_hz"] = spec.common_rate_hz;
  if (std::isfinite(spec.noise_snr_db)) j["noise_snr_db"] = spec.noise_snr_db;
  j["seed"] = spec.seed;
  j["sources"] = json::array();
  for (const auto& s : spec.sources) {
    json src;
    src["standard"] = to_string(s.standard);
    src["config"] = config_to_json(s.standard, s.config);
    src["placement"] = placement_to_json(s.placement);
    src["profile"] = profile_to_json(s.profile);
    src["fading"] = fading_to_json(s.fading);
    j["sources"].push_back(std::move(src));
  }
  if (spec.mimo) {
    j["mimo"] = {{"n_rx", spec.mimo->n_rx},
                 {"rx_corr_rho", spec.mimo->rx_corr_rho},
                 {"tx_corr_rho", spec.mimo->tx_corr_rho},
                 {"fading", fading_to_json(spec.mimo->fading)}};
  }
  return j;
}

IqBuffer generate_waveform(StandardKind kind, const WaveformConfig& config,
                           double duration_s, Rng& rng) {
  switch (kind) {
    case StandardKind::GSM: {
      auto cfg = std::get<gsm::GsmConfig>(config);
      if (cfg.n_bursts == 0) {
        const double slot_s = 156.25 / gsm::kSymbolRateHz;
        cfg.n_bursts = std::max(1, static_cast<int>(std::ceil(duration_s / slot_s)));
      }
      return gsm::generate_gsm(cfg, rng);
    }
    case StandardKind::UMTS: {
      auto cfg = std::get<umts::UmtsConfig>(config);
      if (cfg.duration_chips == 0) {
        int max_sf = 4;
        for (const auto& u : cfg.users) max_sf = std::max(max_sf, u.spreading_factor);
        const int chips = static_cast<int>(std::ceil(duration_s * umts::kChipRateHz));
        cfg.duration_chips = (chips + max_sf - 1) / max_sf * max_sf;
      }
      return umts::generate_umts(cfg, rng);
    }
    case StandardKind::LTE:
    case StandardKind::NR: {
      auto cfg = std::get<ofdm::OfdmConfig>(config);
      if (cfg.n_slots == 0) {
        const double slot_s = 0.5e-3;  // half-subframe
        cfg.n_slots = std::max(1, static_cast<int>(std::ceil(duration_s / slot_s)));
      }
      return cfg.standard == ofdm::Standard::LTE ? ofdm::generate_lte(cfg, rng)
                                                 : ofdm::generate_nr(cfg, rng);
    }
  }
  throw InvalidParameter("unknown standard");
}

ScenarioResult run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  Rng master(spec.seed);

  std::vector<chan::MixEntry> entries;
  for (size_t i = 0; i < spec.sources.size(); ++i) {
    const SourceSpec& src = spec.sources[i];
    try {
      Rng src_rng = master.split(i);
      chan::MixEntry entry;
      entry.signal = generate_waveform(src.standard, src.config, spec.duration_s, src_rng);
      entry.signal.seed = spec.seed;
      entry.placement = src.placement;
      entry.profile = src.profile;
      entry.fading = src.fading;
      entries.push_back(std::move(entry));
    } catch (const std::exception& e) {
      throw InvalidParameter("source " + std::to_string(i) + " (" +
                             to_string(src.standard) + "): " + e.what());
    }
  }

  Rng mix_rng = master.split(1000);
  chan::MixResult mixed = chan::mix_sources(entries, spec.common_rate_hz,
                                            spec.noise_snr_db, mix_rng);

  // Uniform sample count: exactly duration * rate.
  const Eigen::Index n = static_cast<Eigen::Index>(
      std::llround(spec.duration_s * spec.common_rate_hz));
  auto fit = [n](IqBuffer& buf) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v.head(std::min(n, buf.samples.size())) = buf.samples.head(std::min(n, buf.samples.size()));
    buf.samples = std::move(v);
  };
  fit(mixed.mixture);
  for (auto& c : mixed.components) fit(c);
  Eigen::VectorXcd noise = Eigen::VectorXcd::Zero(n);
  noise.head(std::min(n, mixed.noise.size())) = mixed.noise.head(std::min(n, mixed.noise.size()));

  ScenarioResult result;
  result.noise = noise;

  if (spec.mimo) {
    // Components act as the transmit streams; the returned ground truth is
    // each source's contribution at the reference antenna (antenna 0), so the
    // superposition bookkeeping still holds per observation.
    mimo::MimoConfig mcfg = *spec.mimo;
    mcfg.n_tx = static_cast<int>(mixed.components.size());
    Rng mimo_rng = master.split(2000);
    const mimo::MimoChannel channel =
        mimo::draw_mimo_channel(mcfg, n, spec.common_rate_hz, mimo_rng);
    Rng noise_rng = master.split(3000);
    result.observations = mimo::apply_mimo(mixed.components, channel,
                                           std::numeric_limits<double>::infinity(),
                                           noise_rng);
    for (auto& obs : result.observations) {
      obs.samples += noise;  // same scene noise at every antenna input budget
      obs.sample_rate_hz = spec.common_rate_hz;
    }
    result.components.resize(mixed.components.size());
    for (size_t i = 0; i < mixed.components.size(); ++i) {
      IqBuffer ref = mixed.components[i];
      if (channel.time_varying()) {
        for (Eigen::Index s = 0; s < n; ++s)
          ref.samples[s] *= channel.at(s)(0, static_cast<int>(i));
      } else {
        ref.samples *= channel.flat(0, static_cast<int>(i));
      }
      result.components[i] = std::move(ref);
    }
    result.mixture = result.observations.front();
    result.mixture.label = "MIX";
  } else {
    result.mixture = std::move(mixed.mixture);
    result.components = std::move(mixed.components);
  }

  result.mixture_metrics = measure(result.mixture);
  for (const auto& c : result.components) result.component_metrics.push_back(measure(c));
  return result;
}

}  // namespace bbtk::harness
