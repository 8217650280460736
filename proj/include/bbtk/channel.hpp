// Multipath fading channels and the multi-source mixture model: standardized
// delay profiles, Rayleigh/Rician fading with Jakes Doppler shaping,
// log-normal shadowing, timing/frequency offsets and additive noise.
#pragma once

#include "bbtk/rng.hpp"
#include "bbtk/types.hpp"

#include <string>
#include <vector>

namespace bbtk::chan {

enum class ProfileName { PedA, PedB, VehA, VehB };

struct DelayProfile {
  std::vector<double> delay_ns;   // nonnegative, strictly increasing, first 0
  std::vector<double> power_db;   // relative tap powers
  std::string name = "custom";

  /// Linear tap powers normalized to sum to 1.
  Eigen::VectorXd normalized_powers() const;
  void validate() const;
};

/// Single 0 dB tap at zero delay (flat channel).
DelayProfile flat_profile();

/// Embedded ITU-R M.1225 tap tables.
DelayProfile standard_profile(ProfileName name);
DelayProfile standard_profile(const std::string& name);

enum class FadingModel { Rayleigh, Rician };

struct FadingSpec {
  FadingModel model = FadingModel::Rayleigh;
  double k_factor_db = 0.0;  // Rician only
  double doppler_hz = 0.0;
  double shadowing_sigma_db = 0.0;
};

struct SourcePlacement {
  double power_db = 0.0;
  double delay_s = 0.0;
  double freq_offset_hz = 0.0;
};

/// One unit-mean-power complex gain trajectory. Rayleigh gains are zero-mean
/// complex Gaussian shaped to a Jakes Doppler spectrum; Rician adds a constant
/// line-of-sight term with power ratio K. doppler_hz = 0 freezes the channel.
Eigen::VectorXcd fading_process(const FadingSpec& spec, Eigen::Index n_samples,
                                double sample_rate_hz, Rng& rng);

/// Per-tap independent fading, fractional-delay alignment, power-weighted sum.
/// Output has the input length; expected output power equals input power up to
/// the shadowing draw.
IqBuffer apply_multipath(const IqBuffer& buf, const DelayProfile& profile,
                         const FadingSpec& spec, Rng& rng);

/// Complex white Gaussian noise at signal_power / 10^(snr/10). An infinite
/// snr_db is the identity.
IqBuffer add_awgn(const IqBuffer& buf, double snr_db, Rng& rng);

struct MixEntry {
  IqBuffer signal;
  SourcePlacement placement;
  DelayProfile profile = flat_profile();
  FadingSpec fading;
};

struct MixResult {
  IqBuffer mixture;
  std::vector<IqBuffer> components;  // post-channel ground truth, same length
  Eigen::VectorXcd noise;            // realization actually added
};

/// Realizes the composite scene: each source is resampled to the common rate,
/// frequency shifted, faded, delayed and scaled, then summed left-to-right
/// plus noise. mixture == sum(components) + noise holds bit-exactly when
/// recomputed in that order.
MixResult mix_sources(const std::vector<MixEntry>& entries, double common_rate_hz,
                      double noise_snr_db, Rng& rng);

}  // namespace bbtk::chan
