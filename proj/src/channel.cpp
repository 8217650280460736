#include "bbtk/channel.hpp"

#include "bbtk/dsp.hpp"
#include "bbtk/fft.hpp"
#include "bbtk/filter.hpp"

#include <cmath>
#include <numbers>

namespace bbtk::chan {

namespace {
constexpr double kPi = std::numbers::pi_v<double>;
}

Eigen::VectorXd DelayProfile::normalized_powers() const {
  Eigen::VectorXd p(power_db.size());
  for (size_t i = 0; i < power_db.size(); ++i) p[i] = db_to_pow(power_db[i]);
  return p / p.sum();
}

void DelayProfile::validate() const {
  if (delay_ns.empty() || delay_ns.size() != power_db.size())
    throw InvalidParameter("DelayProfile: taps must pair delays with powers");
  if (delay_ns.front() != 0.0)
    throw InvalidParameter("DelayProfile: first delay must be 0");
  for (size_t i = 1; i < delay_ns.size(); ++i)
    if (delay_ns[i] <= delay_ns[i - 1])
      throw InvalidParameter("DelayProfile: delays must be strictly increasing");
}

DelayProfile flat_profile() { return {{0.0}, {0.0}, "flat"}; }

DelayProfile standard_profile(ProfileName name) {
  switch (name) {
    case ProfileName::PedA:
      return {{0, 110, 190, 410}, {0.0, -9.7, -19.2, -22.8}, "PedA"};
    case ProfileName::PedB:
      return {{0, 200, 800, 1200, 2300, 3700},
              {0.0, -0.9, -4.9, -8.0, -7.8, -23.9},
              "PedB"};
    case ProfileName::VehA:
      return {{0, 310, 710, 1090, 1730, 2510},
              {0.0, -1.0, -9.0, -10.0, -15.0, -20.0},
              "VehA"};
    case ProfileName::VehB:
      return {{0, 300, 8900, 12900, 17100, 20000},
              {-2.5, 0.0, -12.8, -10.0, -25.2, -16.0},
              "VehB"};
  }
  throw InvalidParameter("standard_profile: unknown profile");
}

DelayProfile standard_profile(const std::string& name) {
  if (name == "PedA") return standard_profile(ProfileName::PedA);
  if (name == "PedB") return standard_profile(ProfileName::PedB);
  if (name == "VehA") return standard_profile(ProfileName::VehA);
  if (name == "VehB") return standard_profile(ProfileName::VehB);
  if (name == "flat") return flat_profile();
  throw InvalidParameter("standard_profile: unknown profile '" + name + "'");
}

namespace {

// Jakes-shaped Rayleigh trajectory: white complex Gaussian filtered by a
// frequency-sampled sqrt-spectrum FIR at ~16x the Doppler rate, then linearly
// interpolated up to the sample rate. Unit mean power by filter normalization.
Eigen::VectorXcd rayleigh_trajectory(double doppler_hz, Eigen::Index n, double fs,
                                     Rng& rng) {
  if (doppler_hz <= 0.0) {
    return Eigen::VectorXcd::Constant(n, rng.cgaussian());
  }

  const Eigen::Index m = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(fs / (16.0 * doppler_hz)));
  const double fp = fs / static_cast<double>(m);
  const double fd_norm = doppler_hz / fp;  // <= 1/16 for m > 1, < 1/10 always

  // Shaping FIR from sqrt of the Clarke spectrum, Hann-windowed, order 256.
  constexpr Eigen::Index kOrder = 256;
  constexpr Eigen::Index kGrid = 4096;
  Eigen::VectorXcd response = Eigen::VectorXcd::Zero(kGrid);
  for (Eigen::Index i = 0; i < kGrid; ++i) {
    const double f = (i < kGrid / 2 ? static_cast<double>(i)
                                    : static_cast<double>(i) - kGrid) /
                     static_cast<double>(kGrid);
    const double r = f / fd_norm;
    if (std::abs(r) < 0.999)
      response[i] = std::pow(1.0 - r * r, -0.25);
  }
  const Eigen::VectorXcd impulse = fft_inverse(response);
  Eigen::VectorXd taps(2 * kOrder + 1);
  for (Eigen::Index i = 0; i < taps.size(); ++i) {
    const Eigen::Index lag = i - kOrder;
    const double w =
        0.5 * (1.0 + std::cos(kPi * static_cast<double>(lag) / static_cast<double>(kOrder + 1)));
    taps[i] = impulse[(lag % kGrid + kGrid) % kGrid].real() * w;
  }
  taps /= taps.norm();  // white in -> unit mean power out

  const Eigen::Index n_proc = (n + m - 1) / m + 2;
  Eigen::VectorXcd white(n_proc + taps.size());
  for (Eigen::Index i = 0; i < white.size(); ++i) white[i] = rng.cgaussian();
  const Eigen::VectorXcd shaped = fir_filter_same(taps, white).segment(
      taps.size() / 2, n_proc);

  if (m == 1) return shaped.head(n);
  Eigen::VectorXcd gain(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = i / m;
    const double frac = static_cast<double>(i - j * m) / static_cast<double>(m);
    gain[i] = (1.0 - frac) * shaped[j] + frac * shaped[j + 1];
  }
  return gain;
}

}  // namespace

Eigen::VectorXcd fading_process(const FadingSpec& spec, Eigen::Index n_samples,
                                double sample_rate_hz, Rng& rng) {
  if (n_samples < 1) throw InvalidParameter("fading_process: need n_samples >= 1");
  if (!(sample_rate_hz > 0.0))
    throw InvalidParameter("fading_process: sample rate must be positive");
  if (spec.doppler_hz < 0.0)
    throw InvalidParameter("fading_process: doppler must be >= 0");
  if (spec.doppler_hz >= sample_rate_hz / 10.0)
    throw NumericError("fading_process: doppler too large relative to sample rate");

  if (spec.model == FadingModel::Rayleigh)
    return rayleigh_trajectory(spec.doppler_hz, n_samples, sample_rate_hz, rng);

  // Rician: constant LOS plus scattered part at power ratio K.
  const double k = db_to_pow(spec.k_factor_db);
  const double los_amp = std::sqrt(k / (k + 1.0));
  const double scatter_amp = std::sqrt(1.0 / (k + 1.0));
  const Cplx los = std::polar(los_amp, rng.uniform(0.0, 2.0 * kPi));
  Eigen::VectorXcd gain =
      rayleigh_trajectory(spec.doppler_hz, n_samples, sample_rate_hz, rng);
  gain *= scatter_amp;
  gain.array() += los;
  return gain;
}

IqBuffer apply_multipath(const IqBuffer& buf, const DelayProfile& profile,
                         const FadingSpec& spec, Rng& rng) {
  require_valid(buf, "apply_multipath");
  profile.validate();
  const double max_delay_s = profile.delay_ns.back() * 1e-9;
  if (max_delay_s >= buf.duration_s())
    throw InvalidParameter("apply_multipath: max tap delay exceeds buffer duration");

  const Eigen::VectorXd powers = profile.normalized_powers();
  IqBuffer out = buf;
  out.samples = Eigen::VectorXcd::Zero(buf.samples.size());

  for (size_t l = 0; l < profile.delay_ns.size(); ++l) {
    Rng tap_rng = rng.split(l);
    const Eigen::VectorXcd gain =
        fading_process(spec, buf.samples.size(), buf.sample_rate_hz, tap_rng);
    IqBuffer delayed = profile.delay_ns[l] > 0.0
                           ? fractional_delay(buf, profile.delay_ns[l] * 1e-9)
                           : buf;
    const double amp = std::sqrt(powers[static_cast<Eigen::Index>(l)]);
    const Eigen::Index len = buf.samples.size();
    out.samples += amp * gain.cwiseProduct(delayed.samples.head(len));
  }

  if (spec.shadowing_sigma_db > 0.0) {
    Rng shadow_rng = rng.split(0x5ad0);
    out.samples *= db_to_amp(shadow_rng.gaussian() * spec.shadowing_sigma_db);
  }
  return out;
}

IqBuffer add_awgn(const IqBuffer& buf, double snr_db, Rng& rng) {
  require_valid(buf, "add_awgn");
  if (std::isinf(snr_db) && snr_db > 0) return buf;
  const double sig = mean_power(buf);
  if (sig <= 0.0) throw NumericError("add_awgn: zero-power input");
  const double namp = std::sqrt(sig / db_to_pow(snr_db));
  IqBuffer out = buf;
  for (Eigen::Index i = 0; i < out.samples.size(); ++i)
    out.samples[i] += namp * rng.cgaussian();
  return out;
}

MixResult mix_sources(const std::vector<MixEntry>& entries, double common_rate_hz,
                      double noise_snr_db, Rng& rng) {
  if (entries.empty()) throw InvalidParameter("mix_sources: no sources");
  if (!(common_rate_hz > 0.0))
    throw InvalidParameter("mix_sources: common rate must be positive");

  MixResult result;
  Eigen::Index n_out = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    const MixEntry& e = entries[i];
    Rng src_rng = rng.split(i);

    IqBuffer s = resample(e.signal, common_rate_hz);
    s = normalize_power(s, 0.0);
    if (e.placement.freq_offset_hz != 0.0)
      s = frequency_shift(s, e.placement.freq_offset_hz);
    s = apply_multipath(s, e.profile, e.fading, src_rng);
    if (e.placement.delay_s > 0.0) s = fractional_delay(s, e.placement.delay_s);
    s.samples *= db_to_amp(e.placement.power_db);
    n_out = std::max(n_out, s.samples.size());
    result.components.push_back(std::move(s));
  }

  for (auto& c : result.components) {
    if (c.samples.size() < n_out) {
      Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(n_out);
      padded.head(c.samples.size()) = c.samples;
      c.samples = std::move(padded);
    }
  }

  // Left-to-right summation order is part of the determinism contract.
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(n_out);
  for (const auto& c : result.components) sum += c.samples;

  result.noise = Eigen::VectorXcd::Zero(n_out);
  if (!(std::isinf(noise_snr_db) && noise_snr_db > 0)) {
    const double sig = mean_power(sum);
    if (sig <= 0.0) throw NumericError("mix_sources: zero-power mixture");
    const double namp = std::sqrt(sig / db_to_pow(noise_snr_db));
    Rng noise_rng = rng.split(0xA3);
    for (Eigen::Index i = 0; i < n_out; ++i) result.noise[i] = namp * noise_rng.cgaussian();
  }

  result.mixture.samples = sum + result.noise;
  result.mixture.sample_rate_hz = common_rate_hz;
  result.mixture.label = "MIX";
  return result;
}

}  // namespace bbtk::chan
