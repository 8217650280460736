// Signal-quality measurement: PAPR, Welch PSD, occupied bandwidth, STFT
// spectrograms, amplitude statistics and permutation-aligned SINR scoring.
#pragma once

#include "bbtk/types.hpp"

#include <vector>

namespace bbtk {

/// Two-sided PSD centered at 0 Hz. power_lin integrates to the time-domain
/// mean power: sum(power_lin) * bin_hz == mean |x|^2 (within estimator error).
struct Spectrum {
  Eigen::VectorXd freq_hz;
  Eigen::VectorXd power_lin;  // density, 1/Hz
  double bin_hz = 0.0;

  Eigen::VectorXd power_db() const;
};

double papr_db(const IqBuffer& buf);

/// Hann-windowed averaged periodogram. Throws when segment exceeds the buffer.
Spectrum psd_welch(const IqBuffer& buf, int segment = 1024, double overlap = 0.5);

/// Narrowest band holding `fraction` of total PSD power, trimming equal power
/// from both band edges inward. Width is measured between retained bin centers.
double occupied_bandwidth(const IqBuffer& buf, double fraction = 0.99);

/// Magnitude STFT, rows = frames, cols = window bins (fftshifted). Hann
/// analysis window.
Eigen::MatrixXd stft_spectrogram(const IqBuffer& buf, int window, int hop);

/// Complex STFT with the same framing as stft_spectrogram.
Eigen::MatrixXcd stft_complex(const Eigen::VectorXcd& x, int window, int hop);

/// Weighted overlap-add inverse of stft_complex; returns n_samples samples.
Eigen::VectorXcd istft_complex(const Eigen::MatrixXcd& frames, int window, int hop,
                               Eigen::Index n_samples);

struct MetricsReport {
  double papr_db = 0.0;
  double obw_hz = 0.0;
  double mean_power_db = 0.0;
  double sample_rate_hz = 0.0;
  Eigen::Index n_samples = 0;
  Eigen::VectorXd amplitude_bin_edges;
  Eigen::VectorXd amplitude_counts;
  Spectrum psd;
};

MetricsReport measure(const IqBuffer& buf);

/// Output SINR saturates here when the residual underflows (perfect recovery).
inline constexpr double kSinrCapDb = 100.0;

struct SinrScore {
  Eigen::VectorXd per_source_sinr_in_db;
  Eigen::VectorXd per_source_sinr_out_db;
  Eigen::VectorXd improvement_db;
  std::vector<int> permutation;  // estimate index assigned to each source
  Eigen::VectorXcd scales;
  double mean_improvement_db = 0.0;
};

/// Scores estimates against references after best-permutation assignment and
/// per-pair least-squares complex scaling. Input SINR for source i is the
/// power of reference i over the power of (mixture - reference i).
SinrScore sinr_improvement(const std::vector<IqBuffer>& estimates,
                           const std::vector<IqBuffer>& references,
                           const IqBuffer& mixture);

}  // namespace bbtk
