// Kronecker-correlated MIMO channels for 1x1 through 8x8 antenna arrays:
// H = Rrx^(1/2) Hw Rtx^(1/2) with exponential per-side correlation profiles.
#pragma once

#include "bbtk/channel.hpp"
#include "bbtk/rng.hpp"
#include "bbtk/types.hpp"

#include <vector>

namespace bbtk::mimo {

struct MimoConfig {
  int n_tx = 2;
  int n_rx = 2;
  double tx_corr_rho = 0.0;  // in [0, 1)
  double rx_corr_rho = 0.0;
  chan::FadingSpec fading;
};

/// Flat channel stores one matrix; a time-varying channel stores per-element
/// unit-power gain trajectories combined with the correlation square roots on
/// application.
struct MimoChannel {
  int n_rx = 0;
  int n_tx = 0;
  Eigen::MatrixXcd flat;                     // n_rx x n_tx when not time-varying
  std::vector<Eigen::VectorXcd> gains;       // element (r, t) at index r*n_tx+t
  Eigen::MatrixXd rx_sqrt;
  Eigen::MatrixXd tx_sqrt;

  bool time_varying() const { return !gains.empty(); }
  /// Channel matrix at sample index n.
  Eigen::MatrixXcd at(Eigen::Index n) const;
};

/// Exponential correlation model R[i][j] = rho^|i-j|; symmetric positive
/// definite for rho in [0, 1).
Eigen::MatrixXd correlation_matrix(int n, double rho);

/// Symmetric PSD square root via eigendecomposition, eigenvalues clamped at
/// 1e-12 against numerical PSD loss.
Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m);

/// sample_rate_hz scales the Doppler of time-varying elements; it is unused
/// when fading.doppler_hz == 0.
MimoChannel draw_mimo_channel(const MimoConfig& cfg, Eigen::Index n_samples,
                              double sample_rate_hz, Rng& rng);

/// Y = H X + N per sample. snr_db = +inf disables noise.
std::vector<IqBuffer> apply_mimo(const std::vector<IqBuffer>& x,
                                 const MimoChannel& channel, double snr_db, Rng& rng);

}  // namespace bbtk::mimo
