// Pulse-shaping filter design (Gaussian, root-raised-cosine, Kaiser-windowed
// sinc) plus the FIR helpers the modulators build on.
#pragma once

#include "bbtk/types.hpp"

namespace bbtk {

/// Symmetric odd-length FIR prototype tied to a symbol/chip lattice.
struct FilterTaps {
  Eigen::VectorXd taps;
  int samples_per_symbol = 1;
  int span_symbols = 1;
};

/// Gaussian lowpass with 3 dB bandwidth bt/T, truncated to span symbols and
/// normalized to unit DC gain so the shaped NRZ stream integrates to a half
/// cycle of phase per symbol at modulation index 0.5.
FilterTaps design_gaussian_filter(double bt, int samples_per_symbol, int span_symbols);

/// Root-raised-cosine with unit energy (sum of squared taps = 1).
FilterTaps design_rrc_filter(double rolloff, int samples_per_symbol, int span_symbols);

/// Kaiser-windowed sinc lowpass. cutoff is normalized to the sampling rate
/// (0.5 = Nyquist); gain is the passband gain.
Eigen::VectorXd kaiser_sinc_lowpass(Eigen::Index n_taps, double cutoff, double beta,
                                    double gain);

double kaiser_beta_for_attenuation(double atten_db);

/// Modified Bessel function of the first kind, order zero (power series).
double bessel_i0(double x);

/// Centered ("same") convolution: y[n] = sum_k h[k] x[n - k + (N-1)/2].
Eigen::VectorXcd fir_filter_same(const Eigen::VectorXd& taps, const Eigen::VectorXcd& x);
Eigen::VectorXd fir_filter_same(const Eigen::VectorXd& taps, const Eigen::VectorXd& x);

/// Zero-stuff by factor up then filter, computed polyphase. Output has
/// x.size()*up samples aligned so input sample n sits at output index n*up.
Eigen::VectorXcd upsample_fir(const Eigen::VectorXd& taps, const Eigen::VectorXcd& x,
                              int up);

}  // namespace bbtk
