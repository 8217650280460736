// Thin wrappers over Eigen's FFT module so the rest of the code deals only in
// Eigen vectors. Forward transform is unscaled, inverse carries the 1/N.
#pragma once

#include "bbtk/types.hpp"

namespace bbtk {

Eigen::VectorXcd fft_forward(const Eigen::VectorXcd& x);
Eigen::VectorXcd fft_inverse(const Eigen::VectorXcd& x);

/// Forward FFT of length nfft (input zero-padded or truncated).
Eigen::VectorXcd fft_forward(const Eigen::VectorXcd& x, Eigen::Index nfft);

Eigen::VectorXcd fftshift(const Eigen::VectorXcd& x);
Eigen::VectorXd fftshift(const Eigen::VectorXd& x);

/// Frequency axis matching fftshift(fft_forward(x)) for sample rate fs.
Eigen::VectorXd fft_freqs(Eigen::Index n, double fs);

}  // namespace bbtk
