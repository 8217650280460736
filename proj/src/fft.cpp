#include "bbtk/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace bbtk {

namespace {
Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}
}  // namespace

Eigen::VectorXcd fft_forward(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out(x.size());
  engine().fwd(out.data(), x.data(), static_cast<int>(x.size()));
  return out;
}

Eigen::VectorXcd fft_inverse(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out(x.size());
  engine().inv(out.data(), x.data(), static_cast<int>(x.size()));
  return out;
}

Eigen::VectorXcd fft_forward(const Eigen::VectorXcd& x, Eigen::Index nfft) {
  if (nfft <= 0) throw InvalidParameter("fft_forward: nfft must be positive");
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(nfft);
  const Eigen::Index n = std::min(nfft, x.size());
  in.head(n) = x.head(n);
  return fft_forward(in);
}

Eigen::VectorXcd fftshift(const Eigen::VectorXcd& x) {
  const Eigen::Index n = x.size();
  const Eigen::Index h = (n + 1) / 2;
  Eigen::VectorXcd out(n);
  out.head(n - h) = x.tail(n - h);
  out.tail(h) = x.head(h);
  return out;
}

Eigen::VectorXd fftshift(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  const Eigen::Index h = (n + 1) / 2;
  Eigen::VectorXd out(n);
  out.head(n - h) = x.tail(n - h);
  out.tail(h) = x.head(h);
  return out;
}

Eigen::VectorXd fft_freqs(Eigen::Index n, double fs) {
  Eigen::VectorXd f(n);
  const double df = fs / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index k = i < (n + 1) / 2 ? i : i - n;
    f[i] = static_cast<double>(k) * df;
  }
  return fftshift(f);
}

}  // namespace bbtk
