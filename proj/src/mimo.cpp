#include "bbtk/mimo.hpp"

#include <cmath>

namespace bbtk::mimo {

Eigen::MatrixXd correlation_matrix(int n, double rho) {
  if (n < 1) throw InvalidParameter("correlation_matrix: n must be >= 1");
  if (rho < 0.0 || rho >= 1.0)
    throw InvalidParameter("correlation_matrix: rho must be in [0, 1)");
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = std::pow(rho, std::abs(i - j));
  return r;
}

Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  Eigen::VectorXd ev = solver.eigenvalues().cwiseMax(1e-12);
  return solver.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         solver.eigenvectors().transpose();
}

Eigen::MatrixXcd MimoChannel::at(Eigen::Index n) const {
  if (!time_varying()) return flat;
  Eigen::MatrixXcd hw(n_rx, n_tx);
  for (int r = 0; r < n_rx; ++r)
    for (int t = 0; t < n_tx; ++t) hw(r, t) = gains[static_cast<size_t>(r) * n_tx + t][n];
  return rx_sqrt * hw * tx_sqrt;
}

MimoChannel draw_mimo_channel(const MimoConfig& cfg, Eigen::Index n_samples,
                              double sample_rate_hz, Rng& rng) {
  if (cfg.n_tx < 1 || cfg.n_tx > 8 || cfg.n_rx < 1 || cfg.n_rx > 8)
    throw InvalidParameter("draw_mimo_channel: antenna counts must be in 1..8");
  if (n_samples < 1) throw InvalidParameter("draw_mimo_channel: n_samples must be >= 1");
  if (cfg.fading.doppler_hz > 0.0 && !(sample_rate_hz > 0.0))
    throw InvalidParameter("draw_mimo_channel: time-varying channel needs a sample rate");

  MimoChannel ch;
  ch.n_rx = cfg.n_rx;
  ch.n_tx = cfg.n_tx;
  ch.rx_sqrt = matrix_sqrt_psd(correlation_matrix(cfg.n_rx, cfg.rx_corr_rho));
  ch.tx_sqrt = matrix_sqrt_psd(correlation_matrix(cfg.n_tx, cfg.tx_corr_rho));

  if (cfg.fading.doppler_hz <= 0.0) {
    Eigen::MatrixXcd hw(cfg.n_rx, cfg.n_tx);
    for (int r = 0; r < cfg.n_rx; ++r)
      for (int t = 0; t < cfg.n_tx; ++t) hw(r, t) = rng.cgaussian();
    ch.flat = ch.rx_sqrt * hw * ch.tx_sqrt;
    return ch;
  }

  // Element fading trajectories reuse the scalar channel machinery; the
  // Kronecker factors are applied per sample in at().
  chan::FadingSpec element = cfg.fading;
  element.shadowing_sigma_db = 0.0;
  ch.gains.resize(static_cast<size_t>(cfg.n_rx) * cfg.n_tx);
  for (int r = 0; r < cfg.n_rx; ++r)
    for (int t = 0; t < cfg.n_tx; ++t) {
      Rng element_rng = rng.split(static_cast<std::uint64_t>(r) * 16 + t);
      ch.gains[static_cast<size_t>(r) * cfg.n_tx + t] =
          chan::fading_process(element, n_samples, sample_rate_hz, element_rng);
    }
  return ch;
}

std::vector<IqBuffer> apply_mimo(const std::vector<IqBuffer>& x,
                                 const MimoChannel& channel, double snr_db, Rng& rng) {
  if (static_cast<int>(x.size()) != channel.n_tx)
    throw InvalidParameter("apply_mimo: stream count must match n_tx");
  const Eigen::Index n = x.front().samples.size();
  const double fs = x.front().sample_rate_hz;
  for (const auto& s : x) {
    require_valid(s, "apply_mimo");
    if (s.samples.size() != n || s.sample_rate_hz != fs)
      throw InvalidParameter("apply_mimo: streams must share length and rate");
  }
  if (channel.time_varying()) {
    for (const auto& g : channel.gains)
      if (g.size() < n) throw InvalidParameter("apply_mimo: channel shorter than signal");
  }

  std::vector<IqBuffer> y(channel.n_rx);
  for (auto& out : y) {
    out.samples = Eigen::VectorXcd::Zero(n);
    out.sample_rate_hz = fs;
    out.label = "MIMO";
  }

  if (!channel.time_varying()) {
    for (int r = 0; r < channel.n_rx; ++r)
      for (int t = 0; t < channel.n_tx; ++t)
        y[r].samples += channel.flat(r, t) * x[t].samples;
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::MatrixXcd h = channel.at(i);
      for (int r = 0; r < channel.n_rx; ++r) {
        Cplx acc{};
        for (int t = 0; t < channel.n_tx; ++t) acc += h(r, t) * x[t].samples[i];
        y[r].samples[i] = acc;
      }
    }
  }

  if (!(std::isinf(snr_db) && snr_db > 0)) {
    double sig = 0.0;
    for (const auto& out : y) sig += mean_power(out.samples);
    sig /= static_cast<double>(y.size());
    if (sig <= 0.0) throw NumericError("apply_mimo: zero-power output");
    const double namp = std::sqrt(sig / db_to_pow(snr_db));
    for (size_t r = 0; r < y.size(); ++r) {
      Rng noise_rng = rng.split(r);
      for (Eigen::Index i = 0; i < n; ++i)
        y[r].samples[i] += namp * noise_rng.cgaussian();
    }
  }
  return y;
}

}  // namespace bbtk::mimo
