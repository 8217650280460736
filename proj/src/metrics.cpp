#include "bbtk/metrics.hpp"

#include "bbtk/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bbtk {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

Eigen::VectorXd hann_window(Eigen::Index n) {
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)));
  return w;
}

int auto_segment(Eigen::Index n) {
  int seg = 1024;
  while (seg > n && seg > 16) seg /= 2;
  return seg;
}

}  // namespace

Eigen::VectorXd Spectrum::power_db() const {
  Eigen::VectorXd out(power_lin.size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = 10.0 * std::log10(std::max(power_lin[i], 1e-300));
  return out;
}

double papr_db(const IqBuffer& buf) {
  require_valid(buf, "papr_db");
  const double mean = mean_power(buf);
  if (mean <= 0.0) throw NumericError("papr_db: zero-power input");
  const double peak = buf.samples.cwiseAbs2().maxCoeff();
  return 10.0 * std::log10(peak / mean);
}

Spectrum psd_welch(const IqBuffer& buf, int segment, double overlap) {
  require_valid(buf, "psd_welch");
  if (segment < 8) throw InvalidParameter("psd_welch: segment must be >= 8");
  if (segment > buf.samples.size())
    throw InvalidParameter("psd_welch: segment exceeds buffer length");
  if (overlap < 0.0 || overlap >= 1.0)
    throw InvalidParameter("psd_welch: overlap must be in [0, 1)");

  const Eigen::Index n = buf.samples.size();
  const Eigen::Index hop =
      std::max<Eigen::Index>(1, static_cast<Eigen::Index>(segment * (1.0 - overlap)));
  const Eigen::VectorXd w = hann_window(segment);
  const double wpow = w.squaredNorm();

  Eigen::VectorXd accum = Eigen::VectorXd::Zero(segment);
  Eigen::Index n_seg = 0;
  for (Eigen::Index s = 0; s + segment <= n; s += hop) {
    Eigen::VectorXcd seg = buf.samples.segment(s, segment).cwiseProduct(w.cast<Cplx>());
    accum += fft_forward(seg).cwiseAbs2();
    ++n_seg;
  }

  Spectrum sp;
  sp.bin_hz = buf.sample_rate_hz / static_cast<double>(segment);
  sp.freq_hz = fft_freqs(segment, buf.sample_rate_hz);
  sp.power_lin =
      fftshift(Eigen::VectorXd(accum / (static_cast<double>(n_seg) * wpow * buf.sample_rate_hz)));
  return sp;
}

double occupied_bandwidth(const IqBuffer& buf, double fraction) {
  require_valid(buf, "occupied_bandwidth");
  if (!(fraction > 0.0) || !(fraction < 1.0))
    throw InvalidParameter("occupied_bandwidth: fraction must be in (0, 1)");

  const Spectrum sp = psd_welch(buf, auto_segment(buf.samples.size()));
  const double total = sp.power_lin.sum();
  if (total <= 0.0) throw NumericError("occupied_bandwidth: zero-power spectrum");
  const double trim = 0.5 * (1.0 - fraction) * total;

  Eigen::Index lo = 0, hi = sp.power_lin.size() - 1;
  double acc = 0.0;
  while (lo < hi && acc + sp.power_lin[lo] <= trim) acc += sp.power_lin[lo++];
  acc = 0.0;
  while (hi > lo && acc + sp.power_lin[hi] <= trim) acc += sp.power_lin[hi--];
  return sp.freq_hz[hi] - sp.freq_hz[lo];
}

Eigen::MatrixXcd stft_complex(const Eigen::VectorXcd& x, int window, int hop) {
  if (window < 2) throw InvalidParameter("stft: window must be >= 2");
  if (hop < 1 || hop > window) throw InvalidParameter("stft: need window >= hop >= 1");
  if (window > x.size()) throw InvalidParameter("stft: window exceeds buffer");

  const Eigen::Index n_frames = (x.size() - window) / hop + 1;
  const Eigen::VectorXd w = hann_window(window);
  Eigen::MatrixXcd frames(n_frames, window);
  for (Eigen::Index f = 0; f < n_frames; ++f) {
    Eigen::VectorXcd seg = x.segment(f * hop, window).cwiseProduct(w.cast<Cplx>());
    frames.row(f) = fft_forward(seg).transpose();
  }
  return frames;
}

Eigen::MatrixXd stft_spectrogram(const IqBuffer& buf, int window, int hop) {
  require_valid(buf, "stft_spectrogram");
  const Eigen::MatrixXcd frames = stft_complex(buf.samples, window, hop);
  Eigen::MatrixXd mag(frames.rows(), frames.cols());
  for (Eigen::Index f = 0; f < frames.rows(); ++f) {
    mag.row(f) = fftshift(Eigen::VectorXcd(frames.row(f).transpose())).cwiseAbs().transpose();
  }
  return mag;
}

Eigen::VectorXcd istft_complex(const Eigen::MatrixXcd& frames, int window, int hop,
                               Eigen::Index n_samples) {
  if (frames.cols() != window) throw InvalidParameter("istft: frame width mismatch");
  const Eigen::VectorXd w = hann_window(window);
  Eigen::VectorXcd num = Eigen::VectorXcd::Zero(n_samples);
  Eigen::VectorXd den = Eigen::VectorXd::Zero(n_samples);
  for (Eigen::Index f = 0; f < frames.rows(); ++f) {
    const Eigen::Index start = f * hop;
    Eigen::VectorXcd t = fft_inverse(Eigen::VectorXcd(frames.row(f).transpose()));
    for (Eigen::Index i = 0; i < window && start + i < n_samples; ++i) {
      num[start + i] += w[i] * t[i];
      den[start + i] += w[i] * w[i];
    }
  }
  // Edge samples are covered by a single window tail; flooring the
  // normalizer keeps masked (non window-shaped) frames from blowing up there.
  const double floor_den = 0.25 * den.maxCoeff();
  for (Eigen::Index i = 0; i < n_samples; ++i)
    num[i] = num[i] / std::max(den[i], floor_den);
  return num;
}

MetricsReport measure(const IqBuffer& buf) {
  require_valid(buf, "measure");
  MetricsReport r;
  r.papr_db = papr_db(buf);
  r.obw_hz = occupied_bandwidth(buf);
  r.mean_power_db = pow_to_db(mean_power(buf));
  r.sample_rate_hz = buf.sample_rate_hz;
  r.n_samples = buf.samples.size();
  r.psd = psd_welch(buf, auto_segment(buf.samples.size()));

  constexpr int kBins = 64;
  const Eigen::VectorXd amp = buf.samples.cwiseAbs();
  const double top = std::max(amp.maxCoeff(), 1e-30);
  r.amplitude_bin_edges = Eigen::VectorXd::LinSpaced(kBins + 1, 0.0, top);
  r.amplitude_counts = Eigen::VectorXd::Zero(kBins);
  for (Eigen::Index i = 0; i < amp.size(); ++i) {
    int b = std::min(kBins - 1, static_cast<int>(amp[i] / top * kBins));
    r.amplitude_counts[b] += 1.0;
  }
  return r;
}

namespace {

struct PairFit {
  double out_sinr_db = 0.0;
  Cplx scale{};
};

PairFit fit_pair(const Eigen::VectorXcd& reference, const Eigen::VectorXcd& estimate) {
  PairFit fit;
  const double rp = reference.squaredNorm();
  if (rp <= 0.0) return {-kSinrCapDb, Cplx{}};
  const Cplx b = reference.dot(estimate) / rp;  // dot() conjugates the left side
  fit.scale = b;
  const double sig = std::norm(b) * rp;
  const double err = (estimate - b * reference).squaredNorm();
  if (sig <= 0.0) return {-kSinrCapDb, b};
  const double ratio = err > 0.0 ? sig / err : std::numeric_limits<double>::infinity();
  fit.out_sinr_db = std::min(kSinrCapDb, 10.0 * std::log10(ratio));
  return fit;
}

}  // namespace

SinrScore sinr_improvement(const std::vector<IqBuffer>& estimates,
                           const std::vector<IqBuffer>& references,
                           const IqBuffer& mixture) {
  if (references.empty()) throw InvalidParameter("sinr_improvement: no references");
  if (estimates.size() > references.size())
    throw InvalidParameter("sinr_improvement: more estimates than references");
  if (references.size() > 8)
    throw InvalidParameter("sinr_improvement: too many sources for exhaustive alignment");
  const Eigen::Index n = mixture.samples.size();
  for (const auto& r : references)
    if (r.samples.size() != n) throw InvalidParameter("sinr_improvement: length mismatch");
  for (const auto& e : estimates)
    if (e.samples.size() != n) throw InvalidParameter("sinr_improvement: length mismatch");

  const int n_ref = static_cast<int>(references.size());
  const int n_est = static_cast<int>(estimates.size());

  SinrScore score;
  score.per_source_sinr_in_db.resize(n_ref);
  for (int i = 0; i < n_ref; ++i) {
    const double sig = references[i].samples.squaredNorm();
    const double res = (mixture.samples - references[i].samples).squaredNorm();
    const double ratio = res > 0.0 ? sig / res : std::numeric_limits<double>::infinity();
    score.per_source_sinr_in_db[i] =
        std::min(kSinrCapDb, std::max(-kSinrCapDb, 10.0 * std::log10(std::max(ratio, 1e-30))));
  }

  // All (source, estimate) fits, then exhaustive assignment.
  Eigen::MatrixXd out_db(n_ref, std::max(n_est, 1));
  Eigen::MatrixXcd scales(n_ref, std::max(n_est, 1));
  for (int i = 0; i < n_ref; ++i)
    for (int j = 0; j < n_est; ++j) {
      const PairFit fit = fit_pair(references[i].samples, estimates[j].samples);
      out_db(i, j) = fit.out_sinr_db;
      scales(i, j) = fit.scale;
    }

  std::vector<int> sources(n_ref);
  for (int i = 0; i < n_ref; ++i) sources[i] = i;
  std::vector<int> best_assign(n_ref, -1);
  double best_total = -std::numeric_limits<double>::infinity();
  std::vector<int> perm = sources;
  std::sort(perm.begin(), perm.end());
  do {
    double total = 0.0;
    for (int j = 0; j < n_est; ++j) total += out_db(perm[j], j);
    if (total > best_total) {
      best_total = total;
      std::fill(best_assign.begin(), best_assign.end(), -1);
      for (int j = 0; j < n_est; ++j) best_assign[perm[j]] = j;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  score.permutation = best_assign;
  score.per_source_sinr_out_db.resize(n_ref);
  score.scales = Eigen::VectorXcd::Zero(n_ref);
  score.improvement_db.resize(n_ref);
  for (int i = 0; i < n_ref; ++i) {
    const int j = best_assign[i];
    if (j >= 0) {
      score.per_source_sinr_out_db[i] = out_db(i, j);
      score.scales[i] = scales(i, j);
    } else {
      score.per_source_sinr_out_db[i] = score.per_source_sinr_in_db[i];
    }
    score.improvement_db[i] =
        score.per_source_sinr_out_db[i] - score.per_source_sinr_in_db[i];
  }
  score.mean_improvement_db = score.improvement_db.mean();
  return score;
}

}  // namespace bbtk
