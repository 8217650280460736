#include "bbtk/dsp.hpp"

#include "bbtk/filter.hpp"
#include "bbtk/metrics.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <utility>

namespace bbtk {

namespace {
constexpr double kPi = std::numbers::pi_v<double>;
}

IqBuffer frequency_shift(const IqBuffer& buf, double offset_hz) {
  require_valid(buf, "frequency_shift");
  if (std::abs(offset_hz) >= buf.sample_rate_hz / 2.0)
    throw NumericError("frequency_shift: |offset| >= fs/2 would alias");
  if (offset_hz == 0.0) return buf;

  IqBuffer out = buf;
  const double w = 2.0 * kPi * offset_hz / buf.sample_rate_hz;
  for (Eigen::Index n = 0; n < out.samples.size(); ++n)
    out.samples[n] *= std::polar(1.0, w * static_cast<double>(n));
  return out;
}

std::pair<std::int64_t, std::int64_t> rational_approx(double x, std::int64_t max_den) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw InvalidParameter("rational_approx: x must be positive and finite");
  // Continued-fraction convergents p/q with q bounded.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double ai = std::floor(frac);
    if (ai > 9e17) break;
    const std::int64_t a = static_cast<std::int64_t>(ai);
    if (q1 * a + q0 > max_den) break;
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rem = frac - ai;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) throw NumericError("rational_approx: no convergent within bound");
  const double err = std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x);
  if (err > 1e-9 * x)
    throw NumericError("rational_approx: ratio not representable with bounded denominator");
  return {p1, q1};
}

namespace {

// Cached Kaiser prototype for the polyphase path, keyed by (up, down).
const Eigen::VectorXd& polyphase_taps(std::int64_t up, std::int64_t down) {
  thread_local std::map<std::pair<std::int64_t, std::int64_t>, Eigen::VectorXd> cache;
  auto it = cache.find({up, down});
  if (it != cache.end()) return it->second;

  // Lowpass at the up-sampled rate: passband 0.45*min(fs, fs'), stopband
  // 0.5*min(fs, fs'), 80 dB Kaiser.
  const std::int64_t max_rate = std::max(up, down);
  const double atten_db = 80.0;
  const double beta = kaiser_beta_for_attenuation(atten_db);
  const double trans = 0.1 * kPi / static_cast<double>(max_rate);
  const Eigen::Index half =
      static_cast<Eigen::Index>(std::ceil((atten_db - 8.0) / (2.285 * trans) / 2.0));
  const double cutoff = 0.475 / static_cast<double>(max_rate);
  Eigen::VectorXd taps =
      kaiser_sinc_lowpass(2 * half + 1, cutoff, beta, static_cast<double>(up));
  return cache.emplace(std::make_pair(up, down), std::move(taps)).first->second;
}

// Exact polyphase gather for modest rational factors.
Eigen::VectorXcd resample_polyphase(const Eigen::VectorXcd& x, std::int64_t up,
                                    std::int64_t down) {
  const Eigen::VectorXd& taps = polyphase_taps(up, down);
  const Eigen::Index n_taps = taps.size();
  const Eigen::Index half = (n_taps - 1) / 2;
  const Eigen::Index n_in = x.size();
  const Eigen::Index n_out = (n_in * up) / down;
  Eigen::VectorXcd y(n_out);
  for (Eigen::Index m = 0; m < n_out; ++m) {
    const std::int64_t center = static_cast<std::int64_t>(m) * down + half;
    std::int64_t k = center % up;
    Cplx acc{};
    for (; k < n_taps; k += up) {
      const std::int64_t j = (center - k) / up;
      if (j < 0) break;
      if (j < n_in) acc += taps[k] * x[j];
    }
    y[m] = acc;
  }
  return y;
}

// Arbitrary-phase windowed-sinc interpolation for large rational factors.
// The kernel is a Kaiser sinc evaluated at exact fractional offsets, with the
// window shape read from a precomputed grid.
Eigen::VectorXcd resample_sinc(const Eigen::VectorXcd& x, double ratio) {
  constexpr Eigen::Index kHalfZeroes = 32;
  const double beta = kaiser_beta_for_attenuation(80.0);
  const double i0_beta = bessel_i0(beta);
  constexpr int kGrid = 8192;
  thread_local Eigen::VectorXd window;
  if (window.size() == 0) {
    window.resize(kGrid + 1);
    for (int i = 0; i <= kGrid; ++i) {
      const double r = static_cast<double>(i) / kGrid;
      window[i] = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    }
  }

  const double scale = std::min(1.0, ratio) * 0.95;  // cutoff below both Nyquists
  const double half_width = static_cast<double>(kHalfZeroes) / scale;
  const Eigen::Index n_in = x.size();
  const Eigen::Index n_out = static_cast<Eigen::Index>(std::floor(n_in * ratio));
  Eigen::VectorXcd y(n_out);
  for (Eigen::Index m = 0; m < n_out; ++m) {
    const double pos = static_cast<double>(m) / ratio;
    const Eigen::Index k0 = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::ceil(pos - half_width)));
    const Eigen::Index k1 = std::min<Eigen::Index>(n_in - 1, static_cast<Eigen::Index>(std::floor(pos + half_width)));
    Cplx acc{};
    for (Eigen::Index k = k0; k <= k1; ++k) {
      const double t = scale * (static_cast<double>(k) - pos);
      const double s = std::abs(t) < 1e-12 ? 1.0 : std::sin(kPi * t) / (kPi * t);
      const double w = window[static_cast<int>(std::abs(t) / kHalfZeroes * kGrid)];
      acc += (scale * s * w) * x[k];
    }
    y[m] = acc;
  }
  return y;
}

}  // namespace

IqBuffer resample(const IqBuffer& buf, double target_rate_hz, bool strict) {
  require_valid(buf, "resample");
  if (!(target_rate_hz > 0.0))
    throw InvalidParameter("resample: target rate must be positive");

  const auto [up, down] = rational_approx(target_rate_hz / buf.sample_rate_hz, 1000000);
  if (up == down) {
    IqBuffer out = buf;
    out.sample_rate_hz = target_rate_hz;
    return out;
  }
  if (strict && target_rate_hz < buf.sample_rate_hz) {
    if (occupied_bandwidth(buf, 0.99) > target_rate_hz)
      throw NumericError("resample: target rate below occupied bandwidth (strict mode)");
  }

  IqBuffer out;
  if (std::max(up, down) <= 8192) {
    out.samples = resample_polyphase(buf.samples, up, down);
  } else {
    out.samples = resample_sinc(buf.samples, static_cast<double>(up) / static_cast<double>(down));
  }
  out.sample_rate_hz = buf.sample_rate_hz * static_cast<double>(up) / static_cast<double>(down);
  out.label = buf.label;
  out.seed = buf.seed;
  return out;
}

IqBuffer normalize_power(const IqBuffer& buf, double target_db) {
  require_valid(buf, "normalize_power");
  const double p = mean_power(buf);
  if (p <= 0.0) throw NumericError("normalize_power: zero-power input");
  IqBuffer out = buf;
  out.samples *= std::sqrt(db_to_pow(target_db) / p);
  return out;
}

IqBuffer fractional_delay(const IqBuffer& buf, double delay_s) {
  require_valid(buf, "fractional_delay");
  if (delay_s < 0.0) throw InvalidParameter("fractional_delay: delay must be >= 0");
  const double d = delay_s * buf.sample_rate_hz;
  const Eigen::Index n0 = static_cast<Eigen::Index>(std::floor(d));
  const double mu = d - static_cast<double>(n0);

  Eigen::VectorXcd shifted;
  if (mu < 1e-12) {
    shifted = buf.samples;
  } else {
    // Windowed-sinc interpolator at fractional offset mu.
    constexpr Eigen::Index kHalf = 32;
    const double beta = kaiser_beta_for_attenuation(80.0);
    const double i0_beta = bessel_i0(beta);
    Eigen::VectorXd h(2 * kHalf + 1);
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      const double t = static_cast<double>(i - kHalf) - mu;
      const double x = kPi * t;
      const double sinc = std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x;
      const double r = t / static_cast<double>(kHalf + 1);
      const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
      h[i] = sinc * w;
    }
    shifted = fir_filter_same(h, buf.samples);
  }

  IqBuffer out = buf;
  out.samples = Eigen::VectorXcd::Zero(buf.samples.size() + n0);
  out.samples.tail(shifted.size()) = shifted;
  return out;
}

}  // namespace bbtk
