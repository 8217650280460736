#include "bbtk/filter.hpp"

#include <cmath>
#include <numbers>

namespace bbtk {

namespace {

constexpr double kPi = std::numbers::pi_v<double>;

// Odd tap count covering span symbols at sps samples each.
Eigen::Index odd_length(int sps, int span) {
  Eigen::Index n = static_cast<Eigen::Index>(sps) * span + 1;
  if (n % 2 == 0) --n;
  return n;
}

}  // namespace

FilterTaps design_gaussian_filter(double bt, int samples_per_symbol, int span_symbols) {
  if (!(bt > 0.0) || bt > 1.0)
    throw InvalidParameter("design_gaussian_filter: bt must be in (0, 1]");
  if (samples_per_symbol < 2)
    throw InvalidParameter("design_gaussian_filter: samples_per_symbol must be >= 2");
  if (span_symbols < 2)
    throw InvalidParameter("design_gaussian_filter: span_symbols must be >= 2");

  const Eigen::Index n = odd_length(samples_per_symbol, span_symbols);
  const Eigen::Index c = (n - 1) / 2;
  // g(t) = exp(-alpha t^2) has |G(f)| = exp(-ln2/2 (f/B)^2): -3 dB at f = B = bt/T.
  const double alpha = 2.0 * kPi * kPi * bt * bt / std::numbers::ln2_v<double>;
  Eigen::VectorXd taps(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i - c) / samples_per_symbol;
    taps[i] = std::exp(-alpha * t * t);
  }
  taps /= taps.sum();
  return {taps, samples_per_symbol, span_symbols};
}

FilterTaps design_rrc_filter(double rolloff, int samples_per_symbol, int span_symbols) {
  if (rolloff < 0.0 || rolloff > 1.0)
    throw InvalidParameter("design_rrc_filter: rolloff must be in [0, 1]");
  if (samples_per_symbol < 2)
    throw InvalidParameter("design_rrc_filter: samples_per_symbol must be >= 2");
  if (span_symbols < 2)
    throw InvalidParameter("design_rrc_filter: span_symbols must be >= 2");

  const double b = rolloff;
  const Eigen::Index n = odd_length(samples_per_symbol, span_symbols);
  const Eigen::Index c = (n - 1) / 2;
  Eigen::VectorXd taps(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i - c) / samples_per_symbol;
    double h;
    if (std::abs(t) < 1e-12) {
      h = 1.0 - b + 4.0 * b / kPi;
    } else if (b > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * b)) < 1e-9) {
      h = b / std::numbers::sqrt2_v<double> *
          ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * b)) +
           (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * b)));
    } else {
      const double num =
          std::sin(kPi * t * (1.0 - b)) + 4.0 * b * t * std::cos(kPi * t * (1.0 + b));
      const double den = kPi * t * (1.0 - 16.0 * b * b * t * t);
      h = num / den;
    }
    taps[i] = h;
  }
  taps /= taps.norm();
  return {taps, samples_per_symbol, span_symbols};
}

double kaiser_beta_for_attenuation(double atten_db) {
  if (atten_db > 50.0) return 0.1102 * (atten_db - 8.7);
  if (atten_db >= 21.0) return 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0);
  return 0.0;
}

double bessel_i0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

Eigen::VectorXd kaiser_sinc_lowpass(Eigen::Index n_taps, double cutoff, double beta,
                                    double gain) {
  if (n_taps < 3 || n_taps % 2 == 0)
    throw InvalidParameter("kaiser_sinc_lowpass: odd tap count >= 3 required");
  if (!(cutoff > 0.0) || cutoff > 0.5)
    throw InvalidParameter("kaiser_sinc_lowpass: cutoff must be in (0, 0.5]");
  const Eigen::Index c = (n_taps - 1) / 2;
  const double i0_beta = bessel_i0(beta);
  Eigen::VectorXd taps(n_taps);
  for (Eigen::Index i = 0; i < n_taps; ++i) {
    const double t = static_cast<double>(i - c);
    const double x = 2.0 * kPi * cutoff * t;
    const double sinc = std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x;
    const double r = t / static_cast<double>(c);
    const double window = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    taps[i] = 2.0 * cutoff * sinc * window;
  }
  taps *= gain / taps.sum();
  return taps;
}

namespace {

template <typename Vector>
Vector fir_same_impl(const Eigen::VectorXd& taps, const Vector& x) {
  const Eigen::Index n = x.size();
  const Eigen::Index m = taps.size();
  const Eigen::Index off = (m - 1) / 2;
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    typename Vector::Scalar acc{};
    const Eigen::Index kmin = std::max<Eigen::Index>(0, i + off - n + 1);
    const Eigen::Index kmax = std::min<Eigen::Index>(m - 1, i + off);
    for (Eigen::Index k = kmin; k <= kmax; ++k) acc += taps[k] * x[i + off - k];
    y[i] = acc;
  }
  return y;
}

}  // namespace

Eigen::VectorXcd fir_filter_same(const Eigen::VectorXd& taps, const Eigen::VectorXcd& x) {
  return fir_same_impl(taps, x);
}

Eigen::VectorXd fir_filter_same(const Eigen::VectorXd& taps, const Eigen::VectorXd& x) {
  return fir_same_impl(taps, x);
}

Eigen::VectorXcd upsample_fir(const Eigen::VectorXd& taps, const Eigen::VectorXcd& x,
                              int up) {
  if (up < 1) throw InvalidParameter("upsample_fir: up must be >= 1");
  const Eigen::Index n = x.size();
  const Eigen::Index m = taps.size();
  const Eigen::Index off = (m - 1) / 2;
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n * up);
  // y[i] = sum_k taps[k] xup[i + off - k], xup nonzero at multiples of up.
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Eigen::Index top = i + off;
    Eigen::Index k = top % up;  // smallest k with (top - k) divisible by up
    Cplx acc{};
    for (; k < m; k += up) {
      const Eigen::Index j = (top - k) / up;
      if (j >= 0 && j < n) acc += taps[k] * x[j];
      if (j < 0) break;
    }
    y[i] = acc;
  }
  return y;
}

}  // namespace bbtk
