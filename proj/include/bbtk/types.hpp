// Core types shared by every module: complex sample buffers, Eigen aliases,
// dB helpers and the error taxonomy.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bbtk {

template <typename Scalar>
using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;
template <typename Scalar>
using CVec = Eigen::Vector<std::complex<Scalar>, Eigen::Dynamic>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CMat = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Cplx = std::complex<double>;

/// Parameter outside its admissible range. CLI maps this to exit code 1.
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// File or filesystem failure. CLI maps this to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numeric failure (aliasing, non-convergence in strict mode, zero power).
/// CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniformly sampled complex baseband signal. The universal currency between
/// generators, channels, metrics and separation.
struct IqBuffer {
  Eigen::VectorXcd samples;
  double sample_rate_hz = 0.0;
  std::string label;
  std::uint64_t seed = 0;

  Eigen::Index size() const { return samples.size(); }
  double duration_s() const {
    return sample_rate_hz > 0 ? static_cast<double>(samples.size()) / sample_rate_hz : 0.0;
  }
};

template <typename Derived>
double mean_power(const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return 0.0;
  return x.squaredNorm() / static_cast<double>(x.size());
}

inline double mean_power(const IqBuffer& buf) { return mean_power(buf.samples); }

inline double db_to_pow(double db) { return std::pow(10.0, db / 10.0); }
inline double pow_to_db(double p) { return 10.0 * std::log10(p); }
inline double db_to_amp(double db) { return std::pow(10.0, db / 20.0); }

/// Throws InvalidParameter when a buffer is empty, has a non-positive rate or
/// contains non-finite values.
inline void require_valid(const IqBuffer& buf, const char* who) {
  if (buf.samples.size() == 0)
    throw InvalidParameter(std::string(who) + ": empty buffer");
  if (!(buf.sample_rate_hz > 0.0))
    throw InvalidParameter(std::string(who) + ": sample_rate_hz must be positive");
  if (!buf.samples.allFinite())
    throw InvalidParameter(std::string(who) + ": buffer contains non-finite samples");
}

}  // namespace bbtk
