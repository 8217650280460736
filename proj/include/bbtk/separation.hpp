// Classical blind source separation baselines: complex FastICA over
// multichannel observations and beta-divergence NMF over mixture
// spectrograms with soft-mask reconstruction.
#pragma once

#include "bbtk/metrics.hpp"
#include "bbtk/rng.hpp"
#include "bbtk/types.hpp"

#include <cstdint>
#include <vector>

namespace bbtk::sep {

enum class IcaNonlinearity { LogCoshType, SqrtType };

struct IcaParams {
  int n_sources = 2;
  int max_iters = 200;
  double tolerance = 1e-10;
  IcaNonlinearity nonlinearity = IcaNonlinearity::SqrtType;
  std::uint64_t seed = 1;
};

struct IcaResult {
  std::vector<IqBuffer> estimates;  // unit variance
  Eigen::MatrixXcd unmixing;        // n_sources x n_observations
  bool converged = false;
  int iterations = 0;
};

/// Whitening by sample-covariance eigendecomposition, then complex
/// fixed-point iterations with symmetric decorrelation. Returns the best
/// iterate with converged = false when the tolerance is not reached.
IcaResult fastica_separate(const std::vector<IqBuffer>& observations,
                           const IcaParams& params);

struct NmfParams {
  int n_components = 8;
  double beta = 1.0;  // 2 Euclidean, 1 KL, 0 Itakura-Saito
  int max_iters = 200;
  int components_per_source = 4;
  std::uint64_t seed = 1;
};

struct NmfResult {
  std::vector<IqBuffer> estimates;
  Eigen::VectorXd divergence_history;  // non-increasing across iterations
  Eigen::MatrixXd w;                   // bins x components
  Eigen::MatrixXd h;                   // components x frames
};

/// Magnitude-spectrogram NMF by multiplicative updates; source estimates are
/// rebuilt by soft-masking the complex mixture STFT with component-group
/// masks (masks sum to 1 per cell), components grouped in construction order.
NmfResult nmf_separate(const IqBuffer& mixture, const NmfParams& params,
                       int stft_window = 256, int stft_hop = 128);

/// Same factorization, but components are grouped by best spectrogram match
/// against the reference sources (used by the evaluation harness, where
/// ground truth exists).
NmfResult nmf_separate_grouped(const IqBuffer& mixture,
                               const std::vector<IqBuffer>& references,
                               const NmfParams& params, int stft_window = 256,
                               int stft_hop = 128);

enum class Method { ICA, NMF };

struct SeparationCase {
  std::vector<IqBuffer> observations;  // >= 1; observations[0] is the mixture
  std::vector<IqBuffer> references;    // post-channel ground truth
};

struct EvalRow {
  int n_sources = 0;
  int n_cases = 0;
  double mean_improvement_db = 0.0;
  double std_improvement_db = 0.0;
  double runtime_s_per_1k_samples = 0.0;
};

/// Aggregates sinr_improvement over a suite, one row per source count.
std::vector<EvalRow> evaluate_separation(Method method,
                                         const std::vector<SeparationCase>& suite,
                                         const IcaParams& ica, const NmfParams& nmf);

}  // namespace bbtk::sep
