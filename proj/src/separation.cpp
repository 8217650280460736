#include "bbtk/separation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace bbtk::sep {

namespace {

// Symmetric decorrelation: W <- (W W^H)^(-1/2) W.
Eigen::MatrixXcd symmetric_decorrelate(const Eigen::MatrixXcd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(w * w.adjoint());
  const Eigen::VectorXd ev = solver.eigenvalues().cwiseMax(1e-15);
  return solver.eigenvectors() * ev.cwiseInverse().cwiseSqrt().asDiagonal() *
         solver.eigenvectors().adjoint() * w;
}

}  // namespace

IcaResult fastica_separate(const std::vector<IqBuffer>& observations,
                           const IcaParams& params) {
  const int m = static_cast<int>(observations.size());
  const int n = params.n_sources;
  if (m < 1) throw InvalidParameter("fastica_separate: no observations");
  if (n < 1 || n > m)
    throw InvalidParameter("fastica_separate: need 1 <= n_sources <= n_observations");
  const Eigen::Index t = observations.front().samples.size();
  const double fs = observations.front().sample_rate_hz;
  for (const auto& o : observations) {
    require_valid(o, "fastica_separate");
    if (o.samples.size() != t || o.sample_rate_hz != fs)
      throw InvalidParameter("fastica_separate: observations must share length and rate");
  }
  if (t < 100 * n)
    throw InvalidParameter("fastica_separate: need at least 100 samples per source");

  Eigen::MatrixXcd x(m, t);
  for (int i = 0; i < m; ++i) x.row(i) = observations[i].samples.transpose();
  const Eigen::VectorXcd means = x.rowwise().mean();
  x.colwise() -= means;

  // Whitening: top-n eigenpairs of the sample covariance.
  const Eigen::MatrixXcd cov = x * x.adjoint() / static_cast<double>(t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cov);
  const Eigen::VectorXd ev = eig.eigenvalues();  // ascending
  if (ev(m - std::min(n, m)) < 1e-12 * std::max(ev(m - 1), 1e-300))
    throw NumericError("fastica_separate: rank-deficient covariance");
  Eigen::MatrixXcd whiten(n, m);
  for (int i = 0; i < n; ++i) {
    const int src = m - 1 - i;
    whiten.row(i) = eig.eigenvectors().col(src).adjoint() / std::sqrt(ev(src));
  }
  Eigen::MatrixXcd z = whiten * x;  // n x t, identity covariance

  const double eps = 0.1;
  const bool sqrt_type = params.nonlinearity == IcaNonlinearity::SqrtType;
  Rng rng(params.seed, 0xFA57);
  Eigen::MatrixXcd w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = rng.cgaussian();
  w = symmetric_decorrelate(w);

  IcaResult result;
  for (int iter = 0; iter < params.max_iters; ++iter) {
    Eigen::MatrixXcd w_new(n, n);
    const Eigen::MatrixXcd u = w.conjugate() * z;  // u(i, :) = w_i^H z
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd y = u.row(i).cwiseAbs2().transpose();
      Eigen::VectorXd g(t), gp(t);
      if (sqrt_type) {
        for (Eigen::Index k = 0; k < t; ++k) {
          const double s = std::sqrt(eps + y[k]);
          g[k] = 0.5 / s;
          gp[k] = -0.25 / (s * s * s);
        }
      } else {
        for (Eigen::Index k = 0; k < t; ++k) {
          const double s = eps + y[k];
          g[k] = 1.0 / s;
          gp[k] = -1.0 / (s * s);
        }
      }
      // w+ = E{z (w^H z)^* g} - E{g + |w^H z|^2 g'} w
      const Eigen::VectorXcd zu =
          z * u.row(i).adjoint().cwiseProduct(g.cast<Cplx>()) / static_cast<double>(t);
      const double mean_term = (g + y.cwiseProduct(gp)).mean();
      w_new.row(i) = (zu - mean_term * w.row(i).transpose()).transpose();
    }
    w_new = symmetric_decorrelate(w_new);

    double delta = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = std::abs(w_new.row(i).dot(w.row(i)));
      delta = std::max(delta, 1.0 - std::min(1.0, c));
    }
    w = w_new;
    result.iterations = iter + 1;
    if (delta < params.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.unmixing = w.conjugate() * whiten;  // estimates = unmixing * x
  Eigen::MatrixXcd y = w.conjugate() * z;
  result.estimates.resize(n);
  for (int i = 0; i < n; ++i) {
    IqBuffer est;
    est.samples = y.row(i).transpose();
    const double p = mean_power(est.samples);
    if (p > 0.0) est.samples /= std::sqrt(p);
    est.sample_rate_hz = fs;
    est.label = "ICA";
    result.estimates[i] = std::move(est);
  }
  return result;
}

namespace {

double beta_divergence(const Eigen::MatrixXd& v, const Eigen::MatrixXd& lam, double beta) {
  constexpr double kFloor = 1e-12;
  double d = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = std::max(v(i), kFloor);
    const double y = std::max(lam(i), kFloor);
    if (beta == 2.0) {
      d += 0.5 * (x - y) * (x - y);
    } else if (beta == 1.0) {
      d += x * std::log(x / y) - x + y;
    } else {
      d += x / y - std::log(x / y) - 1.0;
    }
  }
  return d;
}

struct Factorization {
  Eigen::MatrixXd w;  // bins x components
  Eigen::MatrixXd h;  // components x frames
  Eigen::VectorXd divergence_history;
};

Factorization factorize(const Eigen::MatrixXd& v, const NmfParams& params) {
  constexpr double kFloor = 1e-12;
  const Eigen::Index bins = v.rows();
  const Eigen::Index frames = v.cols();
  const int k = params.n_components;

  Rng rng(params.seed, 0x9F);
  Eigen::MatrixXd w(bins, k), h(k, frames);
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = 0.1 + rng.uniform();
  for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = 0.1 + rng.uniform();

  Factorization out;
  out.divergence_history.resize(params.max_iters);
  Eigen::MatrixXd lam = (w * h).cwiseMax(kFloor);
  for (int iter = 0; iter < params.max_iters; ++iter) {
    // H update.
    if (params.beta == 2.0) {
      h = h.cwiseProduct((w.transpose() * v).cwiseQuotient(
          (w.transpose() * lam).cwiseMax(kFloor)));
    } else if (params.beta == 1.0) {
      const Eigen::MatrixXd ratio = v.cwiseQuotient(lam);
      const Eigen::VectorXd wsum = w.colwise().sum().cwiseMax(kFloor);
      h = (h.cwiseProduct(w.transpose() * ratio).array().colwise() /
           wsum.array()).matrix();
    } else {
      const Eigen::MatrixXd lam_inv = lam.cwiseInverse();
      const Eigen::MatrixXd num = v.cwiseProduct(lam_inv.cwiseProduct(lam_inv));
      h = h.cwiseProduct((w.transpose() * num).cwiseQuotient(
          (w.transpose() * lam_inv).cwiseMax(kFloor)));
    }
    h = h.cwiseMax(kFloor);
    lam = (w * h).cwiseMax(kFloor);

    // W update.
    if (params.beta == 2.0) {
      w = w.cwiseProduct((v * h.transpose()).cwiseQuotient(
          (lam * h.transpose()).cwiseMax(kFloor)));
    } else if (params.beta == 1.0) {
      const Eigen::MatrixXd ratio = v.cwiseQuotient(lam);
      const Eigen::VectorXd hsum = h.rowwise().sum().cwiseMax(kFloor);
      w = (w.cwiseProduct(ratio * h.transpose()).array().rowwise() /
           hsum.transpose().array()).matrix();
    } else {
      const Eigen::MatrixXd lam_inv = lam.cwiseInverse();
      const Eigen::MatrixXd num = v.cwiseProduct(lam_inv.cwiseProduct(lam_inv));
      w = w.cwiseProduct((num * h.transpose()).cwiseQuotient(
          (lam_inv * h.transpose()).cwiseMax(kFloor)));
    }
    w = w.cwiseMax(kFloor);
    lam = (w * h).cwiseMax(kFloor);

    out.divergence_history[iter] = beta_divergence(v, lam, params.beta);
  }
  out.w = w;
  out.h = h;
  return out;
}

NmfResult reconstruct(const IqBuffer& mixture, const Factorization& fac,
                      const std::vector<std::vector<int>>& groups,
                      const Eigen::MatrixXcd& stft, int window, int hop) {
  constexpr double kFloor = 1e-12;
  NmfResult result;
  result.w = fac.w;
  result.h = fac.h;
  result.divergence_history = fac.divergence_history;

  // Wiener-style power masks per group; masks sum to 1 per cell.
  const Eigen::Index bins = fac.w.rows();
  const Eigen::Index frames = fac.h.cols();
  std::vector<Eigen::MatrixXd> group_power(groups.size());
  Eigen::MatrixXd total = Eigen::MatrixXd::Constant(bins, frames, kFloor);
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(bins, frames);
    for (int k : groups[gi]) lam += fac.w.col(k) * fac.h.row(k);
    group_power[gi] = lam.cwiseProduct(lam);
    total += group_power[gi];
  }

  for (size_t gi = 0; gi < groups.size(); ++gi) {
    const Eigen::MatrixXd mask = group_power[gi].cwiseQuotient(total);
    Eigen::MatrixXcd masked(frames, window);
    for (Eigen::Index f = 0; f < frames; ++f)
      for (Eigen::Index b = 0; b < bins; ++b)
        masked(f, b) = stft(f, b) * mask(b, f);
    IqBuffer est;
    est.samples = istft_complex(masked, window, hop, mixture.samples.size());
    est.sample_rate_hz = mixture.sample_rate_hz;
    est.label = "NMF";
    result.estimates.push_back(std::move(est));
  }
  return result;
}

NmfResult nmf_run(const IqBuffer& mixture, const std::vector<IqBuffer>* references,
                  const NmfParams& params, int window, int hop) {
  require_valid(mixture, "nmf_separate");
  if (params.n_components < 1 || params.components_per_source < 1)
    throw InvalidParameter("nmf_separate: component counts must be positive");
  if (params.n_components % params.components_per_source != 0)
    throw InvalidParameter("nmf_separate: n_components must divide into groups");
  if (params.beta != 0.0 && params.beta != 1.0 && params.beta != 2.0)
    throw InvalidParameter("nmf_separate: beta must be 0, 1 or 2");

  const Eigen::MatrixXcd stft = stft_complex(mixture.samples, window, hop);
  Eigen::MatrixXd v = stft.cwiseAbs().transpose();  // bins x frames
  if (v.maxCoeff() <= 0.0) throw NumericError("nmf_separate: zero spectrogram");

  const Factorization fac = factorize(v, params);

  const int n_sources = params.n_components / params.components_per_source;
  std::vector<std::vector<int>> groups(n_sources);
  if (references == nullptr) {
    for (int k = 0; k < params.n_components; ++k)
      groups[k / params.components_per_source].push_back(k);
  } else {
    // Assign components to the reference whose magnitude spectrogram they
    // match best (normalized inner product). Every reference claims its best
    // component first so no group is left empty.
    groups.assign(references->size(), {});
    std::vector<Eigen::MatrixXd> ref_mag;
    for (const auto& r : *references) {
      if (r.samples.size() != mixture.samples.size())
        throw InvalidParameter("nmf_separate: reference length mismatch");
      ref_mag.push_back(stft_complex(r.samples, window, hop).cwiseAbs().transpose());
    }
    Eigen::MatrixXd affinity(params.n_components, ref_mag.size());
    for (int k = 0; k < params.n_components; ++k) {
      const Eigen::MatrixXd comp = fac.w.col(k) * fac.h.row(k);
      const double cn = std::max(comp.norm(), 1e-30);
      for (size_t j = 0; j < ref_mag.size(); ++j)
        affinity(k, j) =
            comp.cwiseProduct(ref_mag[j]).sum() / (cn * std::max(ref_mag[j].norm(), 1e-30));
    }
    std::vector<bool> claimed(params.n_components, false);
    for (size_t j = 0; j < ref_mag.size(); ++j) {
      int best = -1;
      for (int k = 0; k < params.n_components; ++k)
        if (!claimed[k] && (best < 0 || affinity(k, j) > affinity(best, j))) best = k;
      claimed[best] = true;
      groups[j].push_back(best);
    }
    for (int k = 0; k < params.n_components; ++k) {
      if (claimed[k]) continue;
      Eigen::Index j;
      affinity.row(k).maxCoeff(&j);
      groups[static_cast<size_t>(j)].push_back(k);
    }
  }
  return reconstruct(mixture, fac, groups, stft, window, hop);
}

}  // namespace

NmfResult nmf_separate(const IqBuffer& mixture, const NmfParams& params,
                       int stft_window, int stft_hop) {
  return nmf_run(mixture, nullptr, params, stft_window, stft_hop);
}

NmfResult nmf_separate_grouped(const IqBuffer& mixture,
                               const std::vector<IqBuffer>& references,
                               const NmfParams& params, int stft_window,
                               int stft_hop) {
  if (references.empty())
    throw InvalidParameter("nmf_separate_grouped: no references");
  return nmf_run(mixture, &references, params, stft_window, stft_hop);
}

std::vector<EvalRow> evaluate_separation(Method method,
                                         const std::vector<SeparationCase>& suite,
                                         const IcaParams& ica, const NmfParams& nmf) {
  if (suite.empty()) throw InvalidParameter("evaluate_separation: empty suite");

  struct Bucket {
    std::vector<double> improvements;
    double seconds = 0.0;
    double kilo_samples = 0.0;
  };
  std::map<int, Bucket> buckets;

  for (const auto& c : suite) {
    if (c.observations.empty() || c.references.empty())
      throw InvalidParameter("evaluate_separation: case missing data");
    const int n_src = static_cast<int>(c.references.size());

    std::vector<IqBuffer> estimates;
    const auto start = std::chrono::steady_clock::now();
    if (method == Method::ICA) {
      IcaParams p = ica;
      p.n_sources = n_src;
      estimates = fastica_separate(c.observations, p).estimates;
    } else {
      NmfParams p = nmf;
      p.n_components = n_src * p.components_per_source;
      estimates =
          nmf_separate_grouped(c.observations.front(), c.references, p).estimates;
    }
    const auto stop = std::chrono::steady_clock::now();

    const SinrScore score =
        sinr_improvement(estimates, c.references, c.observations.front());
    Bucket& b = buckets[n_src];
    b.improvements.push_back(score.mean_improvement_db);
    b.seconds += std::chrono::duration<double>(stop - start).count();
    b.kilo_samples += static_cast<double>(c.observations.front().samples.size()) / 1000.0;
  }

  std::vector<EvalRow> rows;
  for (const auto& [n_src, b] : buckets) {
    EvalRow row;
    row.n_sources = n_src;
    row.n_cases = static_cast<int>(b.improvements.size());
    double mean = 0.0;
    for (double v : b.improvements) mean += v;
    mean /= static_cast<double>(b.improvements.size());
    double var = 0.0;
    for (double v : b.improvements) var += (v - mean) * (v - mean);
    row.mean_improvement_db = mean;
    row.std_improvement_db =
        b.improvements.size() > 1 ? std::sqrt(var / (b.improvements.size() - 1)) : 0.0;
    row.runtime_s_per_1k_samples = b.kilo_samples > 0 ? b.seconds / b.kilo_samples : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bbtk::sep
