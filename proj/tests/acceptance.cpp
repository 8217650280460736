// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// the measured values; the process exits nonzero if any criterion fails.
#include "bbtk/dataset.hpp"
#include "bbtk/dsp.hpp"
#include "bbtk/metrics.hpp"
#include "bbtk/separation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

using namespace bbtk;
using namespace bbtk::harness;

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {
    start_ = std::chrono::steady_clock::now();
  }
  void finish(bool pass, const std::string& detail) {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::printf("[%s] %s — %s (%.1f s)\n", pass ? "PASS" : "FAIL", name_.c_str(),
                detail.c_str(), elapsed);
    std::fflush(stdout);
    if (!pass) ++g_failures;
  }
  double elapsed_s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v, const char* unit = "") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g%s", v, unit);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. GSM constant envelope over 100 seeded normal bursts.
void criterion_gsm_envelope() {
  Criterion c("1. GSM constant envelope (PAPR < 2 dB over 100 bursts)");
  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    gsm::GsmConfig cfg;
    Rng rng(1000 + seed);
    worst = std::max(worst, papr_db(gsm::generate_gsm(cfg, rng)));
  }
  const bool in_time = c.elapsed_s() < 10.0;
  c.finish(worst < 2.0 && in_time,
           "max PAPR " + fmt(worst, " dB") + (in_time ? "" : ", over time budget"));
}

// ---------------------------------------------------------------------------
// 2. Occupied bandwidths: GSM 200 kHz +-20%, UMTS 5 MHz +-15%, LTE 9 MHz +-10%.
void criterion_bandwidths() {
  Criterion c("2. Occupied bandwidths (GSM/UMTS/LTE)");

  double gsm_obw = 0.0;
  for (int seed = 0; seed < 5; ++seed) {
    gsm::GsmConfig cfg;
    cfg.n_bursts = 40;
    Rng rng(2000 + seed);
    gsm_obw += occupied_bandwidth(gsm::generate_gsm(cfg, rng));
  }
  gsm_obw /= 5.0;

  double umts_obw = 0.0;
  for (int seed = 0; seed < 5; ++seed) {
    umts::UmtsConfig cfg;
    cfg.users = {{16, 1, 0.0, {}}, {16, 3, -3.0, {}}, {32, 9, -6.0, {}}};
    Rng rng(2100 + seed);
    umts_obw += occupied_bandwidth(umts::generate_umts(cfg, rng));
  }
  umts_obw /= 5.0;

  double lte_obw = 0.0;
  for (int seed = 0; seed < 5; ++seed) {
    ofdm::OfdmConfig cfg;
    cfg.standard = ofdm::Standard::LTE;
    cfg.bandwidth_hz = 10e6;
    cfg.modulation = ofdm::Modulation::QAM16;
    cfg.n_slots = 2;
    Rng rng(2200 + seed);
    lte_obw += occupied_bandwidth(ofdm::generate_lte(cfg, rng));
  }
  lte_obw /= 5.0;

  const bool gsm_ok = gsm_obw >= 160e3 && gsm_obw <= 240e3;
  const bool umts_ok = umts_obw >= 4.25e6 && umts_obw <= 5.75e6;
  const bool lte_ok = lte_obw >= 8.1e6 && lte_obw <= 9.9e6;
  c.finish(gsm_ok && umts_ok && lte_ok,
           "GSM " + fmt(gsm_obw / 1e3, " kHz") + (gsm_ok ? "" : " (outside 160-240)") +
               ", UMTS " + fmt(umts_obw / 1e6, " MHz") +
               (umts_ok ? "" : " (outside 4.25-5.75)") + ", LTE " +
               fmt(lte_obw / 1e6, " MHz") + (lte_ok ? "" : " (outside 8.1-9.9)"));
}

// ---------------------------------------------------------------------------
// 3. OFDM PAPR: LTE 20 MHz QAM64 12.5 +- 2.5 dB, NR wideband 13.8 +- 2.5 dB.
void criterion_ofdm_papr() {
  Criterion c("3. OFDM PAPR (LTE 12.5 +- 2.5 dB, NR 13.8 +- 2.5 dB, 100 seeds)");

  double lte_mean = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    ofdm::OfdmConfig cfg;
    cfg.standard = ofdm::Standard::LTE;
    cfg.bandwidth_hz = 20e6;
    cfg.modulation = ofdm::Modulation::QAM64;
    cfg.n_slots = 20;  // 10 ms
    Rng rng(3000 + seed);
    lte_mean += papr_db(ofdm::generate_lte(cfg, rng));
  }
  lte_mean /= 100.0;

  double nr_mean = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    ofdm::OfdmConfig cfg;
    cfg.standard = ofdm::Standard::NR;
    cfg.bandwidth_hz = 100e6;
    cfg.numerology_mu = 1;
    cfg.modulation = ofdm::Modulation::QAM64;
    cfg.n_slots = 20;  // 10 ms
    Rng rng(3100 + seed);
    nr_mean += papr_db(ofdm::generate_nr(cfg, rng));
  }
  nr_mean /= 100.0;

  const bool lte_ok = std::abs(lte_mean - 12.5) <= 2.5;
  const bool nr_ok = std::abs(nr_mean - 13.8) <= 2.5;
  const bool in_time = c.elapsed_s() < 60.0;
  c.finish(lte_ok && nr_ok && in_time,
           "LTE mean " + fmt(lte_mean, " dB") + ", NR mean " + fmt(nr_mean, " dB") +
               (in_time ? "" : ", over time budget"));
}

// ---------------------------------------------------------------------------
// 4. Numerology table 15 * 2^mu kHz, exact.
void criterion_numerology() {
  Criterion c("4. Subcarrier spacing 15*2^mu kHz for mu = 0..4");
  bool ok = true;
  for (int mu = 0; mu <= 4; ++mu)
    ok = ok && ofdm::scs_for_numerology(mu) == 15000.0 * (1 << mu);
  c.finish(ok, ok ? "all five values exact" : "table mismatch");
}

// ---------------------------------------------------------------------------
// 5. OFDM round trip within 1e-9 across 200 randomized configurations.
void criterion_roundtrip() {
  Criterion c("5. OFDM modulate/demodulate round trip (200 random configs)");
  Rng rng(4000);
  double worst = 0.0;
  const double lte_bw[] = {1.4e6, 3e6, 5e6, 10e6, 15e6, 20e6};
  for (int trial = 0; trial < 200; ++trial) {
    ofdm::OfdmConfig cfg;
    if (rng.bit()) {
      cfg.standard = ofdm::Standard::LTE;
      cfg.bandwidth_hz = lte_bw[rng.below(6)];
    } else {
      cfg.standard = ofdm::Standard::NR;
      cfg.numerology_mu = static_cast<int>(rng.below(5));
      cfg.bandwidth_hz = (3.0 + 17.0 * rng.uniform()) * 1e6 * (1 << cfg.numerology_mu);
    }
    cfg.n_slots = 1;
    ofdm::ResourceGrid grid;
    grid.scs_hz = cfg.scs_hz();
    grid.cells.resize(cfg.n_symbols(), cfg.n_subcarriers());
    for (Eigen::Index i = 0; i < grid.cells.size(); ++i)
      grid.cells(i) = Cplx(rng.gaussian(), rng.gaussian());
    const ofdm::ResourceGrid back =
        ofdm::ofdm_demodulate(ofdm::ofdm_modulate(grid, cfg), cfg);
    worst = std::max(worst, (back.cells - grid.cells).cwiseAbs().maxCoeff());
  }
  const bool in_time = c.elapsed_s() < 30.0;
  c.finish(worst < 1e-9 && in_time,
           "max error " + fmt(worst) + (in_time ? "" : ", over time budget"));
}

// ---------------------------------------------------------------------------
// 6. Channel statistics: Rayleigh KS at 1%, tap normalization, superposition.
void criterion_channel_stats() {
  Criterion c("6. Channel statistics (Rayleigh KS 1%, taps, superposition)");

  const int n = 1000000;
  std::vector<double> env(n);
  Rng master(6100);
  for (int i = 0; i < n; ++i) {
    Rng draw = master.split(i);
    chan::FadingSpec spec;
    env[i] = std::abs(chan::fading_process(spec, 1, 1e6, draw)[0]);
  }
  std::sort(env.begin(), env.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = 1.0 - std::exp(-env[i] * env[i]);
    ks = std::max(ks, std::max(std::abs(cdf - static_cast<double>(i) / n),
                               std::abs(cdf - static_cast<double>(i + 1) / n)));
  }
  const double ks_crit = 1.628 / std::sqrt(static_cast<double>(n));
  const bool ks_ok = ks < ks_crit;

  bool taps_ok = true;
  for (const auto name : {chan::ProfileName::PedA, chan::ProfileName::PedB,
                          chan::ProfileName::VehA, chan::ProfileName::VehB})
    taps_ok = taps_ok &&
              std::abs(chan::standard_profile(name).normalized_powers().sum() - 1.0) < 1e-12;

  // Superposition bookkeeping, bit exact.
  Rng s1(61), s2(62), mrng(63);
  auto noise_buf = [](double fs, Eigen::Index len, Rng& r) {
    IqBuffer b;
    b.sample_rate_hz = fs;
    b.samples.resize(len);
    for (Eigen::Index i = 0; i < len; ++i) b.samples[i] = r.cgaussian();
    return b;
  };
  chan::MixEntry a, b;
  a.signal = noise_buf(1e6, 50000, s1);
  b.signal = noise_buf(1e6, 50000, s2);
  const chan::MixResult mixed = chan::mix_sources({a, b}, 1e6, 12.0, mrng);
  Eigen::VectorXcd rebuilt = Eigen::VectorXcd::Zero(mixed.mixture.samples.size());
  for (const auto& comp : mixed.components) rebuilt += comp.samples;
  rebuilt += mixed.noise;
  const bool super_ok = (rebuilt - mixed.mixture.samples).cwiseAbs().maxCoeff() == 0.0;

  c.finish(ks_ok && taps_ok && super_ok,
           "KS D=" + fmt(ks) + " (crit " + fmt(ks_crit) + ")" +
               (taps_ok ? ", taps normalized" : ", tap normalization broken") +
               (super_ok ? ", superposition exact" : ", superposition broken"));
}

// ---------------------------------------------------------------------------
// 7. MIMO contract: identity passthrough, LS identification, Kronecker rho.
void criterion_mimo() {
  Criterion c("7. MIMO contract (passthrough, LS recovery, Kronecker rho)");
  Rng rng(7000);
  const double inf = std::numeric_limits<double>::infinity();

  mimo::MimoChannel ident;
  ident.n_rx = 2;
  ident.n_tx = 2;
  ident.flat = Eigen::MatrixXcd::Identity(2, 2);
  std::vector<IqBuffer> x(2);
  for (auto& s : x) {
    s.sample_rate_hz = 1e6;
    s.samples.resize(2000);
    for (Eigen::Index i = 0; i < s.samples.size(); ++i) s.samples[i] = rng.cgaussian();
  }
  Rng n1(1);
  const auto y = mimo::apply_mimo(x, ident, inf, n1);
  const bool pass_ok = (y[0].samples - x[0].samples).cwiseAbs().maxCoeff() == 0.0 &&
                       (y[1].samples - x[1].samples).cwiseAbs().maxCoeff() == 0.0;

  mimo::MimoConfig cfg4;
  cfg4.n_tx = 4;
  cfg4.n_rx = 4;
  Rng drng(2);
  const mimo::MimoChannel h4 = mimo::draw_mimo_channel(cfg4, 1, 0.0, drng);
  std::vector<IqBuffer> x4(4);
  for (auto& s : x4) {
    s.sample_rate_hz = 1e6;
    s.samples.resize(4000);
    for (Eigen::Index i = 0; i < s.samples.size(); ++i) s.samples[i] = rng.cgaussian();
  }
  Rng n2(3);
  const auto y4 = mimo::apply_mimo(x4, h4, inf, n2);
  Eigen::MatrixXcd xm(4, 4000), ym(4, 4000);
  for (int i = 0; i < 4; ++i) {
    xm.row(i) = x4[i].samples.transpose();
    ym.row(i) = y4[i].samples.transpose();
  }
  const Eigen::MatrixXcd h_est = ym * xm.adjoint() * (xm * xm.adjoint()).inverse();
  const double ls_err = (h_est - h4.flat).cwiseAbs().maxCoeff();
  const bool ls_ok = ls_err < 1e-6;

  mimo::MimoConfig kron;
  kron.n_tx = 2;
  kron.n_rx = 2;
  kron.rx_corr_rho = 0.9;
  Rng krng(4);
  Cplx acc{};
  double p = 0.0;
  for (int d = 0; d < 10000; ++d) {
    Rng one = krng.split(d);
    const mimo::MimoChannel ch = mimo::draw_mimo_channel(kron, 1, 0.0, one);
    acc += ch.flat(0, 0) * std::conj(ch.flat(1, 0));
    p += std::norm(ch.flat(0, 0));
  }
  const double rho_est = std::abs(acc) / p;
  const bool rho_ok = std::abs(rho_est - 0.9) <= 0.05;

  c.finish(pass_ok && ls_ok && rho_ok,
           std::string(pass_ok ? "passthrough exact" : "passthrough broken") +
               ", LS error " + fmt(ls_err) + ", rho " + fmt(rho_est));
}

// ---------------------------------------------------------------------------
// 8. Separation suite.

// Fixed coexistence layout at 15.36 Msps: slot -> (standard, carrier offset),
// ordered so each added source makes the scene harder.
IqBuffer separation_slot_source(int slot, Eigen::Index n, Rng& rng) {
  const double rate = 15.36e6;
  IqBuffer x;
  double offset = 0.0;
  switch (slot) {
    case 0: {
      gsm::GsmConfig cfg;
      cfg.n_bursts = 4;
      x = gsm::generate_gsm(cfg, rng);
      offset = -6.5e6;
      break;
    }
    case 1: {
      ofdm::OfdmConfig cfg;
      cfg.standard = ofdm::Standard::LTE;
      cfg.bandwidth_hz = 3e6;
      cfg.n_slots = 4;
      x = ofdm::generate_lte(cfg, rng);
      offset = 5.5e6;
      break;
    }
    case 2: {
      umts::UmtsConfig cfg;
      cfg.users = {{16, 1, 0.0, {}}, {32, 9, -3.0, {}}};
      cfg.duration_chips = 8192;
      x = umts::generate_umts(cfg, rng);
      offset = -2.5e6;
      break;
    }
    case 3: {
      ofdm::OfdmConfig cfg;
      cfg.standard = ofdm::Standard::NR;
      cfg.bandwidth_hz = 5e6;
      cfg.numerology_mu = 1;
      cfg.n_slots = 4;
      x = ofdm::generate_nr(cfg, rng);
      offset = 1.0e6;
      break;
    }
    default: {
      ofdm::OfdmConfig cfg;
      cfg.standard = ofdm::Standard::LTE;
      cfg.bandwidth_hz = 5e6;
      cfg.n_slots = 4;
      x = ofdm::generate_lte(cfg, rng);
      offset = -5.0e6;
      break;
    }
  }
  x = resample(x, rate);
  if (x.samples.size() < n) {
    Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(n);
    padded.head(x.samples.size()) = x.samples;
    x.samples = std::move(padded);
  }
  x.samples.conservativeResize(n);
  x = normalize_power(x, 0.0);
  return frequency_shift(x, offset);
}

sep::SeparationCase separation_scene(int n_src, int n_obs, int seed, double snr_db,
                                     Eigen::Index n) {
  Rng master(seed);
  std::vector<IqBuffer> srcs(n_src);
  for (int s = 0; s < n_src; ++s) {
    Rng g = master.split(s);
    srcs[s] = separation_slot_source(s, n, g);
  }
  Eigen::MatrixXcd mixing(n_obs, n_src);
  Rng arng = master.split(100);
  for (int i = 0; i < n_obs; ++i)
    for (int j = 0; j < n_src; ++j) mixing(i, j) = arng.cgaussian();
  Rng nrng = master.split(200);

  sep::SeparationCase sc;
  sc.observations.resize(n_obs);
  for (int o = 0; o < n_obs; ++o) {
    sc.observations[o].sample_rate_hz = 15.36e6;
    sc.observations[o].samples = Eigen::VectorXcd::Zero(n);
    for (int s = 0; s < n_src; ++s)
      sc.observations[o].samples += mixing(o, s) * srcs[s].samples;
    const double namp =
        std::sqrt(mean_power(sc.observations[o].samples) / db_to_pow(snr_db));
    for (Eigen::Index i = 0; i < n; ++i)
      sc.observations[o].samples[i] += namp * nrng.cgaussian();
  }
  sc.references.resize(n_src);
  for (int s = 0; s < n_src; ++s) {
    sc.references[s].sample_rate_hz = 15.36e6;
    sc.references[s].samples = mixing(0, s) * srcs[s].samples;
  }
  return sc;
}

void criterion_separation() {
  Criterion c("8. Separation (ICA determined/suite, trend, NMF monotonicity)");
  const Eigen::Index n = 30720;  // 2 ms at 15.36 Msps
  std::string detail;
  bool ok = true;

  // (a) Noiseless determined 2x2 instantaneous mixing of QPSK streams.
  {
    double worst = 1e300;
    for (int trial = 0; trial < 3; ++trial) {
      Rng rng(8000 + trial);
      std::vector<IqBuffer> src(2);
      const double amp = std::numbers::sqrt2_v<double> / 2.0;
      for (auto& s : src) {
        s.sample_rate_hz = 1e6;
        s.samples.resize(20000);
        for (Eigen::Index i = 0; i < s.samples.size(); ++i)
          s.samples[i] = Cplx(rng.bit() ? amp : -amp, rng.bit() ? amp : -amp);
      }
      Eigen::Matrix2cd mixing;
      mixing << rng.cgaussian(), rng.cgaussian(), rng.cgaussian(), rng.cgaussian();
      std::vector<IqBuffer> obs(2), refs(2);
      for (int o = 0; o < 2; ++o) {
        obs[o].sample_rate_hz = 1e6;
        obs[o].samples = mixing(o, 0) * src[0].samples + mixing(o, 1) * src[1].samples;
      }
      for (int s = 0; s < 2; ++s) {
        refs[s].sample_rate_hz = 1e6;
        refs[s].samples = mixing(0, s) * src[s].samples;
      }
      sep::IcaParams params;
      params.n_sources = 2;
      params.seed = 80 + trial;
      const auto result = sep::fastica_separate(obs, params);
      worst = std::min(worst,
                       sinr_improvement(result.estimates, refs, obs[0]).mean_improvement_db);
    }
    ok = ok && worst >= 30.0;
    detail += "(a) determined " + fmt(worst, " dB");
  }

  // (b) 50-seed two-source suite at 10 dB SNR, six-antenna observations.
  {
    double mean = 0.0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
      const sep::SeparationCase sc = separation_scene(2, 6, 8100 + 13 * s, 10.0, n);
      sep::IcaParams params;
      params.n_sources = 2;
      params.seed = 31 * s + 1;
      const auto result = sep::fastica_separate(sc.observations, params);
      mean += sinr_improvement(result.estimates, sc.references, sc.observations[0])
                  .mean_improvement_db;
    }
    mean /= seeds;
    ok = ok && mean >= 10.0;
    detail += ", (b) 2-source mean " + fmt(mean, " dB");
  }

  // (c) Mean improvement non-increasing from 2 to 5 sources, both methods.
  // (d) NMF divergence non-increasing on every run.
  {
    std::vector<double> ica_trend, nmf_trend;
    bool divergence_ok = true;
    for (int n_src = 2; n_src <= 5; ++n_src) {
      double ica_mean = 0.0, nmf_mean = 0.0;
      const int seeds = 24;
      for (int s = 0; s < seeds; ++s) {
        const sep::SeparationCase ica_case =
            separation_scene(n_src, 6, 8200 + 13 * s, 40.0, n);
        sep::IcaParams params;
        params.n_sources = n_src;
        params.seed = 31 * s + 7;
        const auto result = sep::fastica_separate(ica_case.observations, params);
        ica_mean += sinr_improvement(result.estimates, ica_case.references,
                                     ica_case.observations[0])
                        .mean_improvement_db;

        const sep::SeparationCase nmf_case =
            separation_scene(n_src, 1, 8300 + 13 * s, 10.0, n);
        sep::NmfParams nmf_params;
        nmf_params.n_components = 4 * n_src;
        nmf_params.components_per_source = 4;
        nmf_params.beta = 1.0;
        nmf_params.max_iters = 150;
        nmf_params.seed = 17 * s + 3;
        const auto nmf_result = sep::nmf_separate_grouped(
            nmf_case.observations[0], nmf_case.references, nmf_params, 512, 256);
        for (Eigen::Index it = 1; it < nmf_result.divergence_history.size(); ++it)
          divergence_ok =
              divergence_ok && nmf_result.divergence_history[it] <=
                                   nmf_result.divergence_history[it - 1] * (1.0 + 1e-9);
        nmf_mean += sinr_improvement(nmf_result.estimates, nmf_case.references,
                                     nmf_case.observations[0])
                        .mean_improvement_db;
      }
      ica_trend.push_back(ica_mean / seeds);
      nmf_trend.push_back(nmf_mean / seeds);
    }
    bool ica_mono = true, nmf_mono = true;
    for (size_t i = 1; i < ica_trend.size(); ++i) {
      ica_mono = ica_mono && ica_trend[i] <= ica_trend[i - 1];
      nmf_mono = nmf_mono && nmf_trend[i] <= nmf_trend[i - 1];
    }
    ok = ok && ica_mono && nmf_mono && divergence_ok;
    detail += ", (c) ICA trend";
    for (double v : ica_trend) detail += " " + fmt(v);
    detail += std::string(ica_mono ? "" : " NOT") + " non-increasing; NMF trend";
    for (double v : nmf_trend) detail += " " + fmt(v);
    detail += std::string(nmf_mono ? "" : " NOT") + " non-increasing";
    detail += std::string(", (d) divergence ") +
              (divergence_ok ? "monotone" : "NOT monotone");
  }

  const bool in_time = c.elapsed_s() < 300.0;
  c.finish(ok && in_time, detail + (in_time ? "" : ", over time budget"));
}

// ---------------------------------------------------------------------------
// 9. Dataset determinism: identical manifest hash across two runs.
void criterion_dataset_determinism() {
  Criterion c("9. Dataset determinism (manifest hash across two runs)");
  namespace fs = std::filesystem;
  const fs::path work = fs::temp_directory_path() / "bbtk_acceptance_ds";
  fs::remove_all(work);

  GenerationPlan plan;
  plan.master_seed = 424242;
  PlanTemplate tpl;
  tpl.count = 4;
  tpl.standards = {StandardKind::GSM, StandardKind::LTE};
  tpl.duration_s = 0.001;
  tpl.common_rate_hz = 15.36e6;
  tpl.freq_offset_abs_max_hz = 3e6;
  tpl.id_prefix = "det";
  plan.templates.push_back(tpl);

  const DatasetManifest m1 = generate_dataset(plan, (work / "run1").string());
  const DatasetManifest m2 = generate_dataset(plan, (work / "run2").string());
  const bool ok = m1.hash() == m2.hash();
  fs::remove_all(work);
  c.finish(ok, ok ? "hash " + m1.hash() : "hashes differ");
}

// ---------------------------------------------------------------------------
// 10. Throughput ordering GSM > UMTS > LTE > NR.
void criterion_throughput() {
  Criterion c("10. Throughput ordering (GSM > UMTS > LTE > NR)");
  const auto rows = run_benchmark(0.005, 2);
  const bool ok = rows.size() == 4 &&
                  rows[0].realtime_multiple > rows[1].realtime_multiple &&
                  rows[1].realtime_multiple > rows[2].realtime_multiple &&
                  rows[2].realtime_multiple > rows[3].realtime_multiple;
  std::string detail;
  for (const auto& r : rows)
    detail += r.standard + " " + fmt(r.realtime_multiple, "x ");
  c.finish(ok, detail + "(recorded, absolute values hardware-dependent)");
}

}  // namespace

int main() {
  criterion_gsm_envelope();
  criterion_bandwidths();
  criterion_ofdm_papr();
  criterion_numerology();
  criterion_roundtrip();
  criterion_channel_stats();
  criterion_mimo();
  criterion_separation();
  criterion_dataset_determinism();
  criterion_throughput();

  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion/criteria failed\n", g_failures);
  }
  return g_failures;
}
