// QAM mapping, resource-grid modulation/demodulation round trips, cyclic
// prefix structure, numerology scaling and generator-level spectra.
#include "bbtk/dsp.hpp"
#include "bbtk/metrics.hpp"
#include "bbtk/ofdm.hpp"

#include "test_util.hpp"

#include <cmath>
#include <vector>

using namespace bbtk;
using namespace bbtk::ofdm;
using testutil::check;
using testutil::check_near;

namespace {

using Bits = std::vector<std::uint8_t>;

void test_numerology() {
  check_near(scs_for_numerology(0), 15e3, 0.0, "mu=0 is 15 kHz");
  check_near(scs_for_numerology(1), 30e3, 0.0, "mu=1 is 30 kHz");
  check_near(scs_for_numerology(2), 60e3, 0.0, "mu=2 is 60 kHz");
  check_near(scs_for_numerology(3), 120e3, 0.0, "mu=3 is 120 kHz");
  check_near(scs_for_numerology(4), 240e3, 0.0, "mu=4 is 240 kHz");
  bool threw = false;
  try {
    scs_for_numerology(5);
  } catch (const InvalidParameter&) {
    threw = true;
  }
  check(threw, "mu=5 rejected");
}

void test_config_tables() {
  OfdmConfig lte;
  lte.standard = Standard::LTE;
  const struct { double bw; int sc; } rows[] = {
      {1.4e6, 72}, {3e6, 180}, {5e6, 300}, {10e6, 600}, {15e6, 900}, {20e6, 1200}};
  for (const auto& row : rows) {
    lte.bandwidth_hz = row.bw;
    check(lte.n_subcarriers() == row.sc, "LTE subcarrier table");
    const int fft = lte.fft_size();
    check((fft & (fft - 1)) == 0 && fft * 3 >= row.sc * 4,
          "fft is a power of two with >= 1/3 guard");
  }
  lte.bandwidth_hz = 7e6;
  bool threw = false;
  try {
    lte.n_subcarriers();
  } catch (const InvalidParameter&) {
    threw = true;
  }
  check(threw, "non-standard LTE bandwidth rejected");
}

void test_qam() {
  // QPSK: four unit-magnitude points, one per quadrant.
  const Eigen::VectorXcd qpsk = map_qam({0, 0, 0, 1, 1, 1, 1, 0}, Modulation::QPSK);
  check(qpsk.size() == 4, "four QPSK symbols");
  bool mags = true, quads = true;
  std::vector<std::pair<int, int>> seen;
  for (Eigen::Index i = 0; i < 4; ++i) {
    mags = mags && std::abs(std::abs(qpsk[i]) - 1.0) < 1e-12;
    seen.emplace_back(qpsk[i].real() > 0 ? 1 : -1, qpsk[i].imag() > 0 ? 1 : -1);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) quads = quads && seen[i] != seen[j];
  check(mags, "QPSK points unit magnitude");
  check(quads, "QPSK points cover all quadrants");

  // Full QAM16 sweep has exactly unit mean power.
  Bits sweep;
  for (int v = 0; v < 16; ++v)
    for (int b = 3; b >= 0; --b) sweep.push_back((v >> b) & 1);
  const Eigen::VectorXcd q16 = map_qam(sweep, Modulation::QAM16);
  check_near(mean_power(q16), 1.0, 1e-12, "QAM16 full sweep mean power exactly 1");

  // Gray property: constellation neighbors differ in one payload bit.
  for (Modulation m : {Modulation::QAM16, Modulation::QAM64}) {
    const int bps = bits_per_symbol(m);
    const int n = 1 << bps;
    Bits all;
    for (int v = 0; v < n; ++v)
      for (int b = bps - 1; b >= 0; --b) all.push_back((v >> b) & 1);
    const Eigen::VectorXcd pts = map_qam(all, Modulation(m));
    const int side = 1 << (bps / 2);
    const double step = 2.0 * std::abs(pts[0].real() * side / (1 - side));  // axis spacing
    bool gray = true;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double d = std::abs(pts[i] - pts[j]);
        if (std::abs(d - step) < 1e-9) {
          const int diff = i ^ j;
          gray = gray && __builtin_popcount(diff) == 1;
        }
      }
    check(gray, "adjacent constellation points differ in one bit");
  }

  bool threw = false;
  try {
    map_qam({1, 0, 1}, Modulation::QAM16);
  } catch (const InvalidParameter&) {
    threw = true;
  }
  check(threw, "bit count must divide bits per symbol");
}

OfdmConfig small_lte() {
  OfdmConfig cfg;
  cfg.standard = Standard::LTE;
  cfg.bandwidth_hz = 1.4e6;
  cfg.modulation = Modulation::QPSK;
  cfg.n_slots = 1;
  return cfg;
}

ResourceGrid random_grid(const OfdmConfig& cfg, Rng& rng) {
  ResourceGrid grid;
  grid.scs_hz = cfg.scs_hz();
  grid.cells.resize(cfg.n_symbols(), cfg.n_subcarriers());
  Bits bits(static_cast<size_t>(grid.cells.size()) * 2);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
  const Eigen::VectorXcd syms = map_qam(bits, Modulation::QPSK);
  for (Eigen::Index l = 0; l < grid.cells.rows(); ++l)
    for (Eigen::Index k = 0; k < grid.cells.cols(); ++k)
      grid.cells(l, k) = syms[l * grid.cells.cols() + k];
  return grid;
}

void test_modulate_demodulate() {
  const OfdmConfig cfg = small_lte();
  Rng rng(3);

  // Single active subcarrier: constant-envelope complex tone at k*scs.
  ResourceGrid single;
  single.scs_hz = cfg.scs_hz();
  single.cells = Eigen::MatrixXcd::Zero(1, cfg.n_subcarriers());
  const int k0 = cfg.n_subcarriers() / 2 + 5;  // offset +6 bins for LTE (DC skip)
  single.cells(0, k0) = 1.0;
  const IqBuffer tone = ofdm_modulate(single, cfg);
  const Eigen::VectorXd env = tone.samples.cwiseAbs();
  check((env.maxCoeff() - env.minCoeff()) / env.mean() < 1e-9,
        "single subcarrier gives constant envelope");
  // Frequency via phase slope over the symbol body.
  const int fft = cfg.fft_size();
  const Eigen::Index body = tone.samples.size() - fft;
  const double phase_step =
      std::arg(tone.samples[body + 10] * std::conj(tone.samples[body + 9]));
  const double freq = phase_step * cfg.sample_rate_hz() / (2.0 * std::numbers::pi_v<double>);
  check_near(freq, 6 * cfg.scs_hz(), 1.0, "tone frequency equals bin offset times scs");

  // Cyclic prefix equality, sample exact, every symbol.
  const ResourceGrid grid = random_grid(cfg, rng);
  const IqBuffer x = ofdm_modulate(grid, cfg);
  Eigen::Index pos = 0;
  bool cp_ok = true;
  for (int l = 0; l < cfg.n_symbols(); ++l) {
    const int cp = cfg.cp_length(l);
    cp_ok = cp_ok && (x.samples.segment(pos, cp) -
                      x.samples.segment(pos + fft, cp)).cwiseAbs().maxCoeff() == 0.0;
    pos += cp + fft;
  }
  check(cp_ok, "cyclic prefix equals symbol tail exactly");
  check(pos == x.samples.size(), "buffer is a whole number of symbols");

  // Parseval bookkeeping: time energy / grid energy constant across symbols.
  pos = 0;
  double ratio0 = -1.0;
  bool parseval = true;
  for (int l = 0; l < cfg.n_symbols(); ++l) {
    const int cp = cfg.cp_length(l);
    const double te = x.samples.segment(pos + cp, fft).squaredNorm();
    const double ge = grid.cells.row(l).squaredNorm();
    const double ratio = te / ge;
    if (ratio0 < 0) ratio0 = ratio;
    parseval = parseval && std::abs(ratio - ratio0) < 1e-9 * ratio0;
    pos += cp + fft;
  }
  check(parseval, "time/grid energy ratio identical for every symbol");

  // Round trip.
  const ResourceGrid back = ofdm_demodulate(x, cfg);
  check((back.cells - grid.cells).cwiseAbs().maxCoeff() < 1e-9,
        "demodulate(modulate(G)) == G within 1e-9");

  // Round trip after a one-subcarrier frequency shift: magnitudes move one
  // bin. NR keeps DC occupied, so every bin except the first is testable.
  OfdmConfig nr = cfg;
  nr.standard = Standard::NR;
  nr.bandwidth_hz = 1.4e6;
  Rng nr_rng(4);
  const ResourceGrid nr_grid = random_grid(nr, nr_rng);
  const IqBuffer nr_time = ofdm_modulate(nr_grid, nr);
  const ResourceGrid moved = ofdm_demodulate(frequency_shift(nr_time, nr.scs_hz()), nr);
  double err = 0.0;
  for (Eigen::Index l = 0; l < nr_grid.cells.rows(); ++l)
    for (Eigen::Index k = 1; k < nr_grid.cells.cols(); ++k)
      err = std::max(err, std::abs(std::abs(moved.cells(l, k)) -
                                   std::abs(nr_grid.cells(l, k - 1))));
  check(err < 1e-6, "one-subcarrier shift moves the grid by one bin");

  // Zero input gives a zero grid.
  IqBuffer zero = x;
  zero.samples.setZero();
  check(ofdm_demodulate(zero, cfg).cells.cwiseAbs().maxCoeff() == 0.0,
        "zero input demodulates to a zero grid");

  bool threw = false;
  try {
    IqBuffer cut = x;
    cut.samples.conservativeResize(x.samples.size() - 3);
    ofdm_demodulate(cut, cfg);
  } catch (const InvalidParameter&) {
    threw = true;
  }
  check(threw, "partial symbol rejected");
}

void test_roundtrip_property() {
  Rng rng(17);
  const double lte_bw[] = {1.4e6, 3e6, 5e6, 10e6};
  for (int trial = 0; trial < 25; ++trial) {
    OfdmConfig cfg;
    if (rng.bit()) {
      cfg.standard = Standard::LTE;
      cfg.bandwidth_hz = lte_bw[rng.below(4)];
      cfg.numerology_mu = 0;
    } else {
      cfg.standard = Standard::NR;
      cfg.numerology_mu = static_cast<int>(rng.below(3));
      cfg.bandwidth_hz = (5.0 + 20.0 * rng.uniform()) * 1e6 * (1 << cfg.numerology_mu);
    }
    cfg.n_slots = 1;
    Rng grid_rng(trial);
    const ResourceGrid grid = random_grid(cfg, grid_rng);
    const ResourceGrid back = ofdm_demodulate(ofdm_modulate(grid, cfg), cfg);
    check((back.cells - grid.cells).cwiseAbs().maxCoeff() < 1e-9,
          "round trip (property trial)");
  }
}

void test_generators() {
  // LTE 10 MHz: 50 RB * 180 kHz = 9 MHz occupied.
  OfdmConfig lte;
  lte.standard = Standard::LTE;
  lte.bandwidth_hz = 10e6;
  lte.modulation = Modulation::QAM16;
  lte.n_slots = 2;  // 14 symbols
  Rng r1(100);
  const IqBuffer x = generate_lte(lte, r1);
  check(x.label == "LTE", "labelled LTE");
  const double obw = occupied_bandwidth(x);
  check(obw > 8.1e6 && obw < 9.9e6, "LTE 10 MHz occupied bandwidth near 9 MHz");

  // PAPR range for a >= 25 RB configuration.
  const double papr = papr_db(x);
  check(papr > 6.0 && papr < 14.5, "LTE PAPR in the OFDM range");

  // Determinism.
  Rng r2(100);
  check((generate_lte(lte, r2).samples - x.samples).cwiseAbs().maxCoeff() == 0.0,
        "same seed gives identical LTE output");

  // NR numerology scaling: doubling mu halves the symbol duration and
  // doubles the occupied bandwidth for the same grid size.
  OfdmConfig nr0;
  nr0.standard = Standard::NR;
  nr0.bandwidth_hz = 10e6;
  nr0.numerology_mu = 0;
  nr0.modulation = Modulation::QPSK;
  nr0.n_slots = 2;
  OfdmConfig nr1 = nr0;
  nr1.numerology_mu = 1;
  nr1.bandwidth_hz = 20e6;  // same subcarrier count at twice the spacing
  check(nr0.n_subcarriers() == nr1.n_subcarriers(), "matched grid sizes");
  Rng r3(5), r4(5);
  const IqBuffer y0 = generate_nr(nr0, r3);
  const IqBuffer y1 = generate_nr(nr1, r4);
  const double sym0 = y0.duration_s() / nr0.n_symbols();
  const double sym1 = y1.duration_s() / nr1.n_symbols();
  // Long-CP placement differs slightly between numerologies (one per slot).
  check_near(sym0 / sym1, 2.0, 0.005, "mu=1 halves the symbol duration");
  check_near(occupied_bandwidth(y1) / occupied_bandwidth(y0), 2.0, 0.1,
             "mu=1 doubles the occupied bandwidth");

  // Grid power normalization feeds through: mean sample power near 1.
  check_near(mean_power(y0), 1.0, 0.05, "mean output power near unity");

  bool threw = false;
  try {
    OfdmConfig bad = nr0;
    bad.standard = Standard::LTE;
    bad.numerology_mu = 2;
    bad.validate();
  } catch (const InvalidParameter&) {
    threw = true;
  }
  check(threw, "LTE with mu != 0 rejected");

  // Even the smallest grid exceeds 6 dB PAPR essentially always, which
  // separates the OFDM class from constant-envelope GMSK.
  OfdmConfig tiny;
  tiny.standard = Standard::LTE;
  tiny.bandwidth_hz = 1.4e6;
  tiny.modulation = Modulation::QPSK;
  tiny.n_slots = 1;
  int above = 0;
  for (int seed = 0; seed < 30; ++seed) {
    Rng rng(700 + seed);
    if (papr_db(generate_lte(tiny, rng)) > 6.0) ++above;
  }
  check(above == 30, "72-subcarrier PAPR above 6 dB for every seed");
}

}  // namespace

int main() {
  test_numerology();
  test_config_tables();
  test_qam();
  test_modulate_demodulate();
  test_roundtrip_property();
  test_generators();
  return testutil::report("test_ofdm");
}
