#include "bbtk/ofdm.hpp"

#include "bbtk/fft.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace bbtk::ofdm {

namespace {

struct LteBandwidth {
  double bandwidth_hz;
  int resource_blocks;
};

constexpr LteBandwidth kLteTable[] = {
    {1.4e6, 6}, {3e6, 15}, {5e6, 25}, {10e6, 50}, {15e6, 75}, {20e6, 100},
};

int lte_resource_blocks(double bw) {
  for (const auto& row : kLteTable)
    if (std::abs(bw - row.bandwidth_hz) < 1.0) return row.resource_blocks;
  throw InvalidParameter(
      "ofdm: LTE bandwidth must be one of 1.4, 3, 5, 10, 15, 20 MHz");
}

int gray_to_index(int g) {
  int b = 0;
  for (; g; g >>= 1) b ^= g;
  return b;
}

}  // namespace

int bits_per_symbol(Modulation m) {
  switch (m) {
    case Modulation::QPSK: return 2;
    case Modulation::QAM16: return 4;
    case Modulation::QAM64: return 6;
    case Modulation::QAM256: return 8;
  }
  throw InvalidParameter("ofdm: unknown modulation");
}

double scs_for_numerology(int mu) {
  if (mu < 0 || mu > 4)
    throw InvalidParameter("scs_for_numerology: mu must be in 0..4");
  return 15000.0 * static_cast<double>(1 << mu);
}

double OfdmConfig::scs_hz() const { return scs_for_numerology(numerology_mu); }

int OfdmConfig::n_subcarriers() const {
  if (standard == Standard::LTE) return 12 * lte_resource_blocks(bandwidth_hz);
  // NR: tightest 95% occupancy in whole resource blocks.
  const int rb = static_cast<int>(bandwidth_hz * 0.95 / (12.0 * scs_hz()));
  if (rb < 1) throw InvalidParameter("ofdm: NR bandwidth too small for one resource block");
  return 12 * rb;
}

int OfdmConfig::fft_size() const {
  const int min_size = (n_subcarriers() * 4 + 2) / 3;
  int n = 128;
  while (n < min_size) n *= 2;
  return n;
}

double OfdmConfig::sample_rate_hz() const { return fft_size() * scs_hz(); }

int OfdmConfig::symbols_per_slot() const { return 7 * (1 << numerology_mu); }

int OfdmConfig::cp_length(int symbol_index) const {
  const int fft = fft_size();
  const int base = fft * 9 / 128;
  return symbol_index % symbols_per_slot() == 0 ? base + fft / 128 : base;
}

Eigen::Index OfdmConfig::total_samples() const {
  Eigen::Index n = 0;
  const int n_sym = n_symbols();
  for (int l = 0; l < n_sym; ++l) n += cp_length(l) + fft_size();
  return n;
}

void OfdmConfig::validate() const {
  if (standard == Standard::LTE && numerology_mu != 0)
    throw InvalidParameter("ofdm: LTE requires numerology_mu = 0");
  if (numerology_mu < 0 || numerology_mu > 4)
    throw InvalidParameter("ofdm: numerology_mu must be in 0..4");
  if (n_slots < 1) throw InvalidParameter("ofdm: n_slots must be >= 1");
  (void)n_subcarriers();
}

Eigen::VectorXcd map_qam(const std::vector<std::uint8_t>& bits, Modulation order) {
  const int bps = bits_per_symbol(order);
  if (bits.size() % bps != 0)
    throw InvalidParameter("map_qam: bit count must divide bits-per-symbol");
  const int m = bps / 2;             // bits per axis
  const int levels = 1 << m;
  // Unit average power: E level^2 = (4^m - 1) / 3 per axis, two axes.
  const double scale = 1.0 / std::sqrt(2.0 * (levels * levels - 1) / 3.0);

  const Eigen::Index n = static_cast<Eigen::Index>(bits.size()) / bps;
  Eigen::VectorXcd syms(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    int gi = 0, gq = 0;
    for (int b = 0; b < m; ++b) gi = (gi << 1) | (bits[k * bps + b] & 1);
    for (int b = 0; b < m; ++b) gq = (gq << 1) | (bits[k * bps + m + b] & 1);
    const double i = 2.0 * gray_to_index(gi) - (levels - 1);
    const double q = 2.0 * gray_to_index(gq) - (levels - 1);
    syms[k] = scale * Cplx(i, q);
  }
  return syms;
}

namespace {

// Occupied-bin index for subcarrier k: centered around DC, LTE skipping DC.
inline int subcarrier_bin(int k, int n_sc, int fft, Standard standard) {
  int offset = k - n_sc / 2;
  if (standard == Standard::LTE && offset >= 0) ++offset;
  return offset >= 0 ? offset : offset + fft;
}

}  // namespace

IqBuffer ofdm_modulate(const ResourceGrid& grid, const OfdmConfig& cfg) {
  cfg.validate();
  const int n_sc = cfg.n_subcarriers();
  const int fft = cfg.fft_size();
  if (grid.cells.cols() != n_sc)
    throw InvalidParameter("ofdm_modulate: grid subcarrier count mismatch");
  const int n_sym = static_cast<int>(grid.cells.rows());
  if (n_sym < 1) throw InvalidParameter("ofdm_modulate: empty grid");

  Eigen::FFT<double> engine;
  const double scale = static_cast<double>(fft) / std::sqrt(static_cast<double>(n_sc));

  Eigen::Index total = 0;
  for (int l = 0; l < n_sym; ++l) total += cfg.cp_length(l) + fft;
  IqBuffer out;
  out.samples.resize(total);
  Eigen::VectorXcd freq(fft), time(fft);

  Eigen::Index pos = 0;
  for (int l = 0; l < n_sym; ++l) {
    freq.setZero();
    for (int k = 0; k < n_sc; ++k)
      freq[subcarrier_bin(k, n_sc, fft, cfg.standard)] = grid.cells(l, k);
    engine.inv(time.data(), freq.data(), fft);
    time *= scale;
    const int cp = cfg.cp_length(l);
    out.samples.segment(pos, cp) = time.tail(cp);
    out.samples.segment(pos + cp, fft) = time;
    pos += cp + fft;
  }

  out.sample_rate_hz = cfg.sample_rate_hz();
  out.label = cfg.standard == Standard::LTE ? "LTE" : "NR";
  return out;
}

ResourceGrid ofdm_demodulate(const IqBuffer& buf, const OfdmConfig& cfg) {
  cfg.validate();
  const int n_sc = cfg.n_subcarriers();
  const int fft = cfg.fft_size();

  // The buffer must cover a whole number of symbols.
  std::vector<Eigen::Index> starts;
  Eigen::Index pos = 0;
  int l = 0;
  while (pos < buf.samples.size()) {
    const int cp = cfg.cp_length(l);
    starts.push_back(pos + cp);
    pos += cp + fft;
    ++l;
  }
  if (pos != buf.samples.size())
    throw InvalidParameter("ofdm_demodulate: buffer length is not a whole symbol count");

  Eigen::FFT<double> engine;
  const double scale = std::sqrt(static_cast<double>(n_sc)) / static_cast<double>(fft);

  ResourceGrid grid;
  grid.scs_hz = cfg.scs_hz();
  grid.cells.resize(static_cast<Eigen::Index>(starts.size()), n_sc);
  Eigen::VectorXcd body(fft), freq(fft);
  for (size_t s = 0; s < starts.size(); ++s) {
    body = buf.samples.segment(starts[s], fft);
    engine.fwd(freq.data(), body.data(), fft);
    for (int k = 0; k < n_sc; ++k)
      grid.cells(static_cast<Eigen::Index>(s), k) =
          scale * freq[subcarrier_bin(k, n_sc, fft, cfg.standard)];
  }
  return grid;
}

namespace {

IqBuffer generate_ofdm(const OfdmConfig& cfg, Rng& rng) {
  cfg.validate();
  const int n_sc = cfg.n_subcarriers();
  const int n_sym = cfg.n_symbols();
  const int bps = bits_per_symbol(cfg.modulation);

  std::vector<std::uint8_t> bits(static_cast<size_t>(n_sym) * n_sc * bps);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
  const Eigen::VectorXcd syms = map_qam(bits, cfg.modulation);

  ResourceGrid grid;
  grid.scs_hz = cfg.scs_hz();
  grid.cells = Eigen::Map<const Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic,
                                              Eigen::RowMajor>>(syms.data(), n_sym, n_sc);
  // Pin the realized grid to unit mean cell power.
  grid.cells /= std::sqrt(mean_power(grid.cells));

  return ofdm_modulate(grid, cfg);
}

}  // namespace

IqBuffer generate_lte(const OfdmConfig& cfg, Rng& rng) {
  if (cfg.standard != Standard::LTE)
    throw InvalidParameter("generate_lte: config standard must be LTE");
  return generate_ofdm(cfg, rng);
}

IqBuffer generate_nr(const OfdmConfig& cfg, Rng& rng) {
  if (cfg.standard != Standard::NR)
    throw InvalidParameter("generate_nr: config standard must be NR");
  return generate_ofdm(cfg, rng);
}

}  // namespace bbtk::ofdm
