// Shared OFDM engine for LTE and 5G NR: resource-grid construction, Gray
// QAM mapping, IFFT synthesis with cyclic prefix, and the inverse path for
// round-trip validation.
#pragma once

#include "bbtk/rng.hpp"
#include "bbtk/types.hpp"

#include <cstdint>
#include <vector>

namespace bbtk::ofdm {

enum class Standard { LTE, NR };
enum class Modulation { QPSK, QAM16, QAM64, QAM256 };

int bits_per_symbol(Modulation m);

/// Subcarrier spacing 15 kHz * 2^mu for mu in 0..4.
double scs_for_numerology(int mu);

struct OfdmConfig {
  Standard standard = Standard::LTE;
  double bandwidth_hz = 10e6;
  int numerology_mu = 0;  // forced 0 for LTE
  Modulation modulation = Modulation::QAM16;
  int n_slots = 1;  // half-subframes of 7 * 2^mu symbols each

  double scs_hz() const;
  int n_subcarriers() const;
  int fft_size() const;  // smallest power of two >= n_subcarriers * 4/3
  double sample_rate_hz() const;
  int n_symbols() const { return n_slots * symbols_per_slot(); }
  int symbols_per_slot() const;
  /// Cyclic prefix length for symbol l (first symbol of a slot is longer).
  int cp_length(int symbol_index) const;
  /// Samples in n_slots half-subframes including prefixes.
  Eigen::Index total_samples() const;

  void validate() const;
};

/// Gray-mapped square QAM at unit average constellation power. Bit count must
/// divide log2 of the order.
Eigen::VectorXcd map_qam(const std::vector<std::uint8_t>& bits, Modulation order);

/// cells(l, k): symbol l, subcarrier k. Mean occupied-cell power should be 1.
struct ResourceGrid {
  Eigen::MatrixXcd cells;
  double scs_hz = 0.0;
};

/// Subcarriers map to centered FFT bins; LTE skips DC, NR occupies it.
/// Per-symbol time signal is IFFT scaled by 1/sqrt(n_subcarriers) so mean
/// sample power equals mean grid power.
IqBuffer ofdm_modulate(const ResourceGrid& grid, const OfdmConfig& cfg);

/// Exact inverse of ofdm_modulate for a buffer of whole symbols.
ResourceGrid ofdm_demodulate(const IqBuffer& buf, const OfdmConfig& cfg);

IqBuffer generate_lte(const OfdmConfig& cfg, Rng& rng);
IqBuffer generate_nr(const OfdmConfig& cfg, Rng& rng);

}  // namespace bbtk::ofdm
