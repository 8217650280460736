// GSM burst construction and GMSK modulation: rate-1/2 convolutional coding,
// block interleaving, burst formatting (NB/FCB/SB/AB) and Gaussian-filtered
// MSK at 270.833 ksps.
#pragma once

#include "bbtk/rng.hpp"
#include "bbtk/types.hpp"

#include <cstdint>
#include <vector>

namespace bbtk::gsm {

/// 13 MHz / 48 = 270833.33... symbols per second.
inline constexpr double kSymbolRateHz = 13.0e6 / 48.0;

/// Payload bits carried by one Normal Burst (two 57-bit fields).
inline constexpr int kBurstPayloadBits = 114;

/// Bursts spanned by one interleaved code block (8 x 57 interleaver).
inline constexpr int kBurstsPerCodeBlock = 4;

/// Info bits per coded block: 2 * (224 + 4) = 456 = 8 * 57 coded bits.
inline constexpr int kCodeBlockInfoBits = 224;

enum class BurstType {
  NormalBurst,
  FrequencyCorrectionBurst,
  SynchronizationBurst,
  AccessBurst,
};

struct GsmConfig {
  BurstType burst_type = BurstType::NormalBurst;
  int tsc_index = 0;  // training sequence code, 0..7
  std::vector<std::uint8_t> payload_bits;  // empty -> seeded random
  int samples_per_symbol = 8;
  bool apply_channel_coding = true;
  // 0 -> one code block (4 bursts) with coding, one burst without.
  int n_bursts = 0;
};

/// K=5 rate-1/2 code, G0 = 1+D^3+D^4, G1 = 1+D+D^3+D^4, four flush bits.
/// Output length is 2 * (input + 4).
std::vector<std::uint8_t> convolutional_encode(const std::vector<std::uint8_t>& bits);

/// Write row-wise, read column-wise. Requires bits.size() == rows * cols.
std::vector<std::uint8_t> block_interleave(const std::vector<std::uint8_t>& bits,
                                           int rows, int cols);
std::vector<std::uint8_t> block_deinterleave(const std::vector<std::uint8_t>& bits,
                                             int rows, int cols);

/// One burst worth of bits: 148 for NB/FCB/SB, 88 for AB (guard excluded).
std::vector<std::uint8_t> build_burst(const GsmConfig& cfg, Rng& rng);

const std::vector<std::uint8_t>& training_sequence(int tsc_index);

/// Differential encoding, NRZ mapping, BT=0.3 Gaussian filtering and phase
/// integration at modulation index 0.5. Constant envelope by construction.
IqBuffer gmsk_modulate(const std::vector<std::uint8_t>& bits, int samples_per_symbol);

/// Full chain: payload -> coding -> interleaving -> bursts -> GMSK. Guard
/// periods are filled with modulated padding bits so the envelope never drops.
IqBuffer generate_gsm(const GsmConfig& cfg, Rng& rng);

}  // namespace bbtk::gsm
