#include "bbtk/gsm.hpp"

#include "bbtk/filter.hpp"

#include <cmath>
#include <numbers>

namespace bbtk::gsm {

namespace {

// 26-bit training sequences, TSC 0..7.
const std::vector<std::uint8_t> kTrainingSequences[8] = {
    {0,0,1,0,0,1,0,1,1,1,0,0,0,0,1,0,0,0,1,0,0,1,0,1,1,1},
    {0,0,1,0,1,1,0,1,1,1,0,1,1,1,1,0,0,0,1,0,1,1,0,1,1,1},
    {0,1,0,0,0,0,1,1,1,0,1,1,1,0,1,0,0,1,0,0,0,0,1,1,1,0},
    {0,1,0,0,0,1,1,1,1,0,1,1,0,1,0,0,0,1,0,0,0,1,1,1,1,0},
    {0,0,0,1,1,0,1,0,1,1,1,0,0,1,0,0,0,0,0,1,1,0,1,0,1,1},
    {0,1,0,0,1,1,1,0,1,0,1,1,0,0,0,0,0,1,0,0,1,1,1,0,1,0},
    {1,0,1,0,0,1,1,1,1,1,0,1,1,0,0,0,1,0,1,0,0,1,1,1,1,1},
    {1,1,1,0,1,1,1,1,0,0,0,1,0,0,1,0,1,1,1,0,1,1,1,1,0,0},
};

// 64-bit extended training sequence of the synchronization burst.
const std::vector<std::uint8_t> kSyncTrainingSequence = {
    1,0,1,1,1,0,0,1,0,1,1,0,0,0,1,0,0,0,0,0,0,1,0,0,0,0,0,0,1,1,1,1,
    0,0,1,0,1,1,0,1,0,1,0,0,0,1,0,1,0,1,1,1,0,1,1,0,0,0,0,1,1,0,1,1,
};

// 41-bit synchronization sequence of the access burst.
const std::vector<std::uint8_t> kAccessSyncSequence = {
    0,1,0,0,1,0,1,1,0,1,1,1,1,1,1,1,1,0,0,1,1,0,0,1,1,0,1,0,1,0,1,0,
    0,0,1,1,1,1,0,0,0,
};

// 8-bit extended tail preceding the access burst.
const std::vector<std::uint8_t> kAccessExtendedTail = {0,0,1,1,1,0,1,0};

std::vector<std::uint8_t> random_bits(Eigen::Index n, Rng& rng) {
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
  return bits;
}

void append(std::vector<std::uint8_t>& dst, const std::vector<std::uint8_t>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

// Nominal timeslot lengths in symbols; every fourth slot carries the extra
// quarter symbols so four slots average 156.25.
int slot_symbols(int burst_index) { return burst_index % 4 == 0 ? 157 : 156; }

}  // namespace

const std::vector<std::uint8_t>& training_sequence(int tsc_index) {
  if (tsc_index < 0 || tsc_index > 7)
    throw InvalidParameter("gsm: tsc_index must be in 0..7");
  return kTrainingSequences[tsc_index];
}

std::vector<std::uint8_t> convolutional_encode(const std::vector<std::uint8_t>& bits) {
  if (bits.empty()) throw InvalidParameter("convolutional_encode: empty input");
  std::vector<std::uint8_t> out;
  out.reserve(2 * (bits.size() + 4));
  std::uint8_t d1 = 0, d2 = 0, d3 = 0, d4 = 0;
  auto push = [&](std::uint8_t u) {
    const std::uint8_t c0 = u ^ d3 ^ d4;
    const std::uint8_t c1 = u ^ d1 ^ d3 ^ d4;
    out.push_back(c0);
    out.push_back(c1);
    d4 = d3; d3 = d2; d2 = d1; d1 = u;
  };
  for (std::uint8_t b : bits) push(b & 1);
  for (int i = 0; i < 4; ++i) push(0);  // flush
  return out;
}

std::vector<std::uint8_t> block_interleave(const std::vector<std::uint8_t>& bits,
                                           int rows, int cols) {
  if (rows < 1 || cols < 1 || bits.size() != static_cast<size_t>(rows) * cols)
    throw InvalidParameter("block_interleave: length must equal rows*cols");
  std::vector<std::uint8_t> out(bits.size());
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r)
      out[static_cast<size_t>(c) * rows + r] = bits[static_cast<size_t>(r) * cols + c];
  return out;
}

std::vector<std::uint8_t> block_deinterleave(const std::vector<std::uint8_t>& bits,
                                             int rows, int cols) {
  return block_interleave(bits, cols, rows);
}

std::vector<std::uint8_t> build_burst(const GsmConfig& cfg, Rng& rng) {
  if (cfg.tsc_index < 0 || cfg.tsc_index > 7)
    throw InvalidParameter("build_burst: tsc_index must be in 0..7");

  std::vector<std::uint8_t> burst;
  switch (cfg.burst_type) {
    case BurstType::NormalBurst: {
      std::vector<std::uint8_t> payload = cfg.payload_bits.empty()
                                              ? random_bits(kBurstPayloadBits, rng)
                                              : cfg.payload_bits;
      if (payload.size() != kBurstPayloadBits)
        throw InvalidParameter("build_burst: normal burst payload must be 114 bits");
      burst.assign({0, 0, 0});
      burst.insert(burst.end(), payload.begin(), payload.begin() + 57);
      burst.push_back(0);  // stealing flag
      append(burst, kTrainingSequences[cfg.tsc_index]);
      burst.push_back(0);  // stealing flag
      burst.insert(burst.end(), payload.begin() + 57, payload.end());
      burst.insert(burst.end(), {0, 0, 0});
      break;
    }
    case BurstType::FrequencyCorrectionBurst:
      burst.assign(148, 0);
      break;
    case BurstType::SynchronizationBurst: {
      std::vector<std::uint8_t> payload =
          cfg.payload_bits.empty() ? random_bits(78, rng) : cfg.payload_bits;
      if (payload.size() != 78)
        throw InvalidParameter("build_burst: sync burst payload must be 78 bits");
      burst.assign({0, 0, 0});
      burst.insert(burst.end(), payload.begin(), payload.begin() + 39);
      append(burst, kSyncTrainingSequence);
      burst.insert(burst.end(), payload.begin() + 39, payload.end());
      burst.insert(burst.end(), {0, 0, 0});
      break;
    }
    case BurstType::AccessBurst: {
      std::vector<std::uint8_t> payload =
          cfg.payload_bits.empty() ? random_bits(36, rng) : cfg.payload_bits;
      if (payload.size() != 36)
        throw InvalidParameter("build_burst: access burst payload must be 36 bits");
      burst = kAccessExtendedTail;
      append(burst, kAccessSyncSequence);
      append(burst, payload);
      burst.insert(burst.end(), {0, 0, 0});
      break;
    }
  }
  return burst;
}

IqBuffer gmsk_modulate(const std::vector<std::uint8_t>& bits, int samples_per_symbol) {
  if (samples_per_symbol < 2)
    throw InvalidParameter("gmsk_modulate: samples_per_symbol must be >= 2");
  if (bits.empty()) throw InvalidParameter("gmsk_modulate: empty input");

  const int sps = samples_per_symbol;
  const Eigen::Index n = static_cast<Eigen::Index>(bits.size()) * sps;

  // Differential encoding then NRZ: bit 0 -> +1.
  Eigen::VectorXd nrz(n);
  std::uint8_t prev = 0;
  for (size_t k = 0; k < bits.size(); ++k) {
    const std::uint8_t d = (bits[k] ^ prev) & 1;
    prev = bits[k] & 1;
    const double a = d ? -1.0 : 1.0;
    nrz.segment(static_cast<Eigen::Index>(k) * sps, sps).setConstant(a);
  }

  const FilterTaps g = design_gaussian_filter(0.3, sps, 4);
  const Eigen::VectorXd freq = fir_filter_same(g.taps, nrz);

  // Phase integration, pi/2 per symbol at full deviation.
  IqBuffer out;
  out.samples.resize(n);
  const double k = std::numbers::pi_v<double> / 2.0 / sps;
  double phase = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    phase += k * freq[i];
    out.samples[i] = std::polar(1.0, phase);
  }
  out.sample_rate_hz = kSymbolRateHz * sps;
  out.label = "GSM";
  return out;
}

IqBuffer generate_gsm(const GsmConfig& cfg, Rng& rng) {
  if (cfg.samples_per_symbol < 2)
    throw InvalidParameter("generate_gsm: samples_per_symbol must be >= 2");
  if (cfg.n_bursts < 0) throw InvalidParameter("generate_gsm: n_bursts must be >= 0");

  const bool coded =
      cfg.apply_channel_coding && cfg.burst_type == BurstType::NormalBurst;
  int n_bursts = cfg.n_bursts;
  if (n_bursts == 0) n_bursts = coded ? kBurstsPerCodeBlock : 1;
  if (coded) {
    // Round up to whole code blocks; one block fills four bursts.
    n_bursts = (n_bursts + kBurstsPerCodeBlock - 1) / kBurstsPerCodeBlock *
               kBurstsPerCodeBlock;
  }

  // Per-burst payloads.
  std::vector<std::vector<std::uint8_t>> payloads;
  if (coded) {
    const int n_blocks = n_bursts / kBurstsPerCodeBlock;
    for (int blk = 0; blk < n_blocks; ++blk) {
      std::vector<std::uint8_t> info;
      if (cfg.payload_bits.empty()) {
        info = random_bits(kCodeBlockInfoBits, rng);
      } else {
        if (cfg.payload_bits.size() != static_cast<size_t>(kCodeBlockInfoBits) * n_blocks)
          throw InvalidParameter("generate_gsm: coded payload must be 224 bits per block");
        info.assign(cfg.payload_bits.begin() + blk * kCodeBlockInfoBits,
                    cfg.payload_bits.begin() + (blk + 1) * kCodeBlockInfoBits);
      }
      const auto coded_bits = convolutional_encode(info);           // 456 bits
      const auto interleaved = block_interleave(coded_bits, 8, 57); // 8 half-bursts
      for (int b = 0; b < kBurstsPerCodeBlock; ++b) {
        std::vector<std::uint8_t> p(interleaved.begin() + (2 * b) * 57,
                                    interleaved.begin() + (2 * b + 2) * 57);
        payloads.push_back(std::move(p));
      }
    }
  } else if (cfg.burst_type == BurstType::NormalBurst && !cfg.payload_bits.empty()) {
    if (cfg.payload_bits.size() != static_cast<size_t>(kBurstPayloadBits) * n_bursts)
      throw InvalidParameter("generate_gsm: payload must be 114 bits per burst");
    for (int b = 0; b < n_bursts; ++b)
      payloads.emplace_back(cfg.payload_bits.begin() + b * kBurstPayloadBits,
                            cfg.payload_bits.begin() + (b + 1) * kBurstPayloadBits);
  }

  // Assemble the bit stream, filling each timeslot to its nominal length with
  // guard padding so the modulated envelope stays constant across bursts.
  std::vector<std::uint8_t> stream;
  for (int b = 0; b < n_bursts; ++b) {
    GsmConfig burst_cfg = cfg;
    burst_cfg.payload_bits =
        payloads.empty() ? std::vector<std::uint8_t>{} : payloads[b];
    const auto burst = build_burst(burst_cfg, rng);
    append(stream, burst);
    const int pad = slot_symbols(b) - static_cast<int>(burst.size());
    stream.insert(stream.end(), pad, 1);
  }

  IqBuffer out = gmsk_modulate(stream, cfg.samples_per_symbol);
  out.label = "GSM";
  return out;
}

}  // namespace bbtk::gsm
