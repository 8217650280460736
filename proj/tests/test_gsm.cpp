// Burst construction, convolutional coding (checked against a reference
// Viterbi decoder), interleaving and GMSK waveform properties.
#include "bbtk/fft.hpp"
#include "bbtk/gsm.hpp"
#include "bbtk/metrics.hpp"

#include "test_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace bbtk;
using namespace bbtk::gsm;
using testutil::check;
using testutil::check_near;

namespace {

using Bits = std::vector<std::uint8_t>;

// Reference Viterbi decoder for the K=5 rate-1/2 code (G0 = 1+D^3+D^4,
// G1 = 1+D+D^3+D^4), terminated with four flush bits. Hard decision.
Bits viterbi_decode(const Bits& coded) {
  const int n_steps = static_cast<int>(coded.size()) / 2;
  constexpr int kStates = 16;
  const int inf = 1 << 28;
  std::vector<int> metric(kStates, inf);
  metric[0] = 0;
  std::vector<std::vector<std::uint8_t>> prev_state(n_steps,
                                                    std::vector<std::uint8_t>(kStates));
  std::vector<std::vector<std::uint8_t>> prev_bit(n_steps,
                                                  std::vector<std::uint8_t>(kStates));

  for (int t = 0; t < n_steps; ++t) {
    std::vector<int> next(kStates, inf);
    for (int s = 0; s < kStates; ++s) {
      if (metric[s] >= inf) continue;
      // state s = (d1, d2, d3, d4) with d1 the newest bit, packed low to high
      for (int u = 0; u <= 1; ++u) {
        const int d1 = s & 1, d3 = (s >> 2) & 1, d4 = (s >> 3) & 1;
        const int c0 = u ^ d3 ^ d4;
        const int c1 = u ^ d1 ^ d3 ^ d4;
        const int cost = (c0 != coded[2 * t]) + (c1 != coded[2 * t + 1]);
        const int ns = ((s << 1) | u) & 0xF;
        if (metric[s] + cost < next[ns]) {
          next[ns] = metric[s] + cost;
          prev_state[t][ns] = static_cast<std::uint8_t>(s);
          prev_bit[t][ns] = static_cast<std::uint8_t>(u);
        }
      }
    }
    metric = std::move(next);
  }

  // Terminated trellis ends in state 0.
  Bits decoded(n_steps);
  int s = 0;
  for (int t = n_steps - 1; t >= 0; --t) {
    decoded[t] = prev_bit[t][s];
    s = prev_state[t][s];
  }
  decoded.resize(n_steps - 4);  // drop flush bits
  return decoded;
}

Bits random_bits(int n, Rng& rng) {
  Bits b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng.bit());
  return b;
}

void test_convolutional_code() {
  const Bits zeros(10, 0);
  const Bits coded = convolutional_encode(zeros);
  check(coded.size() == 28, "all-zero input gives 28 coded bits");
  check(std::all_of(coded.begin(), coded.end(), [](std::uint8_t b) { return b == 0; }),
        "zero maps to zero");

  // Impulse response: single 1 then zeros emits the generator taps.
  Bits impulse(8, 0);
  impulse[0] = 1;
  const Bits h = convolutional_encode(impulse);
  // G0 = 1+D^3+D^4 -> c0 stream 1,0,0,1,1,0,...; G1 = 1+D+D^3+D^4 -> 1,1,0,1,1,0,...
  const Bits expect_c0 = {1, 0, 0, 1, 1, 0, 0, 0};
  const Bits expect_c1 = {1, 1, 0, 1, 1, 0, 0, 0};
  bool ok = true;
  for (int k = 0; k < 8; ++k)
    ok = ok && h[2 * k] == expect_c0[k] && h[2 * k + 1] == expect_c1[k];
  check(ok, "impulse response equals generator taps");

  Rng rng(77);
  const Bits info = random_bits(100, rng);
  check(viterbi_decode(convolutional_encode(info)) == info,
        "viterbi oracle recovers 100 random bits without error");

  // Linearity: encode(a xor b) == encode(a) xor encode(b).
  const Bits a = random_bits(64, rng), b = random_bits(64, rng);
  Bits axb(64);
  for (int i = 0; i < 64; ++i) axb[i] = a[i] ^ b[i];
  const Bits ea = convolutional_encode(a), eb = convolutional_encode(b);
  const Bits eaxb = convolutional_encode(axb);
  ok = true;
  for (size_t i = 0; i < eaxb.size(); ++i) ok = ok && eaxb[i] == (ea[i] ^ eb[i]);
  check(ok, "code is linear");
}

void test_interleaver() {
  Rng rng(3);
  const Bits data = random_bits(24, rng);
  check(block_interleave(data, 1, 24) == data, "rows=1 is identity");
  check(block_interleave(data, 24, 1) == data, "cols=1 is identity");

  const Bits in = {1, 0, 1, 1, 0, 0};
  const Bits expected = {1, 1, 0, 0, 1, 0};
  check(block_interleave(in, 2, 3) == expected, "2x3 permutation matches hand result");

  const Bits big = random_bits(456, rng);
  check(block_deinterleave(block_interleave(big, 8, 57), 8, 57) == big,
        "deinterleave inverts interleave");

  // Permutation check: interleaving the index sequence hits every slot once.
  std::vector<std::uint8_t> marks(456, 0);
  Bits unit(456, 0);
  for (int i = 0; i < 456; ++i) {
    std::fill(unit.begin(), unit.end(), 0);
    unit[i] = 1;
    const Bits moved = block_interleave(unit, 8, 57);
    const auto it = std::find(moved.begin(), moved.end(), 1);
    marks[static_cast<size_t>(it - moved.begin())] ^= 1;
  }
  check(std::all_of(marks.begin(), marks.end(), [](std::uint8_t m) { return m == 1; }),
        "interleaver is a bijection");

  bool threw = false;
  try {
    block_interleave(in, 2, 4);
  } catch (const InvalidParameter&) {
    threw = true;
  }
  check(threw, "length mismatch rejected");
}

void test_bursts() {
  Rng rng(5);
  GsmConfig cfg;
  cfg.tsc_index = 3;
  const Bits nb = build_burst(cfg, rng);
  check(nb.size() == 148, "normal burst is 148 bits");
  const Bits& tsc = training_sequence(3);
  bool ok = true;
  for (int i = 0; i < 26; ++i) ok = ok && nb[61 + i] == tsc[i];
  check(ok, "bits 61..86 carry the selected training sequence");

  cfg.burst_type = BurstType::FrequencyCorrectionBurst;
  const Bits fcb = build_burst(cfg, rng);
  check(fcb.size() == 148 &&
            std::all_of(fcb.begin(), fcb.end(), [](std::uint8_t b) { return b == 0; }),
        "frequency correction burst is all zeros");

  cfg.burst_type = BurstType::SynchronizationBurst;
  check(build_burst(cfg, rng).size() == 148, "synchronization burst is 148 bits");
  cfg.burst_type = BurstType::AccessBurst;
  check(build_burst(cfg, rng).size() == 88, "access burst is 88 bits");

  GsmConfig bad;
  bad.tsc_index = 9;
  bool threw = false;
  try {
    Rng r2(1);
    build_burst(bad, r2);
  } catch (const InvalidParameter&) {
    threw = true;
  }
  check(threw, "tsc_index out of range rejected");

  Rng s1(99), s2(99);
  check(build_burst(GsmConfig{}, s1) == build_burst(GsmConfig{}, s2),
        "same seed gives identical bursts");
}

void test_gmsk() {
  Rng rng(21);
  const Bits bits = random_bits(148, rng);
  const IqBuffer x = gmsk_modulate(bits, 8);
  check(x.samples.size() == 148 * 8, "one sample per bit per sps");
  check_near(x.sample_rate_hz, kSymbolRateHz * 8, 1e-6, "sample rate from symbol rate");

  check(papr_db(x) < 0.01, "constant envelope: PAPR below 0.01 dB");
  const Eigen::VectorXd env = x.samples.cwiseAbs();
  const double mean_env = env.mean();
  const double cv = std::sqrt((env.array() - mean_env).square().mean()) / mean_env;
  check(cv < 1e-4, "envelope coefficient of variation < 1e-4");

  // Phase continuity: per-sample increment strictly below pi.
  double max_step = 0.0;
  for (Eigen::Index i = 1; i < x.samples.size(); ++i) {
    const double step = std::abs(std::arg(x.samples[i] * std::conj(x.samples[i - 1])));
    max_step = std::max(max_step, step);
  }
  check(max_step < std::numbers::pi_v<double>, "phase continuous (step < pi)");

  // All-zero bits give the +symbol_rate/4 frequency correction tone.
  GsmConfig fcb;
  fcb.burst_type = BurstType::FrequencyCorrectionBurst;
  fcb.n_bursts = 8;
  Rng frng(2);
  const IqBuffer tone = generate_gsm(fcb, frng);
  const Spectrum sp = psd_welch(tone, 4096);
  Eigen::Index imax;
  sp.power_lin.maxCoeff(&imax);
  check_near(sp.freq_hz[imax], kSymbolRateHz / 4.0, sp.bin_hz,
             "FCB tone at symbol_rate/4 (67.7 kHz)");
}

void test_generate() {
  GsmConfig cfg;
  cfg.n_bursts = 12;
  Rng a(31), b(31);
  const IqBuffer x = generate_gsm(cfg, a);
  const IqBuffer y = generate_gsm(cfg, b);
  check((x.samples - y.samples).cwiseAbs().maxCoeff() == 0.0,
        "same seed gives bit-identical waveforms");
  check(x.label == "GSM", "labelled GSM");
  check(papr_db(x) < 2.0, "PAPR below 2 dB");

  // 99% occupied bandwidth around 245 kHz for BT=0.3 at 270.833 ksps.
  const double obw = occupied_bandwidth(x);
  check(obw > 180e3 && obw < 300e3, "occupied bandwidth in the GMSK range");

  // Envelope stays constant across burst boundaries (guard is modulated).
  const Eigen::VectorXd env = x.samples.cwiseAbs();
  check(env.minCoeff() > 0.999 && env.maxCoeff() < 1.001,
        "no envelope dip across the whole stream");

  // One code block spans four timeslots.
  GsmConfig coded;
  Rng c(8);
  coded.payload_bits = random_bits(kCodeBlockInfoBits, c);
  coded.n_bursts = 4;
  Rng d(9);
  const IqBuffer w = generate_gsm(coded, d);
  check(w.samples.size() == static_cast<Eigen::Index>(625 * coded.samples_per_symbol),
        "four timeslots of 156.25 symbols each");
}

}  // namespace

int main() {
  test_convolutional_code();
  test_interleaver();
  test_bursts();
  test_gmsk();
  test_generate();
  return testutil::report("test_gsm");
}
