// Downlink-style multi-user CDMA at 3.84 Mcps: OVSF channelization, complex
// Gold scrambling, per-user power weighting and root-raised-cosine chip
// shaping (roll-off 0.22).
#pragma once

#include "bbtk/rng.hpp"
#include "bbtk/types.hpp"

#include <cstdint>
#include <vector>

namespace bbtk::umts {

inline constexpr double kChipRateHz = 3.84e6;
inline constexpr double kRrcRolloff = 0.22;
inline constexpr int kScramblingFrameChips = 38400;

struct UserSpec {
  int spreading_factor = 16;  // power of two in 4..512
  int code_index = 0;         // in [0, spreading_factor)
  double power_db = 0.0;
  std::vector<std::uint8_t> data_bits;  // empty -> seeded random QPSK
};

struct UmtsConfig {
  std::vector<UserSpec> users = {UserSpec{}};
  int scrambling_code_id = 0;
  int samples_per_chip = 4;
  int duration_chips = kScramblingFrameChips;
  int rrc_span_chips = 10;
};

/// Recursive orthogonal variable spreading factor code, chips in {+1, -1}.
Eigen::VectorXi ovsf_code(int sf, int index);

/// Complex scrambling sequence from two 25-stage LFSRs (Gold construction),
/// unit-modulus chips with E|s|^2 = 1.
Eigen::VectorXcd gold_scrambling(int code_id, int length_chips);

/// Chip-rate composite before pulse shaping (exposed for despreading checks).
Eigen::VectorXcd build_chips(const UmtsConfig& cfg, Rng& rng);

IqBuffer generate_umts(const UmtsConfig& cfg, Rng& rng);

}  // namespace bbtk::umts
