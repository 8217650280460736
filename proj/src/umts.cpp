#include "bbtk/umts.hpp"

#include "bbtk/filter.hpp"

#include <bit>
#include <cmath>

namespace bbtk::umts {

namespace {

// 25-stage LFSRs: x feedback 1 + X^3 + X^25, y feedback 1 + X + X^2 + X^3 + X^25.
struct Lfsr25 {
  std::uint32_t state;  // bit i = register cell i
  std::uint32_t taps;   // feedback tap mask over cells 0..24

  int step() {
    const int out = state & 1;
    std::uint32_t fb = state & taps;
    fb = std::popcount(fb) & 1;
    state = (state >> 1) | (fb << 24);
    return out;
  }
};

constexpr std::uint32_t kTapsX = 0x9;   // cells 0 and 3
constexpr std::uint32_t kTapsY = 0xF;   // cells 0, 1, 2, 3
constexpr int kQuadratureLag = 131072;  // lag between I and Q component sequences

int code_tree_level(int sf) {
  if (sf < 1 || (sf & (sf - 1)) != 0) return -1;
  return std::countr_zero(static_cast<unsigned>(sf));
}

}  // namespace

Eigen::VectorXi ovsf_code(int sf, int index) {
  const int level = code_tree_level(sf);
  if (level < 0) throw InvalidParameter("ovsf_code: sf must be a power of two");
  if (index < 0 || index >= sf)
    throw InvalidParameter("ovsf_code: index must be in [0, sf)");

  Eigen::VectorXi code(1);
  code[0] = 1;
  for (int l = 1; l <= level; ++l) {
    const int bit = (index >> (level - l)) & 1;
    Eigen::VectorXi next(code.size() * 2);
    next.head(code.size()) = code;
    next.tail(code.size()) = bit ? (-code).eval() : code;
    code.swap(next);
  }
  return code;
}

Eigen::VectorXcd gold_scrambling(int code_id, int length_chips) {
  if (code_id < 0 || code_id >= (1 << 24))
    throw InvalidParameter("gold_scrambling: code_id must be in [0, 2^24)");
  if (length_chips < 1 || static_cast<long long>(length_chips) > (1ll << 25) - 1)
    throw InvalidParameter("gold_scrambling: length must be in [1, 2^25-1]");

  Lfsr25 x{static_cast<std::uint32_t>(code_id) | (1u << 24), kTapsX};
  Lfsr25 y{(1u << 25) - 1, kTapsY};
  Lfsr25 x_lag = x;
  Lfsr25 y_lag = y;
  for (int i = 0; i < kQuadratureLag; ++i) {
    x_lag.step();
    y_lag.step();
  }

  const double a = std::numbers::sqrt2_v<double> / 2.0;
  Eigen::VectorXcd s(length_chips);
  for (int i = 0; i < length_chips; ++i) {
    const int ci = x.step() ^ y.step();
    const int cq = x_lag.step() ^ y_lag.step();
    s[i] = Cplx(ci ? -a : a, cq ? -a : a);
  }
  return s;
}

Eigen::VectorXcd build_chips(const UmtsConfig& cfg, Rng& rng) {
  if (cfg.users.empty()) throw InvalidParameter("generate_umts: no users");
  if (cfg.duration_chips < 4)
    throw InvalidParameter("generate_umts: duration_chips too small");

  // Code-tree consistency: no user's code may be an ancestor of another's.
  for (size_t a = 0; a < cfg.users.size(); ++a) {
    for (size_t b = a + 1; b < cfg.users.size(); ++b) {
      const UserSpec& lo = cfg.users[a].spreading_factor <= cfg.users[b].spreading_factor
                               ? cfg.users[a]
                               : cfg.users[b];
      const UserSpec& hi = &lo == &cfg.users[a] ? cfg.users[b] : cfg.users[a];
      const int ratio = hi.spreading_factor / lo.spreading_factor;
      if (lo.spreading_factor * ratio != hi.spreading_factor) continue;
      if (hi.code_index / ratio == lo.code_index)
        throw InvalidParameter("generate_umts: OVSF code tree conflict between users");
    }
  }

  Eigen::VectorXcd chips = Eigen::VectorXcd::Zero(cfg.duration_chips);
  const double inv_sqrt2 = std::numbers::sqrt2_v<double> / 2.0;
  for (size_t u = 0; u < cfg.users.size(); ++u) {
    const UserSpec& user = cfg.users[u];
    const int sf = user.spreading_factor;
    if (sf < 4 || sf > 512 || (sf & (sf - 1)) != 0)
      throw InvalidParameter("generate_umts: spreading_factor must be a power of two in 4..512");
    if (user.code_index < 0 || user.code_index >= sf)
      throw InvalidParameter("generate_umts: code_index out of range");
    if (cfg.duration_chips % sf != 0)
      throw InvalidParameter("generate_umts: duration_chips must divide every spreading factor");

    const Eigen::VectorXi code = ovsf_code(sf, user.code_index);
    const int n_sym = cfg.duration_chips / sf;
    Rng user_rng = rng.split(1000 + u);
    const double amp = db_to_amp(user.power_db);

    for (int k = 0; k < n_sym; ++k) {
      std::uint8_t b0, b1;
      if (user.data_bits.empty()) {
        b0 = static_cast<std::uint8_t>(user_rng.bit());
        b1 = static_cast<std::uint8_t>(user_rng.bit());
      } else {
        b0 = user.data_bits[(2 * k) % user.data_bits.size()];
        b1 = user.data_bits[(2 * k + 1) % user.data_bits.size()];
      }
      const Cplx d(inv_sqrt2 * (b0 ? -1.0 : 1.0), inv_sqrt2 * (b1 ? -1.0 : 1.0));
      const Cplx v = amp * d;
      for (int c = 0; c < sf; ++c)
        chips[static_cast<Eigen::Index>(k) * sf + c] += v * static_cast<double>(code[c]);
    }
  }

  const Eigen::VectorXcd scramble =
      gold_scrambling(cfg.scrambling_code_id, cfg.duration_chips);
  return chips.cwiseProduct(scramble);
}

IqBuffer generate_umts(const UmtsConfig& cfg, Rng& rng) {
  if (cfg.samples_per_chip < 2)
    throw InvalidParameter("generate_umts: samples_per_chip must be >= 2");

  const Eigen::VectorXcd chips = build_chips(cfg, rng);
  FilterTaps rrc = design_rrc_filter(kRrcRolloff, cfg.samples_per_chip, cfg.rrc_span_chips);
  // Keep chip power through the zero-stuffed upsampling.
  rrc.taps *= std::sqrt(static_cast<double>(cfg.samples_per_chip));

  IqBuffer out;
  out.samples = upsample_fir(rrc.taps, chips, cfg.samples_per_chip);
  out.sample_rate_hz = kChipRateHz * cfg.samples_per_chip;
  out.label = "UMTS";
  return out;
}

}  // namespace bbtk::umts
