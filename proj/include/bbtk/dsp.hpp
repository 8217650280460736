// Rate conversion, frequency shifting, delays and power normalization. All
// functions are pure; buffers are never modified in place.
#pragma once

#include "bbtk/types.hpp"

#include <cstdint>
#include <utility>

namespace bbtk {

/// Multiplies by exp(j 2 pi offset n / fs). Requires |offset| < fs/2.
IqBuffer frequency_shift(const IqBuffer& buf, double offset_hz);

/// Polyphase rational resampler with a Kaiser-windowed sinc prototype
/// (80 dB stopband). In strict mode, throws NumericError when the target rate
/// cannot carry the signal's occupied bandwidth.
IqBuffer resample(const IqBuffer& buf, double target_rate_hz, bool strict = false);

/// Scales so that 10 log10(mean |x|^2) equals target_db.
IqBuffer normalize_power(const IqBuffer& buf, double target_db);

/// Delays content by delay_s (integer plus windowed-sinc fractional part).
/// Output keeps the sample rate and grows by the integer delay.
IqBuffer fractional_delay(const IqBuffer& buf, double delay_s);

/// Best rational approximation p/q to x with q <= max_den (continued
/// fractions). Throws NumericError when no approximation is close enough.
std::pair<std::int64_t, std::int64_t> rational_approx(double x, std::int64_t max_den);

}  // namespace bbtk
