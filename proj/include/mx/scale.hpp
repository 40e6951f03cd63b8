// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mx/core.hpp"

namespace mx {

enum class ScaleClass : uint8_t { Normal, Infinity, NaN };

/// The 8-bit shared scale. Stored biased: a Normal x decodes to 2^(x - 127).
/// 0xFE encodes infinity, 0xFF encodes NaN.
struct ScaleResult {
    uint8_t x = 0;
    ScaleClass cls = ScaleClass::Normal;

    friend bool operator==(const ScaleResult&, const ScaleResult&) = default;
};

inline constexpr uint8_t kScaleInfinity = 0xFE;
inline constexpr uint8_t kScaleNaN = 0xFF;

/// Intermediate scale: max(ev - (2^(K-1) - 1), 0).
uint8_t scale_temp(uint8_t ev, const FormatDescriptor& desc);

/// 1 iff all 23 mantissa bits are zero (the winner is an infinity layout).
bool special_flag(uint32_t mantissa);

/// Final scale selection: an exponent-255 winner maps to the NaN or Infinity
/// code depending on the flag; everything else keeps x_temp as a Normal scale.
ScaleResult encode_scale(uint8_t x_temp, bool flag, uint8_t ev,
                         const FormatDescriptor& desc);

}  // namespace mx
