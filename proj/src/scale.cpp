// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include "mx/scale.hpp"

namespace mx {

uint8_t scale_temp(uint8_t ev, const FormatDescriptor& desc) {
    const unsigned threshold = desc.scale_threshold;
    return ev > threshold ? static_cast<uint8_t>(ev - threshold) : 0u;
}

bool special_flag(uint32_t mantissa) {
    return (mantissa & 0x7FFFFFu) == 0;
}

ScaleResult encode_scale(uint8_t x_temp, bool flag, uint8_t ev,
                         const FormatDescriptor& /*desc*/) {
    // The saturated-x_temp condition of the hardware (e.g. 11110000 for E5M2)
    // holds exactly when ev = 255, so the exponent is tested directly.
    if (ev == 0xFFu) {
        if (flag) {
            return ScaleResult{kScaleInfinity, ScaleClass::Infinity};
        }
        return ScaleResult{kScaleNaN, ScaleClass::NaN};
    }
    return ScaleResult{x_temp, ScaleClass::Normal};
}

}  // namespace mx
