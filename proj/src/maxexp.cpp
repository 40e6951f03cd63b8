// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include "mx/maxexp.hpp"

namespace mx {

namespace {

uint32_t magnitude31(const Fp32Bits& v) {
    return (static_cast<uint32_t>(v.exponent) << 23) | v.mantissa;
}

}  // namespace

Fp32Bits comp(const Fp32Bits& x, const Fp32Bits& y) {
    const bool x_special = x.exponent == 0xFFu;
    const bool y_special = y.exponent == 0xFFu;
    if (x_special && y_special) {
        return Fp32Bits{};  // all-zero word
    }
    if (x_special) {
        return y;
    }
    if (y_special) {
        return x;
    }
    return magnitude31(y) > magnitude31(x) ? y : x;
}

Fp32Bits block_max(const Block32& block, ConversionPolicy policy) {
    if (policy.special_policy == SpecialPolicy::Propagate) {
        for (const auto& v : block) {
            if (v.exponent == 0xFFu) {
                return v;
            }
        }
    }
    // Five tournament levels: 32 -> 16 -> 8 -> 4 -> 2 -> 1.
    std::array<Fp32Bits, kBlockSize / 2> winners;
    for (std::size_t i = 0; i < kBlockSize / 2; ++i) {
        winners[i] = comp(block[2 * i], block[2 * i + 1]);
    }
    for (std::size_t n = kBlockSize / 2; n > 1; n /= 2) {
        for (std::size_t i = 0; i < n / 2; ++i) {
            winners[i] = comp(winners[2 * i], winners[2 * i + 1]);
        }
    }
    return winners[0];
}

}  // namespace mx
