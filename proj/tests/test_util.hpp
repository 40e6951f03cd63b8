// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

#include "mx/maxexp.hpp"

namespace mx::test {

// The four-value worked block: two positive values near 2^44, one tiny value
// that flushes, one negative value. Slots 4..31 stay +0.0.
inline Block32 worked_example_block() {
    Block32 block{};
    block[0] = Fp32Bits{0, 0b10101011, 0b011u << 20};
    block[1] = Fp32Bits{0, 0b10101000, 0b110u << 20};
    block[2] = Fp32Bits{0, 0b00101011, 0b001u << 20};
    block[3] = Fp32Bits{1, 0b10001111, 0b010u << 20};
    return block;
}

inline Block32 random_block(std::mt19937& rng) {
    Block32 block;
    for (auto& v : block) {
        v = fp32_decode(rng());
    }
    return block;
}

// Normal finite values only: exponent in [1, 254].
inline Block32 random_normal_block(std::mt19937& rng) {
    std::uniform_int_distribution<unsigned> exp_dist(1, 254);
    std::uniform_int_distribution<uint32_t> mant_dist(0, (1u << 23) - 1);
    Block32 block;
    for (auto& v : block) {
        v = Fp32Bits{static_cast<uint8_t>(rng() & 1u),
                     static_cast<uint8_t>(exp_dist(rng)), mant_dist(rng)};
    }
    return block;
}

inline constexpr ConversionPolicy kCorrected{SignMode::Corrected,
                                             SpecialPolicy::IgnoreSpecials};
inline constexpr ConversionPolicy kPaper{SignMode::PaperExample,
                                         SpecialPolicy::IgnoreSpecials};
inline constexpr ConversionPolicy kPropagate{SignMode::Corrected,
                                             SpecialPolicy::Propagate};

}  // namespace mx::test
