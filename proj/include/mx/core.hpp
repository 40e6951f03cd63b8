// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace mx {

/// One FP32 word split into its three fields. Reassembles losslessly.
struct Fp32Bits {
    uint8_t sign = 0;        // bit 31
    uint8_t exponent = 0;    // bits 30..23, biased by 127
    uint32_t mantissa = 0;   // bits 22..0

    friend bool operator==(const Fp32Bits&, const Fp32Bits&) = default;
};

Fp32Bits fp32_decode(uint32_t word);
uint32_t fp32_encode(const Fp32Bits& v);

enum class FormatId : uint8_t {
    E5M2 = 0,
    E4M3 = 1,
    E3M2 = 2,
    E2M3 = 3,
    E2M1 = 4,
    Int8 = 5,
};

inline constexpr std::array<FormatId, 6> kAllFormats = {
    FormatId::E5M2, FormatId::E4M3, FormatId::E3M2,
    FormatId::E2M3, FormatId::E2M1, FormatId::Int8,
};

const char* format_name(FormatId id);

/// Per-format constants. exp_bits/man_bits follow the EKMR naming;
/// Int8 is the degenerate pair (K=1, R=6).
struct FormatDescriptor {
    FormatId format_id;
    unsigned exp_bits;             // K
    unsigned man_bits;             // R
    unsigned scale_bits;           // w, always 8
    unsigned scale_threshold;      // 2^(K-1) - 1
    unsigned max_stored_exponent;  // 2^K - 2
    unsigned element_bits;         // 1 + K + R

    friend bool operator==(const FormatDescriptor&, const FormatDescriptor&) = default;
};

const FormatDescriptor& format_params(FormatId id);

enum class SignMode : uint8_t {
    Corrected = 0,     // exponent math ignores the sign (quantize the magnitude)
    PaperExample = 1,  // sign selects +/- of the element exponent
};

enum class SpecialPolicy : uint8_t {
    IgnoreSpecials = 0,  // exponent-255 inputs lose every comparison
    Propagate = 1,       // any exponent-255 input wins the block
};

struct ConversionPolicy {
    SignMode sign_mode = SignMode::Corrected;
    SpecialPolicy special_policy = SpecialPolicy::IgnoreSpecials;

    friend bool operator==(const ConversionPolicy&, const ConversionPolicy&) = default;
};

enum class Fp32Kind : uint8_t { Finite, ExpAllOnes };

struct Fp32Class {
    Fp32Kind kind;
    bool mantissa_zero;  // meaningful for ExpAllOnes: true = infinity layout

    friend bool operator==(const Fp32Class&, const Fp32Class&) = default;
};

Fp32Class classify(const Fp32Bits& v);

}  // namespace mx
