// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mx/core.hpp"
#include "mx/maxexp.hpp"
#include "mx/scale.hpp"

namespace mx {

/// One quantized private element: sign, K-bit exponent field, R-bit mantissa.
struct ElementCode {
    uint8_t sign = 0;
    uint8_t ek = 0;
    uint8_t mr = 0;

    friend bool operator==(const ElementCode&, const ElementCode&) = default;
};

/// Packs the fields into the low element_bits of a byte.
uint8_t element_code_byte(const ElementCode& code, const FormatDescriptor& desc);
ElementCode element_code_from_byte(uint8_t byte, const FormatDescriptor& desc);

struct ExponentOutcome {
    bool flush = false;
    uint8_t ek = 0;  // stored field, valid when !flush; always <= 2^K - 2

    friend bool operator==(const ExponentOutcome&, const ExponentOutcome&) = default;
};

/// Maps an element exponent against a Normal scale x onto the stored exponent
/// field, or Flush when the element underflows the format's range.
/// Throws std::invalid_argument when e exceeds the exponent implied by x
/// (impossible for pipeline-produced inputs; e must satisfy e <= x + threshold).
ExponentOutcome element_exponent(uint8_t x, uint8_t e, uint8_t sign,
                                 const FormatDescriptor& desc,
                                 ConversionPolicy policy);

struct RoundedMantissa {
    uint8_t mr = 0;
    bool carry = false;

    friend bool operator==(const RoundedMantissa&, const RoundedMantissa&) = default;
};

/// Rounds an (R+1)-bit mantissa prefix to R bits, half away from zero on the
/// single guard bit. carry is set when the increment overflows the R-bit field.
RoundedMantissa round_mantissa(uint8_t prefix, const FormatDescriptor& desc);

/// Top R+1 bits of a 23-bit FP32 mantissa.
uint8_t mantissa_prefix(uint32_t mantissa, const FormatDescriptor& desc);

/// Full per-element quantization: special scale patterns, exponent mapping,
/// rounding with carry, and saturation into the largest finite code.
ElementCode quantize_element(uint8_t sign, uint8_t e, uint8_t mant_prefix,
                             ScaleResult scale, const FormatDescriptor& desc,
                             ConversionPolicy policy);

struct MxBlock {
    ScaleResult x;
    std::array<ElementCode, kBlockSize> codes;
    ConversionPolicy policy;
    FormatId format_id;

    friend bool operator==(const MxBlock&, const MxBlock&) = default;
};

/// The whole forward pipeline: tournament max, scale encoding, then 32
/// element quantizations against the shared scale.
MxBlock convert_block(const Block32& block, const FormatDescriptor& desc,
                      ConversionPolicy policy);

}  // namespace mx
