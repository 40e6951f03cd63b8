// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include "mx/quant.hpp"

#include <stdexcept>

namespace mx {

namespace {

uint8_t all_ones(unsigned bits) {
    return static_cast<uint8_t>((1u << bits) - 1u);
}

// Element-level special pattern: used when the shared scale is special, and
// for exponent-255 elements that survive into a Normal-scale block under
// IgnoreSpecials. Only the retained prefix bits distinguish Inf from NaN,
// matching the truncated input the hardware element module sees.
ElementCode special_element(uint8_t sign, bool is_nan, const FormatDescriptor& desc) {
    ElementCode code;
    code.sign = sign & 1u;
    code.ek = all_ones(desc.exp_bits);
    code.mr = is_nan ? static_cast<uint8_t>(1u << (desc.man_bits - 1)) : 0u;
    return code;
}

}  // namespace

uint8_t element_code_byte(const ElementCode& code, const FormatDescriptor& desc) {
    return static_cast<uint8_t>(
        (static_cast<unsigned>(code.sign & 1u) << (desc.exp_bits + desc.man_bits)) |
        (static_cast<unsigned>(code.ek) << desc.man_bits) | code.mr);
}

ElementCode element_code_from_byte(uint8_t byte, const FormatDescriptor& desc) {
    ElementCode code;
    code.mr = byte & all_ones(desc.man_bits);
    code.ek = (byte >> desc.man_bits) & all_ones(desc.exp_bits);
    code.sign = (byte >> (desc.exp_bits + desc.man_bits)) & 1u;
    return code;
}

ExponentOutcome element_exponent(uint8_t x, uint8_t e, uint8_t sign,
                                 const FormatDescriptor& desc,
                                 ConversionPolicy policy) {
    const int bias = static_cast<int>(desc.scale_threshold);  // 2^(K-1) - 1
    int ek_raw = static_cast<int>(x) + bias;
    if (policy.sign_mode == SignMode::PaperExample && sign) {
        ek_raw += static_cast<int>(e);
    } else {
        ek_raw -= static_cast<int>(e);
    }
    const int max_stored = static_cast<int>(desc.max_stored_exponent);
    if (ek_raw > max_stored) {
        return ExponentOutcome{true, 0};
    }
    if (ek_raw < 0) {
        throw std::invalid_argument(
            "element_exponent: element exponent exceeds the block scale");
    }
    return ExponentOutcome{false, static_cast<uint8_t>(max_stored - ek_raw)};
}

RoundedMantissa round_mantissa(uint8_t prefix, const FormatDescriptor& desc) {
    const uint8_t mask = all_ones(desc.man_bits);
    const uint8_t top = static_cast<uint8_t>(prefix >> 1) & mask;
    if ((prefix & 1u) == 0) {
        return RoundedMantissa{top, false};
    }
    const uint8_t up = static_cast<uint8_t>(top + 1u) & mask;
    return RoundedMantissa{up, up == 0};
}

uint8_t mantissa_prefix(uint32_t mantissa, const FormatDescriptor& desc) {
    return static_cast<uint8_t>((mantissa & 0x7FFFFFu) >> (22u - desc.man_bits));
}

ElementCode quantize_element(uint8_t sign, uint8_t e, uint8_t mant_prefix,
                             ScaleResult scale, const FormatDescriptor& desc,
                             ConversionPolicy policy) {
    sign &= 1u;
    if (scale.cls == ScaleClass::NaN) {
        return special_element(sign, true, desc);
    }
    if (scale.cls == ScaleClass::Infinity) {
        return special_element(sign, false, desc);
    }
    if (e == 0xFFu) {
        return special_element(sign, mant_prefix != 0, desc);
    }
    const ExponentOutcome outcome = element_exponent(scale.x, e, sign, desc, policy);
    if (outcome.flush) {
        return ElementCode{sign, 0, 0};  // signed zero
    }
    const RoundedMantissa rounded = round_mantissa(mant_prefix, desc);
    if (rounded.carry) {
        if (outcome.ek == desc.max_stored_exponent) {
            // Carry out of the top finite exponent clamps to max finite.
            return ElementCode{sign, static_cast<uint8_t>(desc.max_stored_exponent),
                               all_ones(desc.man_bits)};
        }
        return ElementCode{sign, static_cast<uint8_t>(outcome.ek + 1u), 0};
    }
    return ElementCode{sign, outcome.ek, rounded.mr};
}

MxBlock convert_block(const Block32& block, const FormatDescriptor& desc,
                      ConversionPolicy policy) {
    const Fp32Bits winner = block_max(block, policy);
    const uint8_t x_temp = scale_temp(winner.exponent, desc);
    const bool flag = special_flag(winner.mantissa);
    const ScaleResult scale = encode_scale(x_temp, flag, winner.exponent, desc);

    MxBlock out;
    out.x = scale;
    out.policy = policy;
    out.format_id = desc.format_id;
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        const Fp32Bits& v = block[i];
        if (v.exponent == 0 && v.mantissa == 0 && scale.cls == ScaleClass::Normal) {
            // A true zero stays a signed zero regardless of the scale window;
            // the generic path would lift it to 2^(-127) when x is small.
            out.codes[i] = ElementCode{static_cast<uint8_t>(v.sign & 1u), 0, 0};
            continue;
        }
        out.codes[i] = quantize_element(v.sign, v.exponent,
                                        mantissa_prefix(v.mantissa, desc),
                                        scale, desc, policy);
    }
    return out;
}

}  // namespace mx
