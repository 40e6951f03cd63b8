// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include "mx/dequant.hpp"

#include <bit>
#include <cmath>

namespace mx {

DecodedValue decode_scale(ScaleResult s) {
    switch (s.cls) {
        case ScaleClass::NaN: return DecodedValue{DecodedKind::PosNaN, 0.0};
        case ScaleClass::Infinity: return DecodedValue{DecodedKind::Infinity, 0.0};
        case ScaleClass::Normal: break;
    }
    return DecodedValue{DecodedKind::Real, std::ldexp(1.0, static_cast<int>(s.x) - 127)};
}

DecodedValue decode_element(ElementCode code, const FormatDescriptor& desc) {
    const unsigned reserved = desc.max_stored_exponent + 1u;  // 2^K - 1
    const int bias = static_cast<int>(desc.scale_threshold);  // 2^(K-1) - 1
    if (code.ek == reserved) {
        return code.mr == 0 ? DecodedValue{DecodedKind::Infinity, 0.0}
                            : DecodedValue{DecodedKind::PosNaN, 0.0};
    }
    const double sign = code.sign ? -1.0 : 1.0;
    const int frac_bits = static_cast<int>(desc.man_bits);
    if (code.ek == 0) {
        // Subnormal: mr / 2^R * 2^(1 - bias). (sign, 0, 0) is a signed zero.
        return DecodedValue{DecodedKind::Real,
                            sign * std::ldexp(static_cast<double>(code.mr),
                                              1 - bias - frac_bits)};
    }
    const double significand = 1.0 + std::ldexp(static_cast<double>(code.mr), -frac_bits);
    return DecodedValue{DecodedKind::Real,
                        sign * std::ldexp(significand, static_cast<int>(code.ek) - bias)};
}

std::array<DecodedValue, kBlockSize> dequantize_block(const MxBlock& b) {
    const FormatDescriptor& desc = format_params(b.format_id);
    std::array<DecodedValue, kBlockSize> out;
    const DecodedValue scale = decode_scale(b.x);
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        const DecodedValue elem = decode_element(b.codes[i], desc);
        if (scale.kind == DecodedKind::PosNaN || elem.kind == DecodedKind::PosNaN) {
            out[i] = DecodedValue{DecodedKind::PosNaN, 0.0};
        } else if (scale.kind == DecodedKind::Infinity) {
            // Inf * 0 = NaN, Inf * anything-else = Inf.
            out[i] = elem.kind == DecodedKind::Real && elem.value == 0.0
                         ? DecodedValue{DecodedKind::PosNaN, 0.0}
                         : DecodedValue{DecodedKind::Infinity, 0.0};
        } else if (elem.kind == DecodedKind::Infinity) {
            out[i] = DecodedValue{DecodedKind::Infinity, 0.0};
        } else {
            out[i] = DecodedValue{DecodedKind::Real, scale.value * elem.value};
        }
    }
    return out;
}

ErrorStats block_error_stats(const Block32& original, const MxBlock& mx,
                             std::span<const DecodedValue> decoded) {
    const FormatDescriptor& desc = format_params(mx.format_id);
    const uint8_t max_ek = static_cast<uint8_t>(desc.max_stored_exponent);
    const uint8_t max_mr = static_cast<uint8_t>((1u << desc.man_bits) - 1u);

    ErrorStats stats;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < kBlockSize && i < decoded.size(); ++i) {
        const Fp32Bits& bits = original[i];
        if (bits.exponent == 0xFFu || decoded[i].kind != DecodedKind::Real) {
            ++stats.special_count;
            continue;
        }
        const double v = static_cast<double>(std::bit_cast<float>(fp32_encode(bits)));
        const double vhat = decoded[i].value;
        const double abs_err = std::fabs(v - vhat);
        if (abs_err > stats.max_abs_error) {
            stats.max_abs_error = abs_err;
        }
        sum_sq += abs_err * abs_err;
        ++stats.compared_count;

        const ElementCode& code = mx.codes[i];
        if (vhat == 0.0 && v != 0.0) {
            ++stats.flushed_count;
            continue;  // a flushed element carries no relative-error signal
        }
        if (code.ek == max_ek && code.mr == max_mr && std::fabs(v) > std::fabs(vhat)) {
            ++stats.saturated_count;
            continue;
        }
        if (v != 0.0) {
            const double rel = abs_err / std::fabs(v);
            if (rel > stats.max_rel_error) {
                stats.max_rel_error = rel;
            }
        }
    }
    if (stats.compared_count > 0) {
        stats.rmse = std::sqrt(sum_sq / static_cast<double>(stats.compared_count));
    }
    return stats;
}

}  // namespace mx
