// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "mx/quant.hpp"

namespace mx {

enum class DecodedKind : uint8_t { Real, PosNaN, Infinity };

/// A reconstructed value. Real values stay exact: every decoded magnitude is
/// sign * m * 2^k with m of at most R+1 bits, well inside double's range, so
/// double arithmetic here never rounds.
struct DecodedValue {
    DecodedKind kind = DecodedKind::Real;
    double value = 0.0;  // meaningful for Real only (carries the sign of zero)

    friend bool operator==(const DecodedValue&, const DecodedValue&) = default;
};

/// Normal scale -> 2^(x - 127); 0xFE -> Infinity; 0xFF -> NaN.
DecodedValue decode_scale(ScaleResult s);

/// Standard EKMR interpretation with bias 2^(K-1) - 1: reserved top exponent,
/// subnormal ek = 0, signed zero at (sign, 0, 0).
DecodedValue decode_element(ElementCode code, const FormatDescriptor& desc);

/// Backward transformation: decoded scale times each decoded element, with
/// NaN-scale dominance and Inf * 0 = NaN.
std::array<DecodedValue, kBlockSize> dequantize_block(const MxBlock& b);

struct ErrorStats {
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;  // over elements with nonzero original
    double rmse = 0.0;
    unsigned flushed_count = 0;
    unsigned saturated_count = 0;
    unsigned special_count = 0;   // NaN/Inf pairs excluded from the error fields
    unsigned compared_count = 0;  // elements entering the error aggregates
};

ErrorStats block_error_stats(const Block32& original, const MxBlock& mx,
                             std::span<const DecodedValue> decoded);

}  // namespace mx
