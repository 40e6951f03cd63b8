// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "mx/core.hpp"

namespace mx {

inline constexpr std::size_t kBlockSize = 32;

/// One conversion unit: exactly 32 FP32 values sharing a scale.
using Block32 = std::array<Fp32Bits, kBlockSize>;

/// Two-input comparison cell. Exponent-255 inputs are discarded: if both
/// operands carry exponent 255 the result is the all-zero value, if exactly
/// one does the other operand passes through. Otherwise the operand with the
/// larger 31-bit (exponent||mantissa) magnitude wins; ties go to x.
Fp32Bits comp(const Fp32Bits& x, const Fp32Bits& y);

/// Folds comp over the five-level pairwise tournament (1-2, 3-4, ... then
/// winners). Under Propagate, any exponent-255 element short-circuits the
/// tournament and is returned directly (first in index order).
Fp32Bits block_max(const Block32& block, ConversionPolicy policy);

}  // namespace mx
