// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include "mx/core.hpp"

#include <stdexcept>

namespace mx {

Fp32Bits fp32_decode(uint32_t word) {
    Fp32Bits v;
    v.sign = static_cast<uint8_t>(word >> 31);
    v.exponent = static_cast<uint8_t>((word >> 23) & 0xFFu);
    v.mantissa = word & 0x7FFFFFu;
    return v;
}

uint32_t fp32_encode(const Fp32Bits& v) {
    return (static_cast<uint32_t>(v.sign & 1u) << 31) |
           (static_cast<uint32_t>(v.exponent) << 23) | (v.mantissa & 0x7FFFFFu);
}

const char* format_name(FormatId id) {
    switch (id) {
        case FormatId::E5M2: return "e5m2";
        case FormatId::E4M3: return "e4m3";
        case FormatId::E3M2: return "e3m2";
        case FormatId::E2M3: return "e2m3";
        case FormatId::E2M1: return "e2m1";
        case FormatId::Int8: return "int8";
    }
    return "?";
}

namespace {

constexpr FormatDescriptor make_descriptor(FormatId id, unsigned k, unsigned r) {
    return FormatDescriptor{
        id, k, r, 8u,
        (1u << (k - 1)) - 1u,  // scale_threshold
        (1u << k) - 2u,        // max_stored_exponent
        1u + k + r,            // element_bits
    };
}

constexpr std::array<FormatDescriptor, 6> kDescriptors = {
    make_descriptor(FormatId::E5M2, 5, 2),
    make_descriptor(FormatId::E4M3, 4, 3),
    make_descriptor(FormatId::E3M2, 3, 2),
    make_descriptor(FormatId::E2M3, 2, 3),
    make_descriptor(FormatId::E2M1, 2, 1),
    make_descriptor(FormatId::Int8, 1, 6),
};

}  // namespace

const FormatDescriptor& format_params(FormatId id) {
    const auto index = static_cast<std::size_t>(id);
    if (index >= kDescriptors.size()) {
        throw std::invalid_argument("unknown MX format id");
    }
    return kDescriptors[index];
}

Fp32Class classify(const Fp32Bits& v) {
    if (v.exponent == 0xFFu) {
        return Fp32Class{Fp32Kind::ExpAllOnes, v.mantissa == 0};
    }
    return Fp32Class{Fp32Kind::Finite, v.mantissa == 0};
}

}  // namespace mx
