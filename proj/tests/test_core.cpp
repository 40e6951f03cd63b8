// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "mx/core.hpp"

using namespace mx;

TEST_CASE("fp32_decode splits the word fields") {
    CHECK(fp32_decode(0x00000000u) == Fp32Bits{0, 0, 0});

    // 0 10101011 011... layout of the worked example's first value
    const uint32_t v1 = (0b10101011u << 23) | (0b011u << 20);
    const Fp32Bits b = fp32_decode(v1);
    CHECK(b.sign == 0);
    CHECK(b.exponent == 171);
    CHECK((b.mantissa >> 20) == 0b011u);

    CHECK(fp32_decode(0xFF800000u) == Fp32Bits{1, 255, 0});
}

TEST_CASE("fp32 decode/encode round-trips") {
    // Exhaustive over sign x exponent with a few mantissa prefixes,
    // then randomly over the full mantissa.
    for (uint32_t sign = 0; sign < 2; ++sign) {
        for (uint32_t exp = 0; exp < 256; ++exp) {
            for (uint32_t mant : {0u, 1u, 0x400000u, 0x7FFFFFu}) {
                const uint32_t word = (sign << 31) | (exp << 23) | mant;
                CHECK(fp32_encode(fp32_decode(word)) == word);
            }
        }
    }
    std::mt19937 rng(7);
    for (int i = 0; i < 100000; ++i) {
        const uint32_t word = rng();
        const Fp32Bits b = fp32_decode(word);
        CHECK(b.exponent <= 255);
        CHECK(b.mantissa <= 0x7FFFFFu);
        CHECK(fp32_encode(b) == word);
    }
}

TEST_CASE("format_params matches the published bit widths") {
    struct Row {
        FormatId id;
        unsigned k, r, bits;
    };
    const Row rows[] = {
        {FormatId::E5M2, 5, 2, 8}, {FormatId::E4M3, 4, 3, 8},
        {FormatId::E3M2, 3, 2, 6}, {FormatId::E2M3, 2, 3, 6},
        {FormatId::E2M1, 2, 1, 4}, {FormatId::Int8, 1, 6, 8},
    };
    for (const Row& row : rows) {
        const FormatDescriptor& d = format_params(row.id);
        CHECK(d.exp_bits == row.k);
        CHECK(d.man_bits == row.r);
        CHECK(d.scale_bits == 8);
        CHECK(d.element_bits == row.bits);
        CHECK(d.scale_threshold == (1u << (row.k - 1)) - 1u);
        CHECK(d.max_stored_exponent == (1u << row.k) - 2u);
        // Pure lookup: repeated calls agree.
        CHECK(format_params(row.id) == d);
    }
}

TEST_CASE("classify separates exponent-255 layouts") {
    CHECK(classify(Fp32Bits{0, 255, 0}) == Fp32Class{Fp32Kind::ExpAllOnes, true});
    CHECK(classify(Fp32Bits{0, 255, 5}) == Fp32Class{Fp32Kind::ExpAllOnes, false});
    CHECK(classify(Fp32Bits{0, 171, 0b011u << 20}).kind == Fp32Kind::Finite);
}
