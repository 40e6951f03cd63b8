// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <stdexcept>

#include "mx/quant.hpp"
#include "test_util.hpp"

using namespace mx;

namespace {
const FormatDescriptor& e5m2 = format_params(FormatId::E5M2);
const FormatDescriptor& e4m3 = format_params(FormatId::E4M3);
const FormatDescriptor& e2m1 = format_params(FormatId::E2M1);
const ScaleResult x156{156, ScaleClass::Normal};
}  // namespace

TEST_CASE("element_exponent worked values") {
    CHECK(element_exponent(156, 171, 0, e5m2, test::kCorrected) ==
          ExponentOutcome{false, 30});
    CHECK(element_exponent(156, 168, 0, e5m2, test::kCorrected) ==
          ExponentOutcome{false, 27});
    CHECK(element_exponent(156, 43, 0, e5m2, test::kCorrected).flush);
    // Paper sign semantics add the exponent for negative inputs.
    CHECK(element_exponent(156, 143, 1, e5m2, test::kPaper).flush);
    CHECK(element_exponent(156, 143, 1, e5m2, test::kCorrected) ==
          ExponentOutcome{false, 2});
}

TEST_CASE("element_exponent rejects exponents above the block scale") {
    // x = 156 implies a winner exponent of 171; anything larger is a
    // contract violation in Corrected mode.
    CHECK_THROWS_AS(element_exponent(156, 172, 0, e5m2, test::kCorrected),
                    std::invalid_argument);
    CHECK_THROWS_AS(element_exponent(156, 200, 0, e5m2, test::kPaper),
                    std::invalid_argument);
}

TEST_CASE("round_mantissa is half away from zero on the guard bit") {
    CHECK(round_mantissa(0b0011, e4m3) == RoundedMantissa{0b010, false});
    CHECK(round_mantissa(0b1111, e4m3) == RoundedMantissa{0b000, true});
    CHECK(round_mantissa(0b010, e5m2) == RoundedMantissa{0b01, false});
    CHECK(round_mantissa(0b000, e5m2) == RoundedMantissa{0b00, false});
    CHECK(round_mantissa(0b11, e2m1) == RoundedMantissa{0b0, true});
    CHECK(round_mantissa(0b10, e2m1) == RoundedMantissa{0b1, false});
}

TEST_CASE("quantize_element reproduces the worked codes") {
    CHECK(element_code_byte(
              quantize_element(0, 171, 0b011, x156, e5m2, test::kPaper), e5m2) ==
          0x7A);
    CHECK(element_code_byte(
              quantize_element(0, 168, 0b110, x156, e5m2, test::kPaper), e5m2) ==
          0x6F);
    CHECK(element_code_byte(
              quantize_element(0, 43, 0b001, x156, e5m2, test::kPaper), e5m2) ==
          0x00);
    CHECK(element_code_byte(
              quantize_element(1, 143, 0b010, x156, e5m2, test::kPaper), e5m2) ==
          0x80);
    // Corrected mode quantizes the magnitude of the negative input instead.
    CHECK(quantize_element(1, 143, 0b010, x156, e5m2, test::kCorrected) ==
          ElementCode{1, 0b00010, 0b01});
}

TEST_CASE("special scales force the fixed element patterns") {
    const ScaleResult nan_scale{kScaleNaN, ScaleClass::NaN};
    const ScaleResult inf_scale{kScaleInfinity, ScaleClass::Infinity};
    CHECK(quantize_element(0, 12, 0b101, nan_scale, e5m2, test::kCorrected) ==
          ElementCode{0, 0b11111, 0b10});
    CHECK(quantize_element(1, 12, 0b101, nan_scale, e5m2, test::kCorrected) ==
          ElementCode{1, 0b11111, 0b10});
    CHECK(quantize_element(0, 12, 0b101, inf_scale, e5m2, test::kCorrected) ==
          ElementCode{0, 0b11111, 0b00});
}

TEST_CASE("carry propagates into the exponent and saturates at the top") {
    // prefix all ones with room above: exponent bumps, mantissa clears.
    const uint8_t base_ek = element_exponent(156, 160, 0, e5m2, test::kCorrected).ek;
    CHECK(quantize_element(0, 160, 0b111, x156, e5m2, test::kCorrected) ==
          ElementCode{0, static_cast<uint8_t>(base_ek + 1), 0});
    // prefix all ones at the top stored exponent: clamp to max finite.
    CHECK(quantize_element(0, 171, 0b111, x156, e5m2, test::kCorrected) ==
          ElementCode{0, 0b11110, 0b11});
}

TEST_CASE("convert_block composes the three stages") {
    const Block32 block = test::worked_example_block();
    const MxBlock paper = convert_block(block, e5m2, test::kPaper);
    CHECK(paper.x == ScaleResult{156, ScaleClass::Normal});
    const uint8_t expected[4] = {0x7A, 0x6F, 0x00, 0x80};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(element_code_byte(paper.codes[i], e5m2) == expected[i]);
    }
    for (std::size_t i = 4; i < kBlockSize; ++i) {
        CHECK(element_code_byte(paper.codes[i], e5m2) == 0x00);
    }
    CHECK(paper.policy == test::kPaper);
    CHECK(paper.format_id == FormatId::E5M2);

    Block32 zeros{};
    const MxBlock zero_block = convert_block(zeros, e5m2, test::kCorrected);
    CHECK(zero_block.x == ScaleResult{0, ScaleClass::Normal});
    for (const auto& code : zero_block.codes) {
        CHECK(code == ElementCode{0, 0, 0});
    }
}

TEST_CASE("block conversion is deterministic") {
    std::mt19937 rng(17);
    for (int i = 0; i < 200; ++i) {
        const Block32 block = test::random_block(rng);
        for (FormatId id : kAllFormats) {
            const FormatDescriptor& desc = format_params(id);
            CHECK(convert_block(block, desc, test::kCorrected) ==
                  convert_block(block, desc, test::kCorrected));
        }
    }
}

TEST_CASE("sign preservation including flush-to-zero") {
    std::mt19937 rng(19);
    for (int i = 0; i < 20000; ++i) {
        const uint8_t sign = rng() & 1u;
        const uint8_t e = static_cast<uint8_t>(rng() % 172);  // within x=156's range
        const uint8_t prefix = static_cast<uint8_t>(rng() & 0b111);
        for (ConversionPolicy policy : {test::kCorrected, test::kPaper}) {
            CHECK(quantize_element(sign, e, prefix, x156, e5m2, policy).sign == sign);
        }
    }
}

TEST_CASE("totality over the full finite element domain") {
    for (FormatId id : kAllFormats) {
        const FormatDescriptor& desc = format_params(id);
        const ScaleResult scale{scale_temp(254, desc), ScaleClass::Normal};
        const unsigned prefixes = 1u << (desc.man_bits + 1);
        for (ConversionPolicy policy : {test::kCorrected, test::kPaper}) {
            for (unsigned sign = 0; sign < 2; ++sign) {
                for (unsigned e = 0; e <= 255; ++e) {
                    for (unsigned prefix = 0; prefix < prefixes; ++prefix) {
                        ElementCode code;
                        CHECK_NOTHROW(code = quantize_element(
                                          static_cast<uint8_t>(sign),
                                          static_cast<uint8_t>(e),
                                          static_cast<uint8_t>(prefix), scale,
                                          desc, policy));
                        CHECK(code.ek <= (1u << desc.exp_bits) - 1u);
                        CHECK(code.mr <= (1u << desc.man_bits) - 1u);
                    }
                }
            }
        }
    }
}

TEST_CASE("corrected-mode output is monotone in (e, prefix)") {
    for (FormatId id : kAllFormats) {
        const FormatDescriptor& desc = format_params(id);
        const ScaleResult scale{scale_temp(254, desc), ScaleClass::Normal};
        const unsigned prefixes = 1u << (desc.man_bits + 1);
        long prev = -1;
        for (unsigned e = 0; e <= 255; ++e) {
            for (unsigned prefix = 0; prefix < prefixes; ++prefix) {
                const ElementCode code = quantize_element(
                    0, static_cast<uint8_t>(e), static_cast<uint8_t>(prefix),
                    scale, desc, test::kCorrected);
                const long value =
                    static_cast<long>(code.ek) * (1 << desc.man_bits) + code.mr;
                CHECK(value >= prev);
                prev = value;
            }
        }
    }
}
