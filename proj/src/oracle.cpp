// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include "mx/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mx {

namespace {

constexpr std::size_t kMismatchCap = 100;

// Reference element quantization on a full 24-bit significand
// (implicit one included). The rounded value is formed by adding half an
// output ulp and truncating, which realizes half-away-from-zero in one step.
ElementCode reference_element(uint8_t sign, uint8_t e, uint32_t significand24,
                              ScaleResult scale, const FormatDescriptor& desc,
                              ConversionPolicy policy) {
    sign &= 1u;
    const uint8_t ones_ek = static_cast<uint8_t>((1u << desc.exp_bits) - 1u);
    const uint8_t quiet_mr = static_cast<uint8_t>(1u << (desc.man_bits - 1));
    if (scale.cls == ScaleClass::NaN) {
        return ElementCode{sign, ones_ek, quiet_mr};
    }
    if (scale.cls == ScaleClass::Infinity) {
        return ElementCode{sign, ones_ek, 0};
    }
    const unsigned r = desc.man_bits;
    if (e == 0xFFu) {
        const bool payload = ((significand24 >> (22u - r)) & ((1u << (r + 1)) - 1u)) != 0;
        return ElementCode{sign, ones_ek, payload ? quiet_mr : uint8_t{0}};
    }

    const int bias = static_cast<int>(desc.scale_threshold);
    const bool negate_exponent =
        policy.sign_mode == SignMode::PaperExample && sign != 0;
    const int stored = negate_exponent
                           ? bias - static_cast<int>(scale.x) - static_cast<int>(e)
                           : static_cast<int>(e) - static_cast<int>(scale.x) + bias;
    const int max_stored = static_cast<int>(desc.max_stored_exponent);
    if (stored > max_stored) {
        throw std::invalid_argument("reference_element: exponent above the block scale");
    }
    if (stored < 0) {
        return ElementCode{sign, 0, 0};
    }

    const uint32_t half_ulp = 1u << (22u - r);
    const uint32_t q = (significand24 + half_ulp) >> (23u - r);
    if (q == (2u << r)) {  // rounded past the top of the significand range
        if (stored == max_stored) {
            return ElementCode{sign, static_cast<uint8_t>(max_stored),
                               static_cast<uint8_t>((1u << r) - 1u)};
        }
        return ElementCode{sign, static_cast<uint8_t>(stored + 1), 0};
    }
    return ElementCode{sign, static_cast<uint8_t>(stored),
                       static_cast<uint8_t>(q - (1u << r))};
}

uint32_t significand_from_prefix(uint8_t prefix, const FormatDescriptor& desc) {
    return (1u << 23) | (static_cast<uint32_t>(prefix) << (22u - desc.man_bits));
}

std::string code_bits(const ElementCode& code, const FormatDescriptor& desc) {
    std::string s;
    s.push_back(code.sign ? '1' : '0');
    s.push_back('|');
    for (unsigned b = desc.exp_bits; b-- > 0;) {
        s.push_back((code.ek >> b) & 1u ? '1' : '0');
    }
    s.push_back('|');
    for (unsigned b = desc.man_bits; b-- > 0;) {
        s.push_back((code.mr >> b) & 1u ? '1' : '0');
    }
    return s;
}

void record_mismatch(OracleReport& report, std::string input,
                     std::string pipeline, std::string oracle) {
    if (report.mismatches.size() < kMismatchCap) {
        report.mismatches.push_back(
            Mismatch{std::move(input), std::move(pipeline), std::move(oracle)});
    }
}

}  // namespace

ElementCode oracle_quantize_element(uint8_t sign, uint8_t e, uint8_t mant_prefix,
                                    ScaleResult scale, const FormatDescriptor& desc,
                                    ConversionPolicy policy) {
    return reference_element(sign, e, significand_from_prefix(mant_prefix, desc),
                             scale, desc, policy);
}

MxBlock oracle_convert_block(const Block32& block, const FormatDescriptor& desc,
                             ConversionPolicy policy) {
    ScaleResult scale{0, ScaleClass::Normal};
    bool special_scale = false;
    if (policy.special_policy == SpecialPolicy::Propagate) {
        for (const auto& v : block) {
            if (v.exponent == 0xFFu) {
                scale = v.mantissa == 0
                            ? ScaleResult{kScaleInfinity, ScaleClass::Infinity}
                            : ScaleResult{kScaleNaN, ScaleClass::NaN};
                special_scale = true;
                break;
            }
        }
    }
    if (!special_scale) {
        unsigned ev_max = 0;
        for (const auto& v : block) {
            if (v.exponent != 0xFFu && v.exponent > ev_max) {
                ev_max = v.exponent;
            }
        }
        const unsigned threshold = desc.scale_threshold;
        scale.x = static_cast<uint8_t>(ev_max > threshold ? ev_max - threshold : 0u);
    }

    MxBlock out;
    out.x = scale;
    out.policy = policy;
    out.format_id = desc.format_id;
    for (std::size_t i = 0; i < kBlockSize; ++i) {
        const Fp32Bits& v = block[i];
        if (v.exponent == 0 && v.mantissa == 0 && scale.cls == ScaleClass::Normal) {
            out.codes[i] = ElementCode{static_cast<uint8_t>(v.sign & 1u), 0, 0};
            continue;
        }
        out.codes[i] = reference_element(v.sign, v.exponent,
                                         (1u << 23) | v.mantissa, scale, desc, policy);
    }
    return out;
}

OracleReport exhaustive_element_check(const FormatDescriptor& desc,
                                      ConversionPolicy policy) {
    OracleReport report;
    const unsigned prefix_count = 1u << (desc.man_bits + 1);

    auto check = [&](uint8_t sign, unsigned e, unsigned prefix, ScaleResult scale) {
        const ElementCode got =
            quantize_element(sign, static_cast<uint8_t>(e),
                             static_cast<uint8_t>(prefix), scale, desc, policy);
        const ElementCode want =
            oracle_quantize_element(sign, static_cast<uint8_t>(e),
                                    static_cast<uint8_t>(prefix), scale, desc, policy);
        ++report.checked_count;
        if (got != want) {
            std::ostringstream in;
            in << format_name(desc.format_id)
               << (policy.sign_mode == SignMode::PaperExample ? " paper" : " corrected")
               << " quantize_element x=" << static_cast<unsigned>(scale.x)
               << " cls=" << static_cast<unsigned>(scale.cls) << " sign="
               << static_cast<unsigned>(sign) << " e=" << e << " prefix=" << prefix;
            record_mismatch(report, in.str(), code_bits(got, desc),
                            code_bits(want, desc));
        }
    };

    for (const ScaleResult special : {ScaleResult{kScaleInfinity, ScaleClass::Infinity},
                                      ScaleResult{kScaleNaN, ScaleClass::NaN}}) {
        for (uint8_t sign : {0, 1}) {
            for (unsigned e = 0; e <= 255; ++e) {
                for (unsigned prefix = 0; prefix < prefix_count; ++prefix) {
                    check(sign, e, prefix, special);
                }
            }
        }
    }

    const unsigned x_max = scale_temp(254, desc);
    for (unsigned x = 0; x <= x_max; ++x) {
        const ScaleResult scale{static_cast<uint8_t>(x), ScaleClass::Normal};
        // Pipeline-reachable exponents never exceed the winner that made x.
        const unsigned e_limit =
            std::min(254u, x + desc.scale_threshold);
        for (uint8_t sign : {0, 1}) {
            for (unsigned e = 0; e <= e_limit; ++e) {
                for (unsigned prefix = 0; prefix < prefix_count; ++prefix) {
                    check(sign, e, prefix, scale);
                }
            }
            for (unsigned prefix = 0; prefix < prefix_count; ++prefix) {
                check(sign, 255, prefix, scale);
            }
        }
    }
    return report;
}

std::vector<TableRow> rounding_table(const FormatDescriptor& desc) {
    std::vector<TableRow> rows;
    const unsigned prefix_count = 1u << (desc.man_bits + 1);
    rows.reserve(prefix_count);
    for (unsigned prefix = 0; prefix < prefix_count; ++prefix) {
        const RoundedMantissa r = round_mantissa(static_cast<uint8_t>(prefix), desc);
        rows.push_back(TableRow{static_cast<uint8_t>(prefix), r.mr, r.carry});
    }
    return rows;
}

const std::vector<TableRow>& printed_table(FormatId id) {
    // Published reference rows, verbatim. The all-ones prefix row is the
    // carry row (the stored exponent is incremented alongside a zero
    // mantissa), except in the E2M1 table which prints it carry-free.
    static const std::vector<TableRow> e5m2 = {
        {0b000, 0b00, false}, {0b001, 0b01, false}, {0b010, 0b11, false},
        {0b011, 0b10, false}, {0b100, 0b10, false}, {0b101, 0b11, false},
        {0b110, 0b11, false}, {0b111, 0b00, true},
    };
    static const std::vector<TableRow> e4m3 = {
        {0b0000, 0b000, false}, {0b0001, 0b001, false}, {0b0010, 0b001, false},
        {0b0011, 0b010, false}, {0b0100, 0b010, false}, {0b0101, 0b011, false},
        {0b0110, 0b011, false}, {0b0111, 0b100, false}, {0b1000, 0b100, false},
        {0b1001, 0b101, false}, {0b1010, 0b101, false}, {0b1011, 0b110, false},
        {0b1100, 0b110, false}, {0b1101, 0b111, false}, {0b1110, 0b111, false},
        {0b1111, 0b000, true},
    };
    static const std::vector<TableRow> e3m2 = {
        {0b000, 0b00, false}, {0b001, 0b01, false}, {0b010, 0b01, false},
        {0b011, 0b10, false}, {0b100, 0b10, false}, {0b101, 0b11, false},
        {0b110, 0b11, false}, {0b111, 0b00, true},
    };
    static const std::vector<TableRow> e2m3 = e4m3;
    static const std::vector<TableRow> e2m1 = {
        {0b00, 0b0, false}, {0b01, 0b1, false}, {0b10, 0b0, false},
        {0b11, 0b0, false},
    };
    static const std::vector<TableRow> none;
    switch (id) {
        case FormatId::E5M2: return e5m2;
        case FormatId::E4M3: return e4m3;
        case FormatId::E3M2: return e3m2;
        case FormatId::E2M3: return e2m3;
        case FormatId::E2M1: return e2m1;
        case FormatId::Int8: return none;
    }
    return none;
}

OracleReport table_report(const FormatDescriptor& desc) {
    OracleReport report;
    const std::vector<TableRow> generated = rounding_table(desc);
    const std::vector<TableRow>& reference = printed_table(desc.format_id);
    for (const TableRow& ref : reference) {
        const TableRow& got = generated.at(ref.prefix);
        ++report.checked_count;
        if (got != ref) {
            std::ostringstream in, lhs, rhs;
            in << format_name(desc.format_id) << " rounding row prefix=";
            for (unsigned b = desc.man_bits + 1; b-- > 0;) {
                in << (((ref.prefix >> b) & 1u) ? '1' : '0');
            }
            lhs << "mr=" << static_cast<unsigned>(got.mr) << " carry=" << got.carry;
            rhs << "mr=" << static_cast<unsigned>(ref.mr) << " carry=" << ref.carry;
            record_mismatch(report, in.str(), lhs.str(), rhs.str());
        }
    }
    return report;
}

}  // namespace mx
