// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mx/quant.hpp"

namespace mx {

// Brute-force reference implementation. Everything here recomputes the
// conversion from the arithmetic definition (linear-scan maximum, closed-form
// scale, integer add-and-truncate rounding on the full significand) and
// shares no structure with the staged bit-level pipeline it cross-checks.

struct Mismatch {
    std::string input;
    std::string pipeline_bits;
    std::string oracle_bits;
};

struct OracleReport {
    std::vector<Mismatch> mismatches;
    uint64_t checked_count = 0;

    bool ok() const { return mismatches.empty(); }
};

/// Reference element quantization from the (R+1)-bit prefix.
ElementCode oracle_quantize_element(uint8_t sign, uint8_t e, uint8_t mant_prefix,
                                    ScaleResult scale, const FormatDescriptor& desc,
                                    ConversionPolicy policy);

/// Reference whole-block conversion. Must agree bit-exactly with convert_block.
MxBlock oracle_convert_block(const Block32& block, const FormatDescriptor& desc,
                             ConversionPolicy policy);

/// Sweeps every (sign, exponent, prefix, reachable scale) combination of
/// quantize_element against the reference element path.
OracleReport exhaustive_element_check(const FormatDescriptor& desc,
                                      ConversionPolicy policy);

struct TableRow {
    uint8_t prefix;
    uint8_t mr;
    bool carry;

    friend bool operator==(const TableRow&, const TableRow&) = default;
};

/// The implemented prefix -> (mr, carry) mapping, in ascending prefix order.
std::vector<TableRow> rounding_table(const FormatDescriptor& desc);

/// The published quantization table for the format, as reference data.
/// Empty for Int8, which has no published table.
const std::vector<TableRow>& printed_table(FormatId id);

/// Diffs rounding_table against printed_table row by row.
OracleReport table_report(const FormatDescriptor& desc);

}  // namespace mx
