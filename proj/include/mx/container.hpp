// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "mx/quant.hpp"

namespace mx {

// On-disk layout:
//   16-byte header: magic "MX01", format_id, flags, block_size (= 32),
//   one reserved zero byte, element_count as 8-byte little-endian.
//   Then per block: 1 scale byte followed by the 32 element codes, either
//   one byte per code (default) or densely bit-packed LSB-first.

inline constexpr std::size_t kHeaderSize = 16;
inline constexpr std::array<uint8_t, 4> kMagic = {0x4D, 0x58, 0x30, 0x31};

inline constexpr uint8_t kFlagPaperExample = 0x01;
inline constexpr uint8_t kFlagPropagate = 0x02;
inline constexpr uint8_t kFlagPacked = 0x04;

struct ContainerHeader {
    FormatId format_id = FormatId::E5M2;
    ConversionPolicy policy;
    bool packed = false;
    uint64_t element_count = 0;
};

struct Container {
    ContainerHeader header;
    std::vector<MxBlock> blocks;
};

class ContainerError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Groups raw FP32 words into blocks, padding the last one with +0.0.
std::vector<Block32> to_blocks(std::span<const uint32_t> words);

uint64_t block_count_for(uint64_t element_count);

void write_container(std::ostream& os, const Container& container);

/// Throws ContainerError on bad magic, bad fields, or truncation.
Container read_container(std::istream& is);

}  // namespace mx
