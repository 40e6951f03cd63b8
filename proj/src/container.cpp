// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include "mx/container.hpp"

#include <istream>
#include <ostream>

namespace mx {

namespace {

void put_u64_le(std::ostream& os, uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        os.put(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
}

uint64_t get_u64_le(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<uint64_t>(p[i]) << (8 * i);
    }
    return v;
}

uint8_t scale_byte(const ScaleResult& s) { return s.x; }

// The INT8 scale space collides at 0xFE: Table-2 Normal 254 and the Infinity
// code share the byte. An Infinity block always carries the uniform
// (sign, ek all ones, mr 0) pattern, and a Normal-254 INT8 block never can
// (its winner's own code stores ek 0), so the codes disambiguate.
ScaleResult scale_from_byte(uint8_t byte, const FormatDescriptor& desc,
                            const std::array<ElementCode, kBlockSize>& codes) {
    if (byte == kScaleNaN) {
        return ScaleResult{kScaleNaN, ScaleClass::NaN};
    }
    if (byte == kScaleInfinity) {
        if (desc.format_id == FormatId::Int8) {
            const uint8_t ones = static_cast<uint8_t>((1u << desc.exp_bits) - 1u);
            for (const ElementCode& c : codes) {
                if (c.ek != ones || c.mr != 0) {
                    return ScaleResult{byte, ScaleClass::Normal};
                }
            }
        }
        return ScaleResult{kScaleInfinity, ScaleClass::Infinity};
    }
    return ScaleResult{byte, ScaleClass::Normal};
}

std::size_t packed_block_bytes(const FormatDescriptor& desc) {
    return (kBlockSize * desc.element_bits + 7) / 8;
}

}  // namespace

std::vector<Block32> to_blocks(std::span<const uint32_t> words) {
    std::vector<Block32> blocks(block_count_for(words.size()));
    for (std::size_t i = 0; i < words.size(); ++i) {
        blocks[i / kBlockSize][i % kBlockSize] = fp32_decode(words[i]);
    }
    return blocks;  // trailing slots stay +0.0
}

uint64_t block_count_for(uint64_t element_count) {
    return (element_count + kBlockSize - 1) / kBlockSize;
}

void write_container(std::ostream& os, const Container& container) {
    const ContainerHeader& h = container.header;
    const FormatDescriptor& desc = format_params(h.format_id);

    os.write(reinterpret_cast<const char*>(kMagic.data()), kMagic.size());
    os.put(static_cast<char>(h.format_id));
    uint8_t flags = 0;
    if (h.policy.sign_mode == SignMode::PaperExample) flags |= kFlagPaperExample;
    if (h.policy.special_policy == SpecialPolicy::Propagate) flags |= kFlagPropagate;
    if (h.packed) flags |= kFlagPacked;
    os.put(static_cast<char>(flags));
    os.put(static_cast<char>(kBlockSize));
    os.put(0);  // reserved
    put_u64_le(os, h.element_count);

    for (const MxBlock& block : container.blocks) {
        os.put(static_cast<char>(scale_byte(block.x)));
        if (!h.packed) {
            for (const ElementCode& code : block.codes) {
                os.put(static_cast<char>(element_code_byte(code, desc)));
            }
        } else {
            std::vector<uint8_t> bytes(packed_block_bytes(desc), 0);
            std::size_t bit = 0;
            for (const ElementCode& code : block.codes) {
                const uint8_t value = element_code_byte(code, desc);
                for (unsigned b = 0; b < desc.element_bits; ++b, ++bit) {
                    if ((value >> b) & 1u) {
                        bytes[bit / 8] |= static_cast<uint8_t>(1u << (bit % 8));
                    }
                }
            }
            os.write(reinterpret_cast<const char*>(bytes.data()),
                     static_cast<std::streamsize>(bytes.size()));
        }
    }
}

Container read_container(std::istream& is) {
    std::array<uint8_t, kHeaderSize> header{};
    is.read(reinterpret_cast<char*>(header.data()), kHeaderSize);
    if (is.gcount() != static_cast<std::streamsize>(kHeaderSize)) {
        throw ContainerError("truncated header");
    }
    for (std::size_t i = 0; i < kMagic.size(); ++i) {
        if (header[i] != kMagic[i]) {
            throw ContainerError("bad magic");
        }
    }
    if (header[4] > static_cast<uint8_t>(FormatId::Int8)) {
        throw ContainerError("unknown format id");
    }
    const uint8_t flags = header[5];
    if (flags & ~(kFlagPaperExample | kFlagPropagate | kFlagPacked)) {
        throw ContainerError("unknown flag bits");
    }
    if (header[6] != kBlockSize) {
        throw ContainerError("unsupported block size");
    }

    Container container;
    container.header.format_id = static_cast<FormatId>(header[4]);
    container.header.policy.sign_mode =
        (flags & kFlagPaperExample) ? SignMode::PaperExample : SignMode::Corrected;
    container.header.policy.special_policy =
        (flags & kFlagPropagate) ? SpecialPolicy::Propagate : SpecialPolicy::IgnoreSpecials;
    container.header.packed = (flags & kFlagPacked) != 0;
    container.header.element_count = get_u64_le(header.data() + 8);

    const FormatDescriptor& desc = format_params(container.header.format_id);
    const uint64_t blocks = block_count_for(container.header.element_count);
    const std::size_t body_bytes =
        container.header.packed ? packed_block_bytes(desc) : kBlockSize;

    container.blocks.reserve(blocks);
    std::vector<uint8_t> body(body_bytes);
    for (uint64_t b = 0; b < blocks; ++b) {
        const int scale = is.get();
        if (scale < 0) {
            throw ContainerError("truncated block scale");
        }
        is.read(reinterpret_cast<char*>(body.data()),
                static_cast<std::streamsize>(body.size()));
        if (is.gcount() != static_cast<std::streamsize>(body.size())) {
            throw ContainerError("truncated block body");
        }

        MxBlock block;
        block.format_id = container.header.format_id;
        block.policy = container.header.policy;
        if (!container.header.packed) {
            for (std::size_t i = 0; i < kBlockSize; ++i) {
                if (body[i] >> desc.element_bits) {
                    throw ContainerError("element code has stray high bits");
                }
                block.codes[i] = element_code_from_byte(body[i], desc);
            }
        } else {
            std::size_t bit = 0;
            for (std::size_t i = 0; i < kBlockSize; ++i) {
                uint8_t value = 0;
                for (unsigned j = 0; j < desc.element_bits; ++j, ++bit) {
                    value |= static_cast<uint8_t>(((body[bit / 8] >> (bit % 8)) & 1u) << j);
                }
                block.codes[i] = element_code_from_byte(value, desc);
            }
        }
        block.x = scale_from_byte(static_cast<uint8_t>(scale), desc, block.codes);
        container.blocks.push_back(block);
    }
    if (is.peek() != std::istream::traits_type::eof()) {
        throw ContainerError("trailing bytes after last block");
    }
    return container;
}

}  // namespace mx
