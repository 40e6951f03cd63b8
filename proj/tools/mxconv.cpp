// Copyright (C) 2026 MX converter authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mx/container.hpp"
#include "mx/dequant.hpp"
#include "mx/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitMalformed = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

mx::FormatId parse_format(const std::string& name) {
    for (mx::FormatId id : mx::kAllFormats) {
        if (name == mx::format_name(id)) {
            return id;
        }
    }
    throw UsageError("unknown format: " + name);
}

std::vector<uint32_t> read_words(const std::string& path, bool csv) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::vector<uint32_t> words;
    if (csv) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) {
                continue;
            }
            std::size_t pos = 0;
            float value;
            try {
                value = std::stof(line, &pos);
            } catch (const std::exception&) {
                throw UsageError(path + ":" + std::to_string(line_no) +
                                 ": not a decimal number");
            }
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\r')) ++pos;
            if (pos != line.size()) {
                throw UsageError(path + ":" + std::to_string(line_no) +
                                 ": trailing characters");
            }
            words.push_back(std::bit_cast<uint32_t>(value));
        }
        if (in.bad()) {
            throw IoError("read failure on " + path);
        }
    } else {
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
        if (in.bad()) {
            throw IoError("read failure on " + path);
        }
        if (bytes.size() % 4 != 0) {
            throw UsageError(path + ": size is not a multiple of 4 bytes");
        }
        words.resize(bytes.size() / 4);
        for (std::size_t i = 0; i < words.size(); ++i) {
            uint32_t w = 0;
            for (int b = 0; b < 4; ++b) {
                w |= static_cast<uint32_t>(static_cast<uint8_t>(bytes[4 * i + b]))
                     << (8 * b);
            }
            words[i] = w;
        }
    }
    return words;
}

std::string bits_of(unsigned value, unsigned width) {
    std::string s;
    for (unsigned b = width; b-- > 0;) {
        s.push_back(((value >> b) & 1u) ? '1' : '0');
    }
    return s;
}

std::string decoded_str(const mx::DecodedValue& v) {
    switch (v.kind) {
        case mx::DecodedKind::PosNaN: return "nan";
        case mx::DecodedKind::Infinity: return "inf";
        case mx::DecodedKind::Real: break;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v.value);
    return buf;
}

const char* scale_class_name(mx::ScaleClass cls) {
    switch (cls) {
        case mx::ScaleClass::Normal: return "normal";
        case mx::ScaleClass::Infinity: return "infinity";
        case mx::ScaleClass::NaN: return "nan";
    }
    return "?";
}

int run_convert(const std::string& in_path, const std::string& out_path,
                const std::string& format, const std::string& mode,
                const std::string& specials, bool packed, bool csv) {
    mx::ContainerHeader header;
    header.format_id = parse_format(format);
    if (mode == "corrected") {
        header.policy.sign_mode = mx::SignMode::Corrected;
    } else if (mode == "paper") {
        header.policy.sign_mode = mx::SignMode::PaperExample;
    } else {
        throw UsageError("unknown mode: " + mode);
    }
    if (specials == "ignore") {
        header.policy.special_policy = mx::SpecialPolicy::IgnoreSpecials;
    } else if (specials == "propagate") {
        header.policy.special_policy = mx::SpecialPolicy::Propagate;
    } else {
        throw UsageError("unknown specials policy: " + specials);
    }
    header.packed = packed;

    const std::vector<uint32_t> words = read_words(in_path, csv);
    header.element_count = words.size();

    const mx::FormatDescriptor& desc = mx::format_params(header.format_id);
    mx::Container container;
    container.header = header;
    for (const mx::Block32& block : mx::to_blocks(words)) {
        container.blocks.push_back(mx::convert_block(block, desc, header.policy));
    }

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + out_path + " for writing");
    }
    mx::write_container(out, container);
    out.flush();
    if (!out) {
        throw IoError("write failure on " + out_path);
    }
    std::cout << "converted " << words.size() << " elements into "
              << container.blocks.size() << " blocks (" << format << ", " << mode
              << ", specials=" << specials << (packed ? ", packed" : "")
              << ") -> " << out_path << "\n";
    return kExitOk;
}

int run_inspect(const std::string& in_path) {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + in_path);
    }
    const mx::Container container = mx::read_container(in);
    const mx::ContainerHeader& h = container.header;
    const mx::FormatDescriptor& desc = mx::format_params(h.format_id);

    std::cout << "format: " << mx::format_name(h.format_id) << "  mode: "
              << (h.policy.sign_mode == mx::SignMode::PaperExample ? "paper"
                                                                   : "corrected")
              << "  specials: "
              << (h.policy.special_policy == mx::SpecialPolicy::Propagate
                      ? "propagate"
                      : "ignore")
              << "  packed: " << (h.packed ? "yes" : "no")
              << "  elements: " << h.element_count << "  blocks: "
              << container.blocks.size() << "\n";

    for (std::size_t b = 0; b < container.blocks.size(); ++b) {
        const mx::MxBlock& block = container.blocks[b];
        std::cout << "block " << b << ": X=0x";
        char buf[8];
        std::snprintf(buf, sizeof(buf), "%02X", block.x.x);
        std::cout << buf << " (" << scale_class_name(block.x.cls);
        if (block.x.cls == mx::ScaleClass::Normal) {
            std::cout << ", 2^" << static_cast<int>(block.x.x) - 127;
        }
        std::cout << ")\n";
        const auto decoded = mx::dequantize_block(block);
        for (std::size_t i = 0; i < mx::kBlockSize; ++i) {
            const mx::ElementCode& c = block.codes[i];
            std::cout << "  P" << (i + 1) << " = " << (c.sign ? '1' : '0') << ' '
                      << bits_of(c.ek, desc.exp_bits) << ' '
                      << bits_of(c.mr, desc.man_bits) << "  -> "
                      << decoded_str(decoded[i]) << "\n";
        }
    }
    return kExitOk;
}

int run_stats(const std::string& original_path, const std::string& mx_path) {
    const std::vector<uint32_t> words = read_words(original_path, false);
    std::ifstream in(mx_path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + mx_path);
    }
    const mx::Container container = mx::read_container(in);
    if (container.header.element_count != words.size()) {
        std::cerr << "element count mismatch: " << words.size() << " originals vs "
                  << container.header.element_count << " in container\n";
        return kExitUsage;
    }

    const std::vector<mx::Block32> blocks = mx::to_blocks(words);
    mx::ErrorStats total;
    double total_sq = 0.0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto decoded = mx::dequantize_block(container.blocks[b]);
        const mx::ErrorStats s =
            mx::block_error_stats(blocks[b], container.blocks[b], decoded);
        std::printf(
            "block %zu: max_abs=%.9g max_rel=%.9g rmse=%.9g flushed=%u "
            "saturated=%u special=%u\n",
            b, s.max_abs_error, s.max_rel_error, s.rmse, s.flushed_count,
            s.saturated_count, s.special_count);
        total.max_abs_error = std::max(total.max_abs_error, s.max_abs_error);
        total.max_rel_error = std::max(total.max_rel_error, s.max_rel_error);
        total.flushed_count += s.flushed_count;
        total.saturated_count += s.saturated_count;
        total.special_count += s.special_count;
        total.compared_count += s.compared_count;
        total_sq += s.rmse * s.rmse * s.compared_count;
    }
    if (total.compared_count > 0) {
        total.rmse = std::sqrt(total_sq / total.compared_count);
    }
    std::printf(
        "total: max_abs=%.9g max_rel=%.9g rmse=%.9g flushed=%u saturated=%u "
        "special=%u\n",
        total.max_abs_error, total.max_rel_error, total.rmse, total.flushed_count,
        total.saturated_count, total.special_count);
    return kExitOk;
}

int run_tables(const std::string& format) {
    const mx::FormatDescriptor& desc = mx::format_params(parse_format(format));
    const auto rows = mx::rounding_table(desc);
    std::cout << "prefix -> mr (carry) for " << format << ":\n";
    for (const mx::TableRow& row : rows) {
        std::cout << "  " << bits_of(row.prefix, desc.man_bits + 1) << " -> "
                  << bits_of(row.mr, desc.man_bits) << (row.carry ? "  carry" : "")
                  << "\n";
    }
    if (mx::printed_table(desc.format_id).empty()) {
        std::cout << "no published reference table for " << format << "\n";
        return kExitOk;
    }
    const mx::OracleReport report = mx::table_report(desc);
    std::cout << report.mismatches.size() << " deviation"
              << (report.mismatches.size() == 1 ? "" : "s")
              << " from the published table";
    if (!report.mismatches.empty()) {
        std::cout << " (";
        for (std::size_t i = 0; i < report.mismatches.size(); ++i) {
            if (i) std::cout << ", ";
            const std::string& in = report.mismatches[i].input;
            std::cout << in.substr(in.find("prefix=") + 7);
        }
        std::cout << ")";
    }
    std::cout << "\n";
    return kExitOk;
}

mx::Block32 random_block(std::mt19937& rng) {
    mx::Block32 block;
    for (auto& v : block) {
        v = mx::fp32_decode(rng());
    }
    return block;
}

int run_selftest() {
    int failures = 0;
    auto report_line = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name;
        if (!ok && !detail.empty()) {
            std::cout << ": " << detail;
        }
        std::cout << "\n";
        if (!ok) {
            ++failures;
        }
    };

    // Golden vectors: the four-value worked block, paper sign semantics.
    {
        mx::Block32 block{};
        block[0] = mx::Fp32Bits{0, 0b10101011, 0b011u << 20};
        block[1] = mx::Fp32Bits{0, 0b10101000, 0b110u << 20};
        block[2] = mx::Fp32Bits{0, 0b00101011, 0b001u << 20};
        block[3] = mx::Fp32Bits{1, 0b10001111, 0b010u << 20};
        const mx::FormatDescriptor& desc = mx::format_params(mx::FormatId::E5M2);
        const mx::ConversionPolicy paper{mx::SignMode::PaperExample,
                                         mx::SpecialPolicy::IgnoreSpecials};
        const mx::MxBlock out = mx::convert_block(block, desc, paper);
        bool ok = out.x.x == 0x9C && out.x.cls == mx::ScaleClass::Normal;
        const uint8_t expected[4] = {0x7A, 0x6F, 0x00, 0x80};
        std::string detail;
        for (std::size_t i = 0; i < 4 && ok; ++i) {
            if (mx::element_code_byte(out.codes[i], desc) != expected[i]) {
                ok = false;
                detail = "quantize_element P" + std::to_string(i + 1);
            }
        }
        for (std::size_t i = 4; i < mx::kBlockSize && ok; ++i) {
            ok = mx::element_code_byte(out.codes[i], desc) == 0;
        }
        if (out.x.x != 0x9C) {
            detail = "scale_temp: X=" + std::to_string(out.x.x);
        }
        report_line("golden-vectors", ok, detail);
    }

    // Closed-form scale over every winner exponent and format.
    {
        bool ok = true;
        std::string detail;
        for (mx::FormatId id : mx::kAllFormats) {
            const mx::FormatDescriptor& desc = mx::format_params(id);
            for (unsigned ev = 0; ev < 255 && ok; ++ev) {
                const unsigned want =
                    ev > desc.scale_threshold ? ev - desc.scale_threshold : 0;
                if (mx::scale_temp(static_cast<uint8_t>(ev), desc) != want) {
                    ok = false;
                    detail = std::string("scale_temp ") + mx::format_name(id) +
                             " ev=" + std::to_string(ev);
                }
            }
        }
        report_line("scale-closed-form", ok, detail);
    }

    // Rounding tables: the diff against the published rows must be exactly
    // the known misprints and nothing else.
    {
        bool ok = true;
        std::string detail;
        for (mx::FormatId id : mx::kAllFormats) {
            if (id == mx::FormatId::Int8) {
                continue;
            }
            const mx::OracleReport report = mx::table_report(mx::format_params(id));
            std::size_t expected = 0;
            if (id == mx::FormatId::E5M2) expected = 1;
            if (id == mx::FormatId::E2M1) expected = 2;
            if (report.mismatches.size() != expected) {
                ok = false;
                detail = std::string("table_report ") + mx::format_name(id);
            }
        }
        report_line("table-conformance", ok, detail);
    }

    // Exhaustive element sweeps, both sign modes, all formats.
    for (mx::SignMode mode : {mx::SignMode::Corrected, mx::SignMode::PaperExample}) {
        bool ok = true;
        std::string detail;
        for (mx::FormatId id : mx::kAllFormats) {
            const mx::OracleReport report = mx::exhaustive_element_check(
                mx::format_params(id),
                mx::ConversionPolicy{mode, mx::SpecialPolicy::IgnoreSpecials});
            if (!report.ok()) {
                ok = false;
                detail = report.mismatches.front().input + " pipeline=" +
                         report.mismatches.front().pipeline_bits + " oracle=" +
                         report.mismatches.front().oracle_bits;
                break;
            }
        }
        report_line(mode == mx::SignMode::Corrected ? "element-sweep-corrected"
                                                    : "element-sweep-paper",
                    ok, detail);
    }

    // Randomized block equivalence against the reference converter.
    {
        std::mt19937 rng(0x4D583031u);
        bool ok = true;
        std::string detail;
        for (mx::FormatId id : mx::kAllFormats) {
            const mx::FormatDescriptor& desc = mx::format_params(id);
            for (mx::SignMode mode :
                 {mx::SignMode::Corrected, mx::SignMode::PaperExample}) {
                for (mx::SpecialPolicy sp : {mx::SpecialPolicy::IgnoreSpecials,
                                             mx::SpecialPolicy::Propagate}) {
                    const mx::ConversionPolicy policy{mode, sp};
                    for (int n = 0; n < 5000 && ok; ++n) {
                        const mx::Block32 block = random_block(rng);
                        if (mx::convert_block(block, desc, policy) !=
                            mx::oracle_convert_block(block, desc, policy)) {
                            ok = false;
                            detail = std::string("convert_block ") +
                                     mx::format_name(id) + " trial " +
                                     std::to_string(n);
                        }
                    }
                }
            }
        }
        report_line("random-block-equivalence", ok, detail);
    }

    return failures == 0 ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FP32 <-> microscaling (MX) block converter"};
    app.require_subcommand(1);

    std::string in_path, out_path, original_path, mx_path;
    std::string format, mode = "corrected", specials = "ignore";
    bool packed = false, csv = false;

    CLI::App* convert = app.add_subcommand("convert", "convert FP32 stream to MX container");
    convert->add_option("--format", format, "e5m2|e4m3|e3m2|e2m3|e2m1|int8")->required();
    convert->add_option("--mode", mode, "corrected|paper");
    convert->add_option("--specials", specials, "ignore|propagate");
    convert->add_flag("--packed", packed, "dense bit packing of element codes");
    convert->add_flag("--csv", csv, "input is one decimal per line");
    convert->add_option("--in", in_path, "input path")->required();
    convert->add_option("--out", out_path, "output path")->required();

    CLI::App* inspect = app.add_subcommand("inspect", "dump an MX container");
    inspect->add_option("--in", in_path, "container path")->required();

    CLI::App* stats = app.add_subcommand("stats", "round-trip error statistics");
    stats->add_option("--original", original_path, "raw FP32 input path")->required();
    stats->add_option("--mx", mx_path, "container path")->required();

    CLI::App* tables = app.add_subcommand("tables", "print the rounding table");
    tables->add_option("--format", format, "e5m2|e4m3|e3m2|e2m3|e2m1|int8")->required();

    CLI::App* selftest = app.add_subcommand("selftest", "run the built-in verification suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (convert->parsed()) {
            return run_convert(in_path, out_path, format, mode, specials, packed, csv);
        }
        if (inspect->parsed()) {
            return run_inspect(in_path);
        }
        if (stats->parsed()) {
            return run_stats(original_path, mx_path);
        }
        if (tables->parsed()) {
            return run_tables(format);
        }
        if (selftest->parsed()) {
            return run_selftest();
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const mx::ContainerError& e) {
        std::cerr << "malformed container: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
