// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vecfi/fp_codec.hpp"

namespace vecfi {

constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

enum class KernelKind : std::uint8_t { MatMul, WideningMatMul };

std::string_view kernel_kind_name(KernelKind k);
std::optional<KernelKind> kernel_kind_from_name(std::string_view name);

struct Dims {
    std::uint32_t m = 16;
    std::uint32_t n = 16;
    std::uint32_t d = 16;
};

// C[m x n] = A[m x d] * B[d x n], element-wise rounded per MAC step.
struct KernelConfig {
    KernelKind kind = KernelKind::MatMul;
    Precision precision = Precision::FP32;
    Dims dims;
    std::uint32_t lanes = 8;
    std::uint64_t seed = kDefaultSeed;

    // Throws ConfigError on bad dimensions or an unsupported widening pair.
    void validate() const;

    Precision in_precision() const { return precision; }
    // Accumulation format; also the output element format.
    Precision acc_precision() const;

    // Lowercase label used in file names and report rows,
    // e.g. "fp16_widening_matmul".
    std::string workload_label() const;
};

struct BitMatrix {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<BitWord> words;

    BitMatrix() = default;
    BitMatrix(std::uint32_t r, std::uint32_t c)
        : rows(r), cols(c), words(static_cast<std::size_t>(r) * c, 0) {}

    BitWord& at(std::uint32_t r, std::uint32_t c) {
        return words[static_cast<std::size_t>(r) * cols + c];
    }
    BitWord at(std::uint32_t r, std::uint32_t c) const {
        return words[static_cast<std::size_t>(r) * cols + c];
    }
};

struct Inputs {
    BitMatrix a; // m x d
    BitMatrix b; // d x n
};

// Elements drawn uniformly from [-1, 1) and encoded to the input format.
// Same seed, same dimensions: identical matrices, for every precision the
// underlying real sequence is the same.
Inputs gen_inputs(const KernelConfig& cfg);

// One multiply-accumulate as issued to a lane.
struct MacEvent {
    std::uint32_t mac_cycle; // position in the MAC-phase cycle numbering
    std::uint32_t lane;
    std::uint32_t row;  // output row
    std::uint32_t col;  // output column
    std::uint32_t step; // accumulation step, 0..d-1
    BitWord a_bits;
    BitWord b_bits;
};

// Output elements are assigned to lanes round-robin in row-major order.
// Lane group g runs its d accumulation steps on MAC cycles
// [g*d, (g+1)*d - 1]; every (row, col, step) triple appears exactly once.
std::vector<MacEvent> build_schedule(const KernelConfig& cfg,
                                     const Inputs& inputs);

std::uint32_t group_count(const KernelConfig& cfg);
std::uint32_t mac_cycle_count(const KernelConfig& cfg);

// Row-major CSV of hex bit patterns, one matrix row per line.
std::string matrix_to_csv(const BitMatrix& mat, const FloatFormat& fmt);

} // namespace vecfi
