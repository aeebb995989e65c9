// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#include "vecfi/kernel.hpp"

#include <algorithm>
#include <cctype>

#include "vecfi/errors.hpp"
#include "vecfi/rng.hpp"

namespace vecfi {

std::string_view kernel_kind_name(KernelKind k) {
    switch (k) {
    case KernelKind::MatMul: return "matmul";
    case KernelKind::WideningMatMul: return "widening_matmul";
    }
    return "?";
}

std::optional<KernelKind> kernel_kind_from_name(std::string_view name) {
    if (name == "matmul") return KernelKind::MatMul;
    if (name == "widening_matmul") return KernelKind::WideningMatMul;
    return std::nullopt;
}

void KernelConfig::validate() const {
    if (dims.m < 1 || dims.n < 1 || dims.d < 1)
        throw ConfigError("matrix dimensions must be at least 1");
    if (lanes < 1) throw ConfigError("lane count must be at least 1");
    if (kind == KernelKind::WideningMatMul && !widened(precision))
        throw ConfigError(
            std::string("widening matmul is not defined for ") +
            std::string(precision_name(precision)));
}

Precision KernelConfig::acc_precision() const {
    if (kind == KernelKind::WideningMatMul) return *widened(precision);
    return precision;
}

std::string KernelConfig::workload_label() const {
    std::string label(precision_name(precision));
    for (char& c : label) c = static_cast<char>(std::tolower(c));
    label += '_';
    label += kernel_kind_name(kind);
    return label;
}

Inputs gen_inputs(const KernelConfig& cfg) {
    cfg.validate();
    const FloatFormat& fmt = format(cfg.precision);
    SplitMix64 rng(cfg.seed);
    Inputs in;
    in.a = BitMatrix(cfg.dims.m, cfg.dims.d);
    in.b = BitMatrix(cfg.dims.d, cfg.dims.n);
    for (BitWord& w : in.a.words) w = encode(rng.unit() * 2.0 - 1.0, fmt);
    for (BitWord& w : in.b.words) w = encode(rng.unit() * 2.0 - 1.0, fmt);
    return in;
}

std::uint32_t group_count(const KernelConfig& cfg) {
    const std::uint64_t elems =
        static_cast<std::uint64_t>(cfg.dims.m) * cfg.dims.n;
    return static_cast<std::uint32_t>((elems + cfg.lanes - 1) / cfg.lanes);
}

std::uint32_t mac_cycle_count(const KernelConfig& cfg) {
    return group_count(cfg) * cfg.dims.d;
}

std::vector<MacEvent> build_schedule(const KernelConfig& cfg,
                                     const Inputs& inputs) {
    cfg.validate();
    const std::uint32_t elems = cfg.dims.m * cfg.dims.n;
    std::vector<MacEvent> schedule;
    schedule.reserve(static_cast<std::size_t>(elems) * cfg.dims.d);
    for (std::uint32_t g = 0; g < group_count(cfg); ++g) {
        for (std::uint32_t step = 0; step < cfg.dims.d; ++step) {
            const std::uint32_t cycle = g * cfg.dims.d + step;
            for (std::uint32_t lane = 0; lane < cfg.lanes; ++lane) {
                const std::uint32_t idx = g * cfg.lanes + lane;
                if (idx >= elems) break;
                const std::uint32_t row = idx / cfg.dims.n;
                const std::uint32_t col = idx % cfg.dims.n;
                schedule.push_back({cycle, lane, row, col, step,
                                    inputs.a.at(row, step),
                                    inputs.b.at(step, col)});
            }
        }
    }
    return schedule;
}

std::string matrix_to_csv(const BitMatrix& mat, const FloatFormat& fmt) {
    std::string out;
    for (std::uint32_t r = 0; r < mat.rows; ++r) {
        for (std::uint32_t c = 0; c < mat.cols; ++c) {
            if (c) out += ',';
            out += to_hex(mat.at(r, c), fmt);
        }
        out += '\n';
    }
    return out;
}

} // namespace vecfi
