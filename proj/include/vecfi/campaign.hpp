// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vecfi/machine.hpp"
#include "vecfi/rng.hpp"

namespace vecfi {

// Operand-flip campaign: one bit of one FPU input operand, one MAC event,
// sampled uniformly; outcome decided by the final output comparison.
struct SdcCampaignConfig {
    KernelConfig kernel;
    FieldKind field = FieldKind::Exponent;
    std::uint32_t trials = 1000;
    std::uint64_t campaign_seed = kDefaultSeed;
    // Adds the accumulator input to the flip target pool. Off by default:
    // the standard campaign flips multiplier operands only.
    bool include_acc_flip = false;

    void validate() const;
};

// Whole-machine campaign over registry sites, SEU on state or SET on
// data/handshake signals, injection cycle uniform over the full run.
struct ModuleCampaignConfig {
    KernelConfig kernel;
    FaultKind fault_kind = FaultKind::SET;
    std::uint32_t trials = 1000;
    std::uint64_t campaign_seed = kDefaultSeed;
    std::vector<ModuleId> modules; // empty selects every supported module

    void validate() const;
};

// Modules with a behavioral model; campaigns sample only these.
bool module_supported(ModuleId m);

struct SeverityRecord {
    std::vector<std::uint32_t> corrupted_indices; // flat row-major
    std::uint32_t k = 0;
    std::optional<double> rmse; // defined iff >= 1 finite corrupted pair
    std::uint32_t nonfinite_count = 0;
};

// Bitwise output comparison plus root-mean-square deviation over the
// corrupted elements whose decodes are finite on both sides.
SeverityRecord severity(const BitMatrix& golden_out,
                        const BitMatrix& faulty_out, const FloatFormat& fmt);

struct TrialRecord {
    std::uint32_t trial_index = 0;
    FaultSpec fault;
    std::string site_id;
    OutcomeClass cls = OutcomeClass::Masked;
    bool sdc = false;
    std::optional<std::uint32_t> first_divergence_cycle;
    SeverityRecord sev; // populated for SDC trials
};

// Per-trial randomness is keyed to (campaign_seed, trial_index) so trial
// order and worker count never change results.
std::uint64_t trial_seed(std::uint64_t campaign_seed,
                         std::uint32_t trial_index);

// Uniform draw of (MAC event, operand a or b, bit within the field).
FaultSpec sample_operand_fault(const GoldenTrace& golden, FieldKind field,
                               SplitMix64& rng, bool include_acc = false);

// workers = 0 uses the hardware thread count.
std::vector<TrialRecord> run_sdc_campaign(const SdcCampaignConfig& cfg,
                                          unsigned workers = 0);

struct ModuleTally {
    ModuleId module;
    std::uint64_t masked = 0;
    std::uint64_t fs = 0;
    std::uint64_t fd = 0;
    std::uint64_t sdc = 0;

    std::uint64_t total() const { return masked + fs + fd; }
};

struct ModuleCampaignOutput {
    std::vector<TrialRecord> records;
    std::vector<ModuleTally> tallies; // one entry per sampled module
};

ModuleCampaignOutput run_module_campaign(const ModuleCampaignConfig& cfg,
                                         unsigned workers = 0);

// The six standard workloads sharing dims, lanes and input seed: plain
// matmul in FP32/FP16/BP16/FP8 plus widening matmul in FP16/FP8.
std::vector<KernelConfig> default_workloads(const KernelConfig& base);

// 18 campaigns: each workload crossed with the sign/exponent/mantissa
// fields, trials_per_field each. Campaign seeds are derived from the
// master seed, the workload index and the field index.
std::vector<SdcCampaignConfig> default_sdc_suite(const KernelConfig& base,
                                                 std::uint32_t trials_per_field,
                                                 std::uint64_t master_seed);

// 12 campaigns: each workload crossed with SEU and SET, splitting
// total_trials exactly (earlier campaigns take the remainder).
std::vector<ModuleCampaignConfig>
default_module_suite(const KernelConfig& base, std::uint32_t total_trials,
                     std::uint64_t master_seed);

} // namespace vecfi
