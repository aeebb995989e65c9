// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vecfi/kernel.hpp"

namespace vecfi {

// Structural model of the compute cluster. Each group of output elements
// is processed in a fixed pipeline: one lookahead load cycle, d MAC
// cycles with the next operand slice loading in parallel, one store
// cycle. Total cycle count is group_count * (d + 2).
//
//   TCDM  --VLSU-->  VRF  --operand ports-->  VFU lanes  --result port-->
//   VRF  --VLSU-->  TCDM output region
//
// The controller sequence counter indexes this pipeline; VSLDU, Snitch
// and ICache exist as registry entries only and have no behavior.

enum class ModuleId : std::uint8_t {
    TCDM,
    VRF,
    VFU,
    VLSU,
    VSLDU,
    Controller,
    Snitch,
    ICache,
};

std::string_view module_name(ModuleId m);
std::optional<ModuleId> module_from_name(std::string_view name);

enum class SignalClass : std::uint8_t { Data, Handshake, State };

std::string_view signal_class_name(SignalClass c);

enum class SiteRole : std::uint8_t {
    State,    // storage bits (TCDM, VRF, controller counter, placeholders)
    Data,     // VLSU transfer port or placeholder data port
    Valid,
    Ready,
    OperandA, // per-lane VFU ports
    OperandB,
    Result,
    AccIn,    // accumulator input path, selectable but not in the registry
};

struct SiteKey {
    ModuleId module = ModuleId::TCDM;
    SiteRole role = SiteRole::State;
    std::uint16_t lane = 0;

    bool operator==(const SiteKey&) const = default;
};

std::string site_id_string(const SiteKey& key);
std::optional<SiteKey> parse_site_id(std::string_view id);

struct FaultSite {
    SiteKey key;
    SignalClass signal;
    std::uint32_t width; // bits
    std::string id;
};

// Fixed registry for one kernel configuration. Width of the TCDM site is
// (m*d + d*n + m*n) * output-width; the VRF holds 32 registers of 256
// bits; handshake sites are one bit each.
std::vector<FaultSite> site_registry(const KernelConfig& cfg);

const FaultSite* find_site(const std::vector<FaultSite>& registry,
                           std::string_view id);

enum class FaultKind : std::uint8_t { SEU, SET };

std::string_view fault_kind_name(FaultKind k);
std::optional<FaultKind> fault_kind_from_name(std::string_view name);

// A single injected fault. SEU inverts a state bit at the start of the
// given cycle and the bit keeps the inverted value until overwritten.
// SET inverts a port signal during that one cycle only; it has an effect
// only if something samples the signal in that cycle.
struct FaultSpec {
    FaultKind kind = FaultKind::SET;
    SiteKey site;
    std::uint32_t bit = 0;
    std::uint32_t cycle = 0;
};

enum class OutcomeClass : std::uint8_t { Masked, FS, FD };

std::string_view outcome_class_name(OutcomeClass c);

struct Classification {
    OutcomeClass cls;
    bool sdc;
};

// Precedence FS > FD > Masked. A handshake violation or deadlock is a
// system crash regardless of data effects; data or output divergence
// without one is data corruption; sdc marks corruption that reached the
// final output write-out.
Classification classify(bool handshake_mismatch, bool deadlock,
                        bool data_mismatch, bool output_mismatch);

// Watchdog bound used by the faulty run.
bool detect_deadlock(std::uint64_t elapsed_cycles,
                     std::uint64_t golden_cycles);

// Reference execution trace. The strobe log records, per cycle, the
// values actually moved through the VLSU port and sampled at the VFU
// operand and result ports.
struct GoldenTrace {
    KernelConfig cfg;
    Inputs inputs;
    std::vector<MacEvent> schedule;
    BitMatrix output;          // m x n, accumulation format
    std::uint32_t total_cycles = 0;
    std::vector<std::uint8_t> strobe_log;
    std::uint32_t strobe_stride = 0;

    // Machine cycle at which MAC-phase cycle `mac_cycle` executes.
    std::uint32_t machine_cycle_of_mac(std::uint32_t mac_cycle) const;
};

GoldenTrace run_golden(const KernelConfig& cfg);

// Which strobes the comparison uses. Full compares the per-cycle data
// strobes against the golden log; OutputOnly observes handshake
// violations, deadlock and the final output comparison, which is the
// pipeline used by the operand-flip campaigns.
enum class StrobeMode : std::uint8_t { Full, OutputOnly };

struct TrialOutcome {
    OutcomeClass cls = OutcomeClass::Masked;
    bool sdc = false;
    std::optional<std::uint32_t> first_divergence_cycle;
    BitMatrix faulty_output; // final output region, always filled
};

// Re-executes the schedule with the fault applied. Throws ConfigError if
// the fault spec does not match the registry (wrong kind for the signal
// class, bit or cycle out of range).
TrialOutcome run_faulty(const GoldenTrace& golden,
                        const std::optional<FaultSpec>& fault,
                        StrobeMode mode = StrobeMode::Full);

} // namespace vecfi
