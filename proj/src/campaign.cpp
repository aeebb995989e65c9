// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#include "vecfi/campaign.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "vecfi/errors.hpp"

namespace vecfi {

namespace {

// Runs fn(0..count-1) across workers; any index may run on any worker,
// so fn must write only to its own output slot.
template <typename Fn>
void for_each_index(std::uint32_t count, unsigned workers, Fn&& fn) {
    if (workers == 0) workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (count < 2 || workers == 1) {
        for (std::uint32_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (workers > count) workers = count;
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            while (true) {
                const std::uint32_t i =
                    next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count) return;
                fn(i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            next.store(count, std::memory_order_relaxed);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

void SdcCampaignConfig::validate() const {
    kernel.validate();
    if (trials < 1) throw ConfigError("trial count must be at least 1");
}

bool module_supported(ModuleId m) {
    switch (m) {
    case ModuleId::TCDM:
    case ModuleId::VRF:
    case ModuleId::VFU:
    case ModuleId::VLSU:
    case ModuleId::Controller:
        return true;
    case ModuleId::VSLDU:
    case ModuleId::Snitch:
    case ModuleId::ICache:
        return false;
    }
    return false;
}

void ModuleCampaignConfig::validate() const {
    kernel.validate();
    if (trials < 1) throw ConfigError("trial count must be at least 1");
    for (ModuleId m : modules)
        if (!module_supported(m))
            throw ConfigError("unsupported module '" +
                              std::string(module_name(m)) +
                              "': no behavioral model, campaigns cannot "
                              "target it");
}

SeverityRecord severity(const BitMatrix& golden_out,
                        const BitMatrix& faulty_out, const FloatFormat& fmt) {
    if (golden_out.rows != faulty_out.rows ||
        golden_out.cols != faulty_out.cols)
        throw InvariantError("severity over mismatched matrix shapes");
    SeverityRecord rec;
    double sum_sq = 0.0;
    std::uint32_t finite_pairs = 0;
    const std::size_t count = golden_out.words.size();
    for (std::size_t i = 0; i < count; ++i) {
        if (golden_out.words[i] == faulty_out.words[i]) continue;
        rec.corrupted_indices.push_back(static_cast<std::uint32_t>(i));
        const DecodedValue gm = decode(golden_out.words[i], fmt);
        const DecodedValue fm = decode(faulty_out.words[i], fmt);
        const bool gm_finite = gm.cls != ValueClass::Inf && gm.cls != ValueClass::NaN;
        const bool fm_finite = fm.cls != ValueClass::Inf && fm.cls != ValueClass::NaN;
        if (gm_finite && fm_finite) {
            const double dev = fm.value - gm.value;
            sum_sq += dev * dev;
            ++finite_pairs;
        } else {
            ++rec.nonfinite_count;
        }
    }
    rec.k = static_cast<std::uint32_t>(rec.corrupted_indices.size());
    if (finite_pairs > 0) rec.rmse = std::sqrt(sum_sq / finite_pairs);
    return rec;
}

std::uint64_t trial_seed(std::uint64_t campaign_seed,
                         std::uint32_t trial_index) {
    return mix64(campaign_seed, trial_index);
}

FaultSpec sample_operand_fault(const GoldenTrace& golden, FieldKind field,
                               SplitMix64& rng, bool include_acc) {
    if (golden.schedule.empty())
        throw InvariantError("operand fault sampling over empty schedule");
    const MacEvent& ev =
        golden.schedule[rng.below(golden.schedule.size())];
    const std::uint64_t slot = rng.below(include_acc ? 3 : 2);
    FaultSpec spec;
    spec.kind = FaultKind::SET;
    spec.site.module = ModuleId::VFU;
    spec.site.lane = static_cast<std::uint16_t>(ev.lane);
    const FloatFormat* fmt;
    if (slot == 2) {
        spec.site.role = SiteRole::AccIn;
        fmt = &format(golden.cfg.acc_precision());
    } else {
        spec.site.role = slot == 0 ? SiteRole::OperandA : SiteRole::OperandB;
        fmt = &format(golden.cfg.in_precision());
    }
    const BitRange range = field_bounds(*fmt, field);
    spec.bit = range.lo + static_cast<std::uint32_t>(rng.below(range.width()));
    spec.cycle = golden.machine_cycle_of_mac(ev.mac_cycle);
    return spec;
}

std::vector<TrialRecord> run_sdc_campaign(const SdcCampaignConfig& cfg,
                                          unsigned workers) {
    cfg.validate();
    const GoldenTrace golden = run_golden(cfg.kernel);
    const FloatFormat& out_fmt = format(cfg.kernel.acc_precision());
    std::vector<TrialRecord> records(cfg.trials);
    for_each_index(cfg.trials, workers, [&](std::uint32_t i) {
        SplitMix64 rng(trial_seed(cfg.campaign_seed, i));
        const FaultSpec fault =
            sample_operand_fault(golden, cfg.field, rng, cfg.include_acc_flip);
        const TrialOutcome out =
            run_faulty(golden, fault, StrobeMode::OutputOnly);
        TrialRecord& rec = records[i];
        rec.trial_index = i;
        rec.fault = fault;
        rec.site_id = site_id_string(fault.site);
        rec.cls = out.cls;
        rec.sdc = out.sdc;
        rec.first_divergence_cycle = out.first_divergence_cycle;
        if (out.sdc)
            rec.sev = severity(golden.output, out.faulty_output, out_fmt);
    });
    return records;
}

ModuleCampaignOutput run_module_campaign(const ModuleCampaignConfig& cfg,
                                         unsigned workers) {
    cfg.validate();
    const GoldenTrace golden = run_golden(cfg.kernel);
    const FloatFormat& out_fmt = format(cfg.kernel.acc_precision());

    const auto registry = site_registry(cfg.kernel);
    const SignalClass state = SignalClass::State;
    std::vector<const FaultSite*> pool;
    std::vector<std::uint64_t> cumulative;
    std::uint64_t total_bits = 0;
    for (const FaultSite& site : registry) {
        if (!module_supported(site.key.module)) continue;
        if (!cfg.modules.empty()) {
            bool wanted = false;
            for (ModuleId m : cfg.modules) wanted |= m == site.key.module;
            if (!wanted) continue;
        }
        const bool eligible = cfg.fault_kind == FaultKind::SEU
                                  ? site.signal == state
                                  : site.signal != state;
        if (!eligible) continue;
        pool.push_back(&site);
        total_bits += site.width;
        cumulative.push_back(total_bits);
    }
    if (pool.empty())
        throw ConfigError("no eligible fault sites for this campaign");

    std::vector<TrialRecord> records(cfg.trials);
    for_each_index(cfg.trials, workers, [&](std::uint32_t i) {
        SplitMix64 rng(trial_seed(cfg.campaign_seed, i));
        const std::uint64_t pick = rng.below(total_bits);
        std::size_t s = 0;
        while (cumulative[s] <= pick) ++s;
        const FaultSite& site = *pool[s];
        const std::uint64_t base = s == 0 ? 0 : cumulative[s - 1];
        FaultSpec fault;
        fault.kind = cfg.fault_kind;
        fault.site = site.key;
        fault.bit = static_cast<std::uint32_t>(pick - base);
        fault.cycle =
            static_cast<std::uint32_t>(rng.below(golden.total_cycles));
        const TrialOutcome out = run_faulty(golden, fault, StrobeMode::Full);
        TrialRecord& rec = records[i];
        rec.trial_index = i;
        rec.fault = fault;
        rec.site_id = site.id;
        rec.cls = out.cls;
        rec.sdc = out.sdc;
        rec.first_divergence_cycle = out.first_divergence_cycle;
        if (out.sdc)
            rec.sev = severity(golden.output, out.faulty_output, out_fmt);
    });

    ModuleCampaignOutput result;
    result.records = std::move(records);
    for (const TrialRecord& rec : result.records) {
        ModuleTally* tally = nullptr;
        for (ModuleTally& t : result.tallies)
            if (t.module == rec.fault.site.module) tally = &t;
        if (!tally) {
            result.tallies.push_back({rec.fault.site.module, 0, 0, 0, 0});
            tally = &result.tallies.back();
        }
        switch (rec.cls) {
        case OutcomeClass::Masked: ++tally->masked; break;
        case OutcomeClass::FS: ++tally->fs; break;
        case OutcomeClass::FD:
            ++tally->fd;
            if (rec.sdc) ++tally->sdc;
            break;
        }
    }
    return result;
}

std::vector<KernelConfig> default_workloads(const KernelConfig& base) {
    std::vector<KernelConfig> out;
    for (Precision p : {Precision::FP32, Precision::FP16, Precision::BP16,
                        Precision::FP8}) {
        KernelConfig cfg = base;
        cfg.kind = KernelKind::MatMul;
        cfg.precision = p;
        out.push_back(cfg);
    }
    for (Precision p : {Precision::FP16, Precision::FP8}) {
        KernelConfig cfg = base;
        cfg.kind = KernelKind::WideningMatMul;
        cfg.precision = p;
        out.push_back(cfg);
    }
    return out;
}

std::vector<SdcCampaignConfig>
default_sdc_suite(const KernelConfig& base, std::uint32_t trials_per_field,
                  std::uint64_t master_seed) {
    std::vector<SdcCampaignConfig> suite;
    const auto workloads = default_workloads(base);
    for (std::size_t w = 0; w < workloads.size(); ++w) {
        std::size_t f = 0;
        for (FieldKind field :
             {FieldKind::Sign, FieldKind::Exponent, FieldKind::Mantissa}) {
            SdcCampaignConfig cfg;
            cfg.kernel = workloads[w];
            cfg.field = field;
            cfg.trials = trials_per_field;
            cfg.campaign_seed = mix64(mix64(master_seed, w), f);
            suite.push_back(cfg);
            ++f;
        }
    }
    return suite;
}

std::vector<ModuleCampaignConfig>
default_module_suite(const KernelConfig& base, std::uint32_t total_trials,
                     std::uint64_t master_seed) {
    const auto workloads = default_workloads(base);
    const std::uint32_t campaigns =
        static_cast<std::uint32_t>(2 * workloads.size());
    if (total_trials < campaigns)
        throw ConfigError("module suite needs at least " +
                          std::to_string(campaigns) + " trials");
    std::vector<ModuleCampaignConfig> suite;
    const std::uint32_t each = total_trials / campaigns;
    const std::uint32_t extra = total_trials % campaigns;
    std::uint32_t index = 0;
    for (FaultKind kind : {FaultKind::SEU, FaultKind::SET}) {
        for (std::size_t w = 0; w < workloads.size(); ++w) {
            ModuleCampaignConfig cfg;
            cfg.kernel = workloads[w];
            cfg.fault_kind = kind;
            cfg.trials = each + (index < extra ? 1 : 0);
            cfg.campaign_seed = mix64(mix64(master_seed, w),
                                      kind == FaultKind::SEU ? 8 : 9);
            suite.push_back(cfg);
            ++index;
        }
    }
    return suite;
}

} // namespace vecfi
