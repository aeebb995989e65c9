// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "vecfi/campaign.hpp"

namespace vecfi {

struct GroupKey {
    std::string precision;
    std::string kernel;
    std::string target; // field name for operand campaigns, module otherwise
    std::string fault_kind;

    bool operator==(const GroupKey&) const = default;
    bool operator<(const GroupKey& o) const {
        return std::tie(precision, kernel, target, fault_kind) <
               std::tie(o.precision, o.kernel, o.target, o.fault_kind);
    }

    std::string label() const;
};

struct RmseStats {
    double mean = 0.0;
    double median = 0.0; // lower middle value for even counts
    double max = 0.0;
};

struct CampaignResult {
    GroupKey key;
    std::uint64_t masked = 0;
    std::uint64_t fs = 0;
    std::uint64_t fd = 0;
    std::uint64_t sdc = 0;
    std::optional<double> avg_k;            // mean K over SDC trials
    std::optional<RmseStats> rmse_stats;    // over finite per-trial rmse
    std::uint64_t nonfinite_trials = 0;     // SDC trials with any Inf/NaN

    std::uint64_t total() const { return masked + fs + fd; }
};

using GroupSelector = std::function<GroupKey(const TrialRecord&)>;

// Sorts by trial index, groups by key, computes the statistics. A pure
// fold: input order never changes the result.
std::vector<CampaignResult> aggregate(std::vector<TrialRecord> records,
                                      const GroupSelector& select);

// results.csv: one row per group, empty cells for undefined statistics.
std::string emit_results_csv(const std::vector<CampaignResult>& results);

// Same content as the CSV, as a JSON array with nested counts.
std::string emit_results_json(const std::vector<CampaignResult>& results);

// Per-trial rows: trial_index, site_id, bit, cycle, class, sdc, K, rmse,
// nonfinite_count.
std::string emit_records_csv(const std::vector<TrialRecord>& records);

// Reads rows written by emit_records_csv back into records. Fields not
// present in the CSV (fault kind, corrupted index list) are left at
// their defaults; statistics only need class, sdc, K, rmse and the
// nonfinite count.
std::vector<TrialRecord> parse_records_csv(const std::string& text);

// One point per group with defined rmse stats: x = avg_K, y = mean rmse.
std::string emit_scatter_csv(const std::vector<CampaignResult>& results);

// Self-contained SVG of the same points, log scale on the rmse axis.
std::string emit_scatter_svg(const std::vector<CampaignResult>& results,
                             const std::string& title);

} // namespace vecfi
