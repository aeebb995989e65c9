// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0
//
// vecfi: fault-injection campaigns on a modeled vector matmul datapath.
//
//   vecfi codec <pattern> <format>    decode a bit pattern
//   vecfi trial [fault flags]         run one injection, print the record
//   vecfi sdc [filters]               operand-flip campaign suite
//   vecfi modules --fault-kind ...    whole-machine SET/SEU campaign
//   vecfi report --manifest ...       re-aggregate stored trial records

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vecfi/campaign.hpp"
#include "vecfi/errors.hpp"
#include "vecfi/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

using namespace vecfi;

std::uint64_t parse_u64(const std::string& text) {
    std::string_view sv = text;
    int base = 10;
    if (sv.size() > 2 && sv[0] == '0' && (sv[1] == 'x' || sv[1] == 'X')) {
        sv.remove_prefix(2);
        base = 16;
    }
    std::uint64_t value = 0;
    const auto [p, ec] =
        std::from_chars(sv.data(), sv.data() + sv.size(), value, base);
    if (ec != std::errc{} || p != sv.data() + sv.size())
        throw ConfigError("not an unsigned integer: '" + text + "'");
    return value;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(c));
    return s;
}

Precision parse_precision(const std::string& name) {
    if (const auto p = precision_from_name(lower(name))) return *p;
    throw ConfigError("unknown precision '" + name +
                      "' (expected fp32, fp16, bp16 or fp8)");
}

KernelKind parse_kernel(const std::string& name) {
    if (const auto k = kernel_kind_from_name(lower(name))) return *k;
    throw ConfigError("unknown kernel '" + name +
                      "' (expected matmul or widening_matmul)");
}

FieldKind parse_field(const std::string& name) {
    if (const auto f = field_from_name(lower(name))) return *f;
    throw ConfigError("unknown field '" + name +
                      "' (expected sign, exponent or mantissa)");
}

FaultKind parse_fault_kind(const std::string& name) {
    if (const auto k = fault_kind_from_name(lower(name))) return *k;
    throw ConfigError("unknown fault kind '" + name +
                      "' (expected set or seu)");
}

Dims parse_dims(const std::string& text) {
    Dims dims;
    std::uint32_t* slots[3] = {&dims.m, &dims.n, &dims.d};
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t pos = text.find('x', start);
        const bool last = i == 2;
        if (last != (pos == std::string::npos))
            throw ConfigError("dims must look like 16x16x16");
        const std::string part =
            text.substr(start, last ? std::string::npos : pos - start);
        const std::uint64_t v = parse_u64(part);
        if (v == 0 || v > 4096) throw ConfigError("dims out of range");
        *slots[i] = static_cast<std::uint32_t>(v);
        start = pos + 1;
    }
    return dims;
}

// One flat settings block shared by the campaign subcommands; a JSON
// config file fills it first, then command-line flags override.
struct Settings {
    Dims dims;
    std::uint32_t lanes = 8;
    std::uint64_t seed = kDefaultSeed;
    std::optional<std::uint64_t> input_seed;
    std::optional<std::uint32_t> trials;
    unsigned workers = 0;
    std::string out_dir = "out";
    std::optional<std::string> precision;
    std::optional<std::string> kernel;
    std::optional<std::string> field;
    std::optional<std::string> fault_kind;
    std::vector<std::string> modules;
    bool suite = false;
    bool include_acc_flip = false;
};

std::uint64_t seed_from_json(const json& v, const char* key) {
    if (v.is_string()) return parse_u64(v.get<std::string>());
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(std::string(key) +
                      " must be a nonnegative integer or hex string");
}

void load_config(const std::string& path, Settings& s) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in '" + path +
                          "': " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "dims") {
            if (value.is_string()) {
                s.dims = parse_dims(value.get<std::string>());
            } else {
                s.dims.m = value.at("m").get<std::uint32_t>();
                s.dims.n = value.at("n").get<std::uint32_t>();
                s.dims.d = value.at("d").get<std::uint32_t>();
            }
        } else if (key == "lanes") {
            s.lanes = value.get<std::uint32_t>();
        } else if (key == "seed") {
            s.seed = seed_from_json(value, "seed");
        } else if (key == "input_seed") {
            s.input_seed = seed_from_json(value, "input_seed");
        } else if (key == "trials") {
            s.trials = value.get<std::uint32_t>();
        } else if (key == "workers") {
            s.workers = value.get<unsigned>();
        } else if (key == "out_dir") {
            s.out_dir = value.get<std::string>();
        } else if (key == "precision") {
            s.precision = value.get<std::string>();
        } else if (key == "kernel") {
            s.kernel = value.get<std::string>();
        } else if (key == "field") {
            s.field = value.get<std::string>();
        } else if (key == "fault_kind") {
            s.fault_kind = value.get<std::string>();
        } else if (key == "modules") {
            s.modules = value.get<std::vector<std::string>>();
        } else if (key == "suite") {
            s.suite = value.get<bool>();
        } else if (key == "include_acc_flip") {
            s.include_acc_flip = value.get<bool>();
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

std::string seed_hex(std::uint64_t seed) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llx",
                  static_cast<unsigned long long>(seed));
    return buf;
}

std::string bin_string(std::uint32_t value, std::uint32_t width) {
    std::string out(width, '0');
    for (std::uint32_t i = 0; i < width; ++i)
        if (value >> (width - 1 - i) & 1u) out[i] = '1';
    return out;
}

// ---- codec ----------------------------------------------------------

int cmd_codec(const std::string& pattern, const std::string& fmt_name) {
    const FloatFormat& fmt = format(parse_precision(fmt_name));
    const auto bits = parse_hex(pattern, fmt);
    if (!bits)
        throw ConfigError("'" + pattern + "' is not a valid " +
                          std::string(precision_name(fmt.id)) + " pattern");
    const DecodedValue dec = decode(*bits, fmt);
    std::string value_token;
    if (dec.cls == ValueClass::Inf)
        value_token = fmt.sign_field(*bits) ? "-Inf" : "+Inf";
    else if (dec.cls == ValueClass::NaN)
        value_token = "NaN";
    else
        value_token = format_double(dec.value);
    std::cout << value_token << ' ' << value_class_name(dec.cls) << " s="
              << fmt.sign_field(*bits) << " e="
              << bin_string(fmt.exp_field(*bits), fmt.exp_bits) << " m="
              << bin_string(fmt.man_field(*bits), fmt.man_bits) << '\n';
    return 0;
}

// ---- trial ----------------------------------------------------------

struct TrialArgs {
    std::string precision = "fp32";
    std::string kernel = "matmul";
    std::string dims = "16x16x16";
    std::uint32_t lanes = 8;
    std::string seed = "0xC0FFEE";
    std::string fault_kind = "set";
    std::optional<std::string> site;
    std::uint32_t bit = 0;
    std::uint32_t cycle = 0;
    std::string strobes = "full";
    bool dump_golden = false;
    std::string out_dir = "out";
};

int cmd_trial(const TrialArgs& args) {
    KernelConfig cfg;
    cfg.kind = parse_kernel(args.kernel);
    cfg.precision = parse_precision(args.precision);
    cfg.dims = parse_dims(args.dims);
    cfg.lanes = args.lanes;
    cfg.seed = parse_u64(args.seed);
    cfg.validate();

    StrobeMode mode;
    const std::string strobes = lower(args.strobes);
    if (strobes == "full") mode = StrobeMode::Full;
    else if (strobes == "output") mode = StrobeMode::OutputOnly;
    else throw ConfigError("unknown strobe mode '" + args.strobes + "'");

    const GoldenTrace golden = run_golden(cfg);
    if (args.dump_golden) {
        const FloatFormat& in_fmt = format(cfg.in_precision());
        const FloatFormat& out_fmt = format(cfg.acc_precision());
        write_file(fs::path(args.out_dir) / "golden_a.csv",
                   matrix_to_csv(golden.inputs.a, in_fmt));
        write_file(fs::path(args.out_dir) / "golden_b.csv",
                   matrix_to_csv(golden.inputs.b, in_fmt));
        write_file(fs::path(args.out_dir) / "golden_c.csv",
                   matrix_to_csv(golden.output, out_fmt));
        std::cerr << "golden matrices written to " << args.out_dir << " ("
                  << golden.total_cycles << " cycles)\n";
    }

    std::optional<FaultSpec> fault;
    if (args.site) {
        const auto key = parse_site_id(*args.site);
        if (!key) throw ConfigError("unknown site id '" + *args.site + "'");
        FaultSpec spec;
        spec.kind = parse_fault_kind(args.fault_kind);
        spec.site = *key;
        spec.bit = args.bit;
        spec.cycle = args.cycle;
        fault = spec;
    }

    const TrialOutcome out = run_faulty(golden, fault, mode);

    ordered_json rec;
    if (fault) {
        rec["fault"] = {{"kind", fault_kind_name(fault->kind)},
                        {"site_id", site_id_string(fault->site)},
                        {"bit", fault->bit},
                        {"cycle", fault->cycle}};
    } else {
        rec["fault"] = nullptr;
    }
    rec["class"] = outcome_class_name(out.cls);
    rec["sdc"] = out.sdc;
    if (out.first_divergence_cycle)
        rec["first_divergence_cycle"] = *out.first_divergence_cycle;
    else
        rec["first_divergence_cycle"] = nullptr;
    if (out.cls == OutcomeClass::FS) {
        rec["K"] = nullptr;
        rec["rmse"] = nullptr;
    } else if (out.sdc) {
        const SeverityRecord sev = severity(
            golden.output, out.faulty_output, format(cfg.acc_precision()));
        rec["K"] = sev.k;
        if (sev.rmse) rec["rmse"] = *sev.rmse;
        else rec["rmse"] = nullptr;
    } else {
        rec["K"] = 0;
        rec["rmse"] = nullptr;
    }
    std::cout << rec.dump(2) << '\n';
    return 0;
}

// ---- campaign plumbing ----------------------------------------------

KernelConfig base_kernel(const Settings& s) {
    KernelConfig cfg;
    cfg.dims = s.dims;
    cfg.lanes = s.lanes;
    cfg.seed = s.input_seed.value_or(s.seed);
    return cfg;
}

ordered_json manifest_group(const GroupKey& key, const std::string& records,
                            const std::string& scope) {
    return {{"records", records},   {"precision", key.precision},
            {"kernel", key.kernel}, {"target", key.target},
            {"fault_kind", key.fault_kind}, {"scope", scope}};
}

void print_results(const std::vector<CampaignResult>& results) {
    for (const CampaignResult& r : results) {
        std::cout << r.key.precision << ' ' << r.key.kernel << ' '
                  << r.key.target << " [" << r.key.fault_kind
                  << "]: trials=" << r.total() << " masked=" << r.masked
                  << " fs=" << r.fs << " fd=" << r.fd << " sdc=" << r.sdc;
        if (r.rmse_stats)
            std::cout << " rmse_mean=" << format_double(r.rmse_stats->mean);
        std::cout << '\n';
    }
}

// ---- sdc ------------------------------------------------------------

int cmd_sdc(const Settings& s) {
    const std::uint32_t trials = s.trials.value_or(1000);
    auto suite = default_sdc_suite(base_kernel(s), trials, s.seed);

    if (s.precision) {
        const Precision p = parse_precision(*s.precision);
        std::erase_if(suite, [&](const SdcCampaignConfig& c) {
            return c.kernel.precision != p;
        });
    }
    if (s.kernel) {
        const KernelKind k = parse_kernel(*s.kernel);
        std::erase_if(suite, [&](const SdcCampaignConfig& c) {
            return c.kernel.kind != k;
        });
    }
    if (s.field) {
        const FieldKind f = parse_field(*s.field);
        std::erase_if(suite, [&](const SdcCampaignConfig& c) {
            return c.field != f;
        });
    }
    if (suite.empty())
        throw ConfigError("no campaigns match the requested filters");

    std::vector<CampaignResult> results;
    ordered_json groups = ordered_json::array();
    std::vector<std::string> workload_labels;
    for (SdcCampaignConfig& cfg : suite) {
        cfg.include_acc_flip = s.include_acc_flip;
        const auto records = run_sdc_campaign(cfg, s.workers);
        const GroupKey key{
            std::string(precision_name(cfg.kernel.precision)),
            std::string(kernel_kind_name(cfg.kernel.kind)),
            std::string(field_name(cfg.field)),
            std::string(fault_kind_name(FaultKind::SET))};
        const std::string records_name =
            "records_" + cfg.kernel.workload_label() + '_' + key.target +
            ".csv";
        write_file(fs::path(s.out_dir) / records_name,
                   emit_records_csv(records));
        auto grouped = aggregate(records, [&](const TrialRecord&) {
            return key;
        });
        results.insert(results.end(), grouped.begin(), grouped.end());
        groups.push_back(manifest_group(key, records_name, "field"));
        if (workload_labels.empty() ||
            workload_labels.back() != cfg.kernel.workload_label())
            workload_labels.push_back(cfg.kernel.workload_label());
    }

    const std::string stem =
        "sdc_scatter_" +
        (workload_labels.size() == 1 ? workload_labels.front()
                                     : std::string("suite")) +
        '_' + seed_hex(s.seed);
    write_file(fs::path(s.out_dir) / "sdc_results.csv",
               emit_results_csv(results));
    write_file(fs::path(s.out_dir) / "sdc_results.json",
               emit_results_json(results));
    write_file(fs::path(s.out_dir) / (stem + ".csv"),
               emit_scatter_csv(results));
    write_file(fs::path(s.out_dir) / (stem + ".svg"),
               emit_scatter_svg(results, "SDC severity by precision and field"));
    ordered_json manifest = {{"kind", "sdc"},
                             {"scatter_stem", stem},
                             {"groups", groups}};
    write_file(fs::path(s.out_dir) / "manifest.json",
               manifest.dump(2) + '\n');

    print_results(results);
    std::cout << "wrote " << results.size() << " result groups to "
              << s.out_dir << '\n';
    return 0;
}

// ---- modules --------------------------------------------------------

GroupSelector module_selector(const GroupKey& base) {
    return [base](const TrialRecord& rec) {
        GroupKey key = base;
        key.target = std::string(module_name(rec.fault.site.module));
        return key;
    };
}

int cmd_modules(const Settings& s) {
    std::vector<ModuleId> module_filter;
    for (const std::string& name : s.modules) {
        const auto m = module_from_name(lower(name));
        if (!m) throw ConfigError("unknown module '" + name + "'");
        module_filter.push_back(*m);
    }

    std::vector<ModuleCampaignConfig> campaigns;
    if (s.suite) {
        campaigns =
            default_module_suite(base_kernel(s), s.trials.value_or(1000),
                                 s.seed);
        for (ModuleCampaignConfig& cfg : campaigns)
            cfg.modules = module_filter;
    } else {
        if (!s.fault_kind)
            throw ConfigError("--fault-kind is required (set or seu)");
        ModuleCampaignConfig cfg;
        cfg.kernel = base_kernel(s);
        cfg.kernel.precision =
            s.precision ? parse_precision(*s.precision) : Precision::FP32;
        cfg.kernel.kind =
            s.kernel ? parse_kernel(*s.kernel) : KernelKind::MatMul;
        cfg.fault_kind = parse_fault_kind(*s.fault_kind);
        cfg.trials = s.trials.value_or(1000);
        cfg.campaign_seed = s.seed;
        cfg.modules = module_filter;
        campaigns.push_back(cfg);
    }
    if (s.suite && s.fault_kind) {
        const FaultKind k = parse_fault_kind(*s.fault_kind);
        std::erase_if(campaigns, [&](const ModuleCampaignConfig& c) {
            return c.fault_kind != k;
        });
    }

    std::vector<CampaignResult> results;
    ordered_json groups = ordered_json::array();
    for (const ModuleCampaignConfig& cfg : campaigns) {
        const auto output = run_module_campaign(cfg, s.workers);
        const GroupKey base{
            std::string(precision_name(cfg.kernel.precision)),
            std::string(kernel_kind_name(cfg.kernel.kind)), "",
            std::string(fault_kind_name(cfg.fault_kind))};
        const std::string records_name =
            "records_" + cfg.kernel.workload_label() + '_' +
            std::string(fault_kind_name(cfg.fault_kind)) + ".csv";
        write_file(fs::path(s.out_dir) / records_name,
                   emit_records_csv(output.records));
        auto grouped = aggregate(output.records, module_selector(base));
        results.insert(results.end(), grouped.begin(), grouped.end());
        groups.push_back(manifest_group(base, records_name, "module"));
    }

    write_file(fs::path(s.out_dir) / "module_results.csv",
               emit_results_csv(results));
    write_file(fs::path(s.out_dir) / "module_results.json",
               emit_results_json(results));
    ordered_json manifest = {{"kind", "modules"}, {"groups", groups}};
    write_file(fs::path(s.out_dir) / "module_manifest.json",
               manifest.dump(2) + '\n');

    print_results(results);
    std::cout << "wrote " << results.size() << " result groups to "
              << s.out_dir << '\n';
    return 0;
}

// ---- report ---------------------------------------------------------

int cmd_report(const std::string& manifest_path, const Settings& s) {
    std::ifstream in(manifest_path);
    if (!in)
        throw ConfigError("cannot open manifest '" + manifest_path + "'");
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest parse error: ") + e.what());
    }
    const std::string kind = manifest.at("kind").get<std::string>();
    if (kind != "sdc" && kind != "modules")
        throw ConfigError("manifest kind must be 'sdc' or 'modules'");
    const fs::path base_dir = fs::path(manifest_path).parent_path();

    std::vector<CampaignResult> results;
    for (const json& g : manifest.at("groups")) {
        const fs::path records_path =
            base_dir / g.at("records").get<std::string>();
        std::ifstream rec_in(records_path);
        if (!rec_in)
            throw ConfigError("cannot open records file '" +
                              records_path.string() + "'");
        std::string text((std::istreambuf_iterator<char>(rec_in)),
                         std::istreambuf_iterator<char>());
        const auto records = parse_records_csv(text);
        const GroupKey key{g.at("precision").get<std::string>(),
                           g.at("kernel").get<std::string>(),
                           g.at("target").get<std::string>(),
                           g.at("fault_kind").get<std::string>()};
        const std::string scope = g.at("scope").get<std::string>();
        GroupSelector select;
        if (scope == "module") select = module_selector(key);
        else select = [key](const TrialRecord&) { return key; };
        auto grouped = aggregate(records, select);
        results.insert(results.end(), grouped.begin(), grouped.end());
    }

    const std::string prefix = kind == "sdc" ? "sdc" : "module";
    write_file(fs::path(s.out_dir) / (prefix + "_results.csv"),
               emit_results_csv(results));
    write_file(fs::path(s.out_dir) / (prefix + "_results.json"),
               emit_results_json(results));
    if (kind == "sdc" && manifest.contains("scatter_stem")) {
        const std::string stem =
            manifest.at("scatter_stem").get<std::string>();
        write_file(fs::path(s.out_dir) / (stem + ".csv"),
                   emit_scatter_csv(results));
        write_file(fs::path(s.out_dir) / (stem + ".svg"),
                   emit_scatter_svg(results,
                                    "SDC severity by precision and field"));
    }
    print_results(results);
    return 0;
}

// ---- argument wiring --------------------------------------------------

struct SettingsCli {
    std::optional<std::string> config;
    std::optional<std::string> dims;
    std::optional<std::uint32_t> lanes;
    std::optional<std::string> seed;
    std::optional<std::string> input_seed;
    std::optional<std::uint32_t> trials;
    std::optional<unsigned> workers;
    std::optional<std::string> out_dir;
    std::optional<std::string> precision;
    std::optional<std::string> kernel;
    std::optional<std::string> field;
    std::optional<std::string> fault_kind;
    std::vector<std::string> modules;
    bool suite = false;
    bool include_acc_flip = false;
};

void add_settings_flags(CLI::App* cmd, SettingsCli& cli, bool campaign) {
    cmd->add_option("--config", cli.config,
                    "JSON config file; flags override its values");
    cmd->add_option("--dims", cli.dims, "matrix dims MxNxD (default 16x16x16)");
    cmd->add_option("--lanes", cli.lanes, "VFU lane count (default 8)");
    cmd->add_option("--seed", cli.seed,
                    "campaign master seed, decimal or 0x hex "
                    "(default 0xC0FFEE, never wall clock)");
    cmd->add_option("--input-seed", cli.input_seed,
                    "input generation seed (defaults to --seed)");
    cmd->add_option("--trials", cli.trials, "trial count");
    cmd->add_option("--workers", cli.workers,
                    "worker threads, 0 = hardware (outputs never depend "
                    "on this)");
    cmd->add_option("--out-dir", cli.out_dir, "output directory (default out)");
    if (campaign) {
        cmd->add_option("--precision", cli.precision,
                        "fp32, fp16, bp16 or fp8");
        cmd->add_option("--kernel", cli.kernel, "matmul or widening_matmul");
    }
}

Settings merge_settings(const SettingsCli& cli) {
    Settings s;
    if (cli.config) load_config(*cli.config, s);
    if (cli.dims) s.dims = parse_dims(*cli.dims);
    if (cli.lanes) s.lanes = *cli.lanes;
    if (cli.seed) s.seed = parse_u64(*cli.seed);
    if (cli.input_seed) s.input_seed = parse_u64(*cli.input_seed);
    if (cli.trials) s.trials = *cli.trials;
    if (cli.workers) s.workers = *cli.workers;
    if (cli.out_dir) s.out_dir = *cli.out_dir;
    if (cli.precision) s.precision = cli.precision;
    if (cli.kernel) s.kernel = cli.kernel;
    if (cli.field) s.field = cli.field;
    if (cli.fault_kind) s.fault_kind = cli.fault_kind;
    if (!cli.modules.empty()) s.modules = cli.modules;
    if (cli.suite) s.suite = true;
    if (cli.include_acc_flip) s.include_acc_flip = true;
    return s;
}

int run_app(int argc, char** argv) {
    CLI::App app{"deterministic fault-injection campaigns on a vector "
                 "matmul machine model (default seed 0xC0FFEE)"};
    app.require_subcommand(1);

    auto* codec = app.add_subcommand("codec", "decode a bit pattern");
    std::string codec_pattern, codec_fmt;
    codec->add_option("pattern", codec_pattern, "hex pattern, e.g. 0x3c")
        ->required();
    codec->add_option("format", codec_fmt, "fp32, fp16, bp16 or fp8")
        ->required();

    auto* trial = app.add_subcommand("trial", "run a single injection");
    TrialArgs trial_args;
    trial->add_option("--precision", trial_args.precision,
                      "fp32, fp16, bp16 or fp8");
    trial->add_option("--kernel", trial_args.kernel,
                      "matmul or widening_matmul");
    trial->add_option("--dims", trial_args.dims, "matrix dims MxNxD");
    trial->add_option("--lanes", trial_args.lanes, "VFU lane count");
    trial->add_option("--seed", trial_args.seed, "input generation seed");
    trial->add_option("--fault-kind", trial_args.fault_kind, "set or seu");
    trial->add_option("--site", trial_args.site,
                      "fault site id, e.g. vfu.lane3.operand_a; omit for "
                      "a fault-free run");
    trial->add_option("--bit", trial_args.bit, "bit index within the site");
    trial->add_option("--cycle", trial_args.cycle, "injection cycle");
    trial->add_option("--strobes", trial_args.strobes,
                      "full or output (comparison mode)");
    trial->add_flag("--dump-golden", trial_args.dump_golden,
                    "write golden input/output matrices as CSV");
    trial->add_option("--out-dir", trial_args.out_dir, "output directory");

    auto* sdc = app.add_subcommand(
        "sdc", "operand-flip campaign suite (6 workloads x 3 fields)");
    SettingsCli sdc_cli;
    add_settings_flags(sdc, sdc_cli, true);
    sdc->add_option("--field", sdc_cli.field,
                    "restrict to one field: sign, exponent or mantissa");
    sdc->add_flag("--include-acc-flip", sdc_cli.include_acc_flip,
                  "also sample the accumulator input path");

    auto* modules = app.add_subcommand(
        "modules", "whole-machine SET/SEU campaign over registry sites");
    SettingsCli mod_cli;
    add_settings_flags(modules, mod_cli, true);
    modules->add_option("--fault-kind", mod_cli.fault_kind, "set or seu");
    modules
        ->add_option("--modules", mod_cli.modules,
                     "restrict to these modules (comma separated)")
        ->delimiter(',');
    modules->add_flag("--suite", mod_cli.suite,
                      "split the trial budget over 6 workloads x 2 fault "
                      "kinds");

    auto* report = app.add_subcommand(
        "report", "re-aggregate stored trial records");
    SettingsCli report_cli;
    std::string manifest_path;
    report->add_option("--manifest", manifest_path,
                       "manifest.json written by sdc or modules")
        ->required();
    report->add_option("--out-dir", report_cli.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*codec) return cmd_codec(codec_pattern, codec_fmt);
    if (*trial) return cmd_trial(trial_args);
    if (*sdc) return cmd_sdc(merge_settings(sdc_cli));
    if (*modules) return cmd_modules(merge_settings(mod_cli));
    if (*report) return cmd_report(manifest_path, merge_settings(report_cli));
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const vecfi::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
