// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#include "vecfi/machine.hpp"

#include <array>
#include <cassert>
#include <charconv>
#include <cstring>

#include "vecfi/errors.hpp"

namespace vecfi {

namespace {

constexpr std::uint32_t kVrfBytes = 1024; // 32 registers x 32 B
constexpr std::uint32_t kVrfBits = kVrfBytes * 8;
constexpr std::uint32_t kCtrlBits = 32;
constexpr std::uint32_t kSnitchBits = 1024;
constexpr std::uint32_t kICacheBits = 32768;

} // namespace

std::string_view module_name(ModuleId m) {
    switch (m) {
    case ModuleId::TCDM: return "tcdm";
    case ModuleId::VRF: return "vrf";
    case ModuleId::VFU: return "vfu";
    case ModuleId::VLSU: return "vlsu";
    case ModuleId::VSLDU: return "vsldu";
    case ModuleId::Controller: return "controller";
    case ModuleId::Snitch: return "snitch";
    case ModuleId::ICache: return "icache";
    }
    return "?";
}

std::optional<ModuleId> module_from_name(std::string_view name) {
    for (ModuleId m : {ModuleId::TCDM, ModuleId::VRF, ModuleId::VFU,
                       ModuleId::VLSU, ModuleId::VSLDU, ModuleId::Controller,
                       ModuleId::Snitch, ModuleId::ICache}) {
        if (name == module_name(m)) return m;
    }
    return std::nullopt;
}

std::string_view signal_class_name(SignalClass c) {
    switch (c) {
    case SignalClass::Data: return "data";
    case SignalClass::Handshake: return "handshake";
    case SignalClass::State: return "state";
    }
    return "?";
}

std::string_view fault_kind_name(FaultKind k) {
    return k == FaultKind::SEU ? "seu" : "set";
}

std::optional<FaultKind> fault_kind_from_name(std::string_view name) {
    if (name == "seu") return FaultKind::SEU;
    if (name == "set") return FaultKind::SET;
    return std::nullopt;
}

std::string_view outcome_class_name(OutcomeClass c) {
    switch (c) {
    case OutcomeClass::Masked: return "masked";
    case OutcomeClass::FS: return "fs";
    case OutcomeClass::FD: return "fd";
    }
    return "?";
}

std::string site_id_string(const SiteKey& key) {
    std::string id(module_name(key.module));
    if (key.module == ModuleId::VFU) {
        id += ".lane" + std::to_string(key.lane);
        switch (key.role) {
        case SiteRole::OperandA: return id + ".operand_a";
        case SiteRole::OperandB: return id + ".operand_b";
        case SiteRole::Result: return id + ".result";
        case SiteRole::AccIn: return id + ".acc_in";
        case SiteRole::Valid: return id + ".valid";
        case SiteRole::Ready: return id + ".ready";
        default: return id + ".state";
        }
    }
    switch (key.role) {
    case SiteRole::State:
        return id + (key.module == ModuleId::Controller ? ".seq" : ".state");
    case SiteRole::Data: return id + ".data";
    case SiteRole::Valid: return id + ".valid";
    case SiteRole::Ready: return id + ".ready";
    default: return id;
    }
}

std::optional<SiteKey> parse_site_id(std::string_view id) {
    const auto dot = id.find('.');
    if (dot == std::string_view::npos) return std::nullopt;
    const auto mod = module_from_name(id.substr(0, dot));
    if (!mod) return std::nullopt;
    std::string_view rest = id.substr(dot + 1);

    if (*mod == ModuleId::VFU) {
        if (rest.substr(0, 4) == "lane") {
            rest.remove_prefix(4);
            const auto dot2 = rest.find('.');
            if (dot2 == std::string_view::npos) return std::nullopt;
            std::uint16_t lane = 0;
            const auto ls = rest.substr(0, dot2);
            const auto [p, ec] =
                std::from_chars(ls.data(), ls.data() + ls.size(), lane);
            if (ec != std::errc{} || p != ls.data() + ls.size())
                return std::nullopt;
            rest.remove_prefix(dot2 + 1);
            SiteRole role;
            if (rest == "operand_a") role = SiteRole::OperandA;
            else if (rest == "operand_b") role = SiteRole::OperandB;
            else if (rest == "result") role = SiteRole::Result;
            else if (rest == "acc_in") role = SiteRole::AccIn;
            else if (rest == "valid") return SiteKey{*mod, SiteRole::Valid, lane};
            else if (rest == "ready") return SiteKey{*mod, SiteRole::Ready, lane};
            else return std::nullopt;
            return SiteKey{*mod, role, lane};
        }
        return std::nullopt;
    }
    if (rest == "state" &&
        (*mod == ModuleId::TCDM || *mod == ModuleId::VRF ||
         *mod == ModuleId::Snitch || *mod == ModuleId::ICache))
        return SiteKey{*mod, SiteRole::State, 0};
    if (rest == "seq" && *mod == ModuleId::Controller)
        return SiteKey{*mod, SiteRole::State, 0};
    if (*mod == ModuleId::VLSU || *mod == ModuleId::VSLDU) {
        if (rest == "data") return SiteKey{*mod, SiteRole::Data, 0};
        if (*mod == ModuleId::VLSU && rest == "valid")
            return SiteKey{*mod, SiteRole::Valid, 0};
        if (*mod == ModuleId::VLSU && rest == "ready")
            return SiteKey{*mod, SiteRole::Ready, 0};
    }
    return std::nullopt;
}

namespace {

// Byte-level little-endian packing of element words.
BitWord load_le(const std::uint8_t* p, std::uint32_t nbytes) {
    BitWord w = 0;
    for (std::uint32_t i = 0; i < nbytes; ++i)
        w |= static_cast<BitWord>(p[i]) << (8 * i);
    return w;
}

void store_le(std::uint8_t* p, BitWord w, std::uint32_t nbytes) {
    for (std::uint32_t i = 0; i < nbytes; ++i)
        p[i] = static_cast<std::uint8_t>(w >> (8 * i));
}

struct Geometry {
    FloatFormat in_fmt;
    FloatFormat acc_fmt;
    std::uint32_t m, n, d, lanes;
    std::uint32_t elems;
    std::uint32_t groups;
    std::uint32_t in_bytes, out_bytes;
    std::uint32_t slice_bytes;
    std::uint32_t result_bytes;
    std::uint32_t op_slots;
    std::uint32_t res_base;
    std::uint32_t res_slots;
    std::uint32_t a_base, b_base, c_base;
    std::uint32_t tcdm_slots;
    std::uint32_t frame_stride;

    explicit Geometry(const KernelConfig& cfg)
        : in_fmt(format(cfg.in_precision())),
          acc_fmt(format(cfg.acc_precision())),
          m(cfg.dims.m), n(cfg.dims.n), d(cfg.dims.d), lanes(cfg.lanes),
          elems(m * n), groups(group_count(cfg)),
          in_bytes(in_fmt.total_bits / 8), out_bytes(acc_fmt.total_bits / 8),
          slice_bytes(2 * lanes * in_bytes), result_bytes(lanes * out_bytes) {
        if (slice_bytes == 0 || 2 * result_bytes + 2 * slice_bytes > kVrfBytes)
            throw ConfigError("lane count exceeds register file capacity");
        op_slots = (kVrfBytes - 2 * result_bytes) / slice_bytes;
        res_base = op_slots * slice_bytes;
        res_slots = (kVrfBytes - res_base) / result_bytes;
        a_base = 0;
        b_base = m * d;
        c_base = m * d + d * n;
        tcdm_slots = m * d + d * n + elems;
        frame_stride = slice_bytes + lanes * (2 * in_bytes + out_bytes);
    }

    std::uint32_t slice_off(std::uint32_t slice) const {
        return (slice % op_slots) * slice_bytes;
    }
    std::uint32_t res_off(std::uint32_t group) const {
        return res_base + (group % res_slots) * result_bytes;
    }
};

struct MicroOp {
    enum class Xfer : std::uint8_t { None, Load, Store };
    Xfer xfer = Xfer::None;
    std::uint32_t xfer_arg = 0; // slice index for Load, group for Store
    std::int32_t mac_step = -1;
};

std::vector<MicroOp> build_program(const Geometry& g) {
    std::vector<MicroOp> prog;
    prog.reserve(static_cast<std::size_t>(g.groups) * (g.d + 2));
    for (std::uint32_t grp = 0; grp < g.groups; ++grp) {
        const std::uint32_t s0 = grp * g.d;
        prog.push_back({MicroOp::Xfer::Load, s0, -1});
        for (std::uint32_t k = 1; k < g.d; ++k)
            prog.push_back({MicroOp::Xfer::Load, s0 + k,
                            static_cast<std::int32_t>(s0 + k - 1)});
        prog.push_back({MicroOp::Xfer::None, 0,
                        static_cast<std::int32_t>(s0 + g.d - 1)});
        prog.push_back({MicroOp::Xfer::Store, grp, -1});
    }
    return prog;
}

struct Machine {
    const Geometry& g;
    const std::vector<MicroOp>& prog;
    const FaultSpec* fault;
    StrobeMode mode;
    bool recording; // golden run fills the log instead of comparing

    // state
    std::vector<BitWord> tcdm;
    std::array<std::uint8_t, kVrfBytes> vrf{};
    std::vector<BitWord> acc;
    std::vector<BitWord> port_a, port_b, port_res;
    std::vector<std::uint8_t> vlsu_port;
    std::uint32_t sc = 0;
    std::uint64_t elapsed = 0;
    bool vlsu_poison = false;

    // observation
    bool stalled = false;
    bool handshake_violation = false;
    bool data_mismatch = false;
    bool deadlock = false;
    std::optional<std::uint32_t> first_div;
    std::vector<std::uint8_t> frame;
    std::vector<std::uint8_t>* log = nullptr;       // golden recording
    const std::vector<std::uint8_t>* ref = nullptr; // golden comparison
    std::uint32_t ref_cycles = 0;

    Machine(const Geometry& geom, const std::vector<MicroOp>& program,
            const Inputs& inputs)
        : g(geom), prog(program), fault(nullptr), mode(StrobeMode::Full),
          recording(false), tcdm(geom.tcdm_slots, 0), acc(geom.lanes, 0),
          port_a(geom.lanes, 0), port_b(geom.lanes, 0),
          port_res(geom.lanes, 0), vlsu_port(geom.slice_bytes, 0),
          frame(geom.frame_stride, 0) {
        const BitWord in_mask = g.in_fmt.word_mask();
        for (std::uint32_t r = 0; r < g.m; ++r)
            for (std::uint32_t c = 0; c < g.d; ++c)
                tcdm[g.a_base + r * g.d + c] = inputs.a.at(r, c) & in_mask;
        for (std::uint32_t r = 0; r < g.d; ++r)
            for (std::uint32_t c = 0; c < g.n; ++c)
                tcdm[g.b_base + r * g.n + c] = inputs.b.at(r, c) & in_mask;
    }

    std::uint32_t now() const { return static_cast<std::uint32_t>(elapsed); }

    bool set_here(SiteRole role, ModuleId mod, std::uint16_t lane) const {
        return fault && fault->kind == FaultKind::SET &&
               fault->cycle == now() && fault->site.role == role &&
               fault->site.module == mod && fault->site.lane == lane;
    }

    // Handshake suppression on an active transfer drops it and wedges the
    // pipeline; the watchdog then reports deadlock.
    bool vlsu_drop() const {
        return set_here(SiteRole::Valid, ModuleId::VLSU, 0) ||
               set_here(SiteRole::Ready, ModuleId::VLSU, 0);
    }
    bool lane_drop(std::uint16_t lane) const {
        return set_here(SiteRole::Valid, ModuleId::VFU, lane) ||
               set_here(SiteRole::Ready, ModuleId::VFU, lane);
    }

    void stall() {
        stalled = true;
        handshake_violation = true;
        if (!first_div) first_div = now();
    }

    void frame_clear() { std::memset(frame.data(), 0, frame.size()); }
    std::uint8_t* frame_vlsu() { return frame.data(); }
    std::uint8_t* frame_lane(std::uint32_t lane) {
        return frame.data() + g.slice_bytes + lane * (2 * g.in_bytes + g.out_bytes);
    }

    void do_load(std::uint32_t slice) {
        const std::uint32_t grp = slice / g.d;
        const std::uint32_t step = slice % g.d;
        std::uint8_t* moved = frame_vlsu();
        const BitWord in_mask = g.in_fmt.word_mask();
        for (std::uint32_t l = 0; l < g.lanes; ++l) {
            const std::uint32_t idx = grp * g.lanes + l;
            BitWord aw = 0, bw = 0;
            if (idx < g.elems) {
                const std::uint32_t row = idx / g.n;
                const std::uint32_t col = idx % g.n;
                aw = tcdm[g.a_base + row * g.d + step] & in_mask;
                bw = tcdm[g.b_base + step * g.n + col] & in_mask;
            }
            store_le(moved + l * 2 * g.in_bytes, aw, g.in_bytes);
            store_le(moved + l * 2 * g.in_bytes + g.in_bytes, bw, g.in_bytes);
        }
        if (vlsu_poison) {
            // A spurious handshake made the consumer take the stale port
            // value; the genuine data for this transfer is lost.
            std::memcpy(moved, vlsu_port.data(), g.slice_bytes);
            vlsu_poison = false;
        }
        if (set_here(SiteRole::Data, ModuleId::VLSU, 0) &&
            fault->bit < g.slice_bytes * 8)
            moved[fault->bit / 8] ^= std::uint8_t(1u << (fault->bit % 8));
        std::memcpy(vlsu_port.data(), moved, g.slice_bytes);
        std::memcpy(vrf.data() + g.slice_off(slice), moved, g.slice_bytes);
    }

    void do_store(std::uint32_t grp) {
        std::uint8_t* moved = frame_vlsu();
        std::memcpy(moved, vrf.data() + g.res_off(grp), g.result_bytes);
        if (vlsu_poison) {
            std::memcpy(moved, vlsu_port.data(), g.result_bytes);
            vlsu_poison = false;
        }
        if (set_here(SiteRole::Data, ModuleId::VLSU, 0) &&
            fault->bit < g.result_bytes * 8)
            moved[fault->bit / 8] ^= std::uint8_t(1u << (fault->bit % 8));
        std::memcpy(vlsu_port.data(), moved, g.result_bytes);
        const BitWord out_mask = g.acc_fmt.word_mask();
        for (std::uint32_t l = 0; l < g.lanes; ++l) {
            const std::uint32_t idx = grp * g.lanes + l;
            if (idx >= g.elems) break;
            tcdm[g.c_base + idx] =
                load_le(moved + l * g.out_bytes, g.out_bytes) & out_mask;
        }
    }

    void stray_mac(std::uint32_t lane) {
        const BitWord prod =
            mul_round(port_a[lane], port_b[lane], g.in_fmt, g.acc_fmt);
        acc[lane] = add_round(acc[lane], prod, g.acc_fmt);
        std::uint8_t* fl = frame_lane(lane);
        store_le(fl, port_a[lane], g.in_bytes);
        store_le(fl + g.in_bytes, port_b[lane], g.in_bytes);
    }

    // Returns false if the pipeline wedged this cycle.
    bool do_mac(std::uint32_t step) {
        const std::uint32_t grp = step / g.d;
        const std::uint32_t dd = step % g.d;
        for (std::uint16_t l = 0; l < g.lanes; ++l) {
            const std::uint32_t idx = grp * g.lanes + l;
            if (idx >= g.elems) {
                if (set_here(SiteRole::Valid, ModuleId::VFU, l)) stray_mac(l);
                continue;
            }
            if (lane_drop(l)) {
                stall();
                return false;
            }
            const std::uint8_t* src =
                vrf.data() + g.slice_off(step) + l * 2 * g.in_bytes;
            port_a[l] = load_le(src, g.in_bytes);
            port_b[l] = load_le(src + g.in_bytes, g.in_bytes);
            BitWord ea = port_a[l];
            BitWord eb = port_b[l];
            if (set_here(SiteRole::OperandA, ModuleId::VFU, l))
                ea = flip_bit(ea, fault->bit);
            if (set_here(SiteRole::OperandB, ModuleId::VFU, l))
                eb = flip_bit(eb, fault->bit);
            if (dd == 0) acc[l] = 0; // +0 in the accumulation format
            BitWord acc_in = acc[l];
            if (set_here(SiteRole::AccIn, ModuleId::VFU, l))
                acc_in = flip_bit(acc_in, fault->bit);
            acc[l] = add_round(acc_in, mul_round(ea, eb, g.in_fmt, g.acc_fmt),
                               g.acc_fmt);
            std::uint8_t* fl = frame_lane(l);
            store_le(fl, ea, g.in_bytes);
            store_le(fl + g.in_bytes, eb, g.in_bytes);
            if (dd == g.d - 1) {
                port_res[l] = acc[l];
                BitWord er = port_res[l];
                if (set_here(SiteRole::Result, ModuleId::VFU, l))
                    er = flip_bit(er, fault->bit);
                store_le(vrf.data() + g.res_off(grp) + l * g.out_bytes, er,
                         g.out_bytes);
                store_le(fl + 2 * g.in_bytes, er, g.out_bytes);
            }
        }
        return true;
    }

    void apply_seu() {
        const std::uint32_t bit = fault->bit;
        switch (fault->site.module) {
        case ModuleId::TCDM: {
            const std::uint32_t w = g.acc_fmt.total_bits;
            tcdm[bit / w] ^= BitWord{1} << (bit % w);
            break;
        }
        case ModuleId::VRF:
            vrf[bit / 8] ^= std::uint8_t(1u << (bit % 8));
            break;
        case ModuleId::Controller:
            sc ^= 1u << bit;
            break;
        default:
            break; // placeholder modules hold no modeled state
        }
    }

    void observe_frame() {
        if (recording) {
            log->insert(log->end(), frame.begin(), frame.end());
            return;
        }
        if (mode != StrobeMode::Full || data_mismatch) return;
        const std::uint32_t t = now();
        bool differ;
        if (t < ref_cycles) {
            differ = std::memcmp(frame.data(), ref->data() +
                                 std::size_t(t) * g.frame_stride,
                                 g.frame_stride) != 0;
        } else {
            // The reference machine has already finished; any port
            // activity past its end is divergence.
            differ = false;
            for (std::uint8_t byte : frame)
                if (byte) { differ = true; break; }
        }
        if (differ) {
            data_mismatch = true;
            if (!first_div) first_div = t;
        }
    }

    void run(std::uint64_t golden_cycles) {
        while (true) {
            if (detect_deadlock(elapsed, golden_cycles)) {
                deadlock = true;
                break;
            }
            if (stalled) {
                ++elapsed;
                continue;
            }
            if (fault && fault->kind == FaultKind::SEU &&
                fault->cycle == now())
                apply_seu();
            if (sc >= prog.size()) break;
            const MicroOp& op = prog[sc];
            frame_clear();
            if (op.xfer == MicroOp::Xfer::Load ||
                op.xfer == MicroOp::Xfer::Store) {
                if (vlsu_drop()) {
                    stall();
                    ++elapsed;
                    continue;
                }
                if (op.xfer == MicroOp::Xfer::Load) do_load(op.xfer_arg);
                else do_store(op.xfer_arg);
            } else if (set_here(SiteRole::Valid, ModuleId::VLSU, 0)) {
                // Spurious valid while idle: the consumer will latch the
                // stale port contents in place of its next real transfer.
                vlsu_poison = true;
            }
            if (op.mac_step >= 0) {
                if (!do_mac(static_cast<std::uint32_t>(op.mac_step))) {
                    ++elapsed;
                    continue;
                }
            } else {
                for (std::uint16_t l = 0; l < g.lanes; ++l)
                    if (set_here(SiteRole::Valid, ModuleId::VFU, l))
                        stray_mac(l);
            }
            observe_frame();
            ++sc;
            ++elapsed;
        }
    }

    BitMatrix output() const {
        BitMatrix out(g.m, g.n);
        for (std::uint32_t i = 0; i < g.elems; ++i)
            out.words[i] = tcdm[g.c_base + i];
        return out;
    }
};

void validate_fault(const FaultSpec& f, const KernelConfig& cfg,
                    std::uint32_t total_cycles) {
    if (f.cycle >= total_cycles)
        throw ConfigError("fault cycle " + std::to_string(f.cycle) +
                          " is outside the run of " +
                          std::to_string(total_cycles) + " cycles");
    if (f.site.role == SiteRole::AccIn) {
        if (f.site.module != ModuleId::VFU || f.kind != FaultKind::SET)
            throw ConfigError("acc_in accepts SET faults on vfu lanes only");
        if (f.site.lane >= cfg.lanes)
            throw ConfigError("lane index out of range");
        if (f.bit >= format(cfg.acc_precision()).total_bits)
            throw ConfigError("bit index out of range for acc_in");
        return;
    }
    const auto registry = site_registry(cfg);
    const FaultSite* site = nullptr;
    for (const FaultSite& s : registry) {
        if (s.key == f.site) {
            site = &s;
            break;
        }
    }
    if (!site) throw ConfigError("unknown fault site");
    if (f.kind == FaultKind::SEU && site->signal != SignalClass::State)
        throw ConfigError("seu faults target state sites only; " + site->id +
                          " is a " + std::string(signal_class_name(site->signal)) +
                          " site");
    if (f.kind == FaultKind::SET && site->signal == SignalClass::State)
        throw ConfigError("set faults target data or handshake sites; " +
                          site->id + " is a state site");
    if (f.bit >= site->width)
        throw ConfigError("bit index " + std::to_string(f.bit) +
                          " out of range for " + site->id + " (width " +
                          std::to_string(site->width) + ")");
}

} // namespace

std::vector<FaultSite> site_registry(const KernelConfig& cfg) {
    cfg.validate();
    const Geometry g(cfg);
    std::vector<FaultSite> sites;
    auto add = [&](SiteKey key, SignalClass sig, std::uint32_t width) {
        sites.push_back({key, sig, width, site_id_string(key)});
    };
    add({ModuleId::TCDM, SiteRole::State, 0}, SignalClass::State,
        g.tcdm_slots * g.acc_fmt.total_bits);
    add({ModuleId::VRF, SiteRole::State, 0}, SignalClass::State, kVrfBits);
    for (std::uint16_t l = 0; l < cfg.lanes; ++l) {
        add({ModuleId::VFU, SiteRole::OperandA, l}, SignalClass::Data,
            g.in_fmt.total_bits);
        add({ModuleId::VFU, SiteRole::OperandB, l}, SignalClass::Data,
            g.in_fmt.total_bits);
        add({ModuleId::VFU, SiteRole::Result, l}, SignalClass::Data,
            g.acc_fmt.total_bits);
        add({ModuleId::VFU, SiteRole::Valid, l}, SignalClass::Handshake, 1);
        add({ModuleId::VFU, SiteRole::Ready, l}, SignalClass::Handshake, 1);
    }
    add({ModuleId::VLSU, SiteRole::Data, 0}, SignalClass::Data,
        g.slice_bytes * 8);
    add({ModuleId::VLSU, SiteRole::Valid, 0}, SignalClass::Handshake, 1);
    add({ModuleId::VLSU, SiteRole::Ready, 0}, SignalClass::Handshake, 1);
    add({ModuleId::Controller, SiteRole::State, 0}, SignalClass::State,
        kCtrlBits);
    add({ModuleId::VSLDU, SiteRole::Data, 0}, SignalClass::Data,
        g.slice_bytes * 8);
    add({ModuleId::Snitch, SiteRole::State, 0}, SignalClass::State,
        kSnitchBits);
    add({ModuleId::ICache, SiteRole::State, 0}, SignalClass::State,
        kICacheBits);
    return sites;
}

const FaultSite* find_site(const std::vector<FaultSite>& registry,
                           std::string_view id) {
    for (const FaultSite& s : registry)
        if (s.id == id) return &s;
    return nullptr;
}

Classification classify(bool handshake_mismatch, bool deadlock,
                        bool data_mismatch, bool output_mismatch) {
    if (handshake_mismatch || deadlock) return {OutcomeClass::FS, false};
    if (data_mismatch || output_mismatch)
        return {OutcomeClass::FD, output_mismatch};
    return {OutcomeClass::Masked, false};
}

bool detect_deadlock(std::uint64_t elapsed_cycles,
                     std::uint64_t golden_cycles) {
    return elapsed_cycles > 2 * golden_cycles + 64;
}

std::uint32_t GoldenTrace::machine_cycle_of_mac(std::uint32_t mac_cycle) const {
    const std::uint32_t d = cfg.dims.d;
    return (mac_cycle / d) * (d + 2) + mac_cycle % d + 1;
}

GoldenTrace run_golden(const KernelConfig& cfg) {
    cfg.validate();
    GoldenTrace trace;
    trace.cfg = cfg;
    trace.inputs = gen_inputs(cfg);
    trace.schedule = build_schedule(cfg, trace.inputs);

    const Geometry geom(cfg);
    const auto prog = build_program(geom);
    Machine mach(geom, prog, trace.inputs);
    mach.recording = true;
    mach.log = &trace.strobe_log;
    trace.strobe_log.reserve(prog.size() * geom.frame_stride);
    mach.run(prog.size());
    assert(!mach.stalled && !mach.deadlock);

    trace.output = mach.output();
    trace.total_cycles = static_cast<std::uint32_t>(mach.elapsed);
    trace.strobe_stride = geom.frame_stride;
    return trace;
}

TrialOutcome run_faulty(const GoldenTrace& golden,
                        const std::optional<FaultSpec>& fault,
                        StrobeMode mode) {
    if (fault) validate_fault(*fault, golden.cfg, golden.total_cycles);

    const Geometry geom(golden.cfg);
    const auto prog = build_program(geom);
    Machine mach(geom, prog, golden.inputs);
    mach.fault = fault ? &*fault : nullptr;
    mach.mode = mode;
    mach.ref = &golden.strobe_log;
    mach.ref_cycles = golden.total_cycles;
    mach.run(golden.total_cycles);

    TrialOutcome out;
    out.faulty_output = mach.output();
    const bool output_mismatch =
        out.faulty_output.words != golden.output.words;
    const Classification cls =
        classify(mach.handshake_violation, mach.deadlock, mach.data_mismatch,
                 output_mismatch);
    out.cls = cls.cls;
    out.sdc = cls.sdc;
    out.first_divergence_cycle = mach.first_div;
    return out;
}

} // namespace vecfi
