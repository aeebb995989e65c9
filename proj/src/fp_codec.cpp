// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#include "vecfi/fp_codec.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace vecfi {

namespace {

constexpr FloatFormat kFormats[] = {
    {Precision::FP32, 32, 8, 23, 127},
    {Precision::FP16, 16, 5, 10, 15},
    {Precision::BP16, 16, 8, 7, 127},
    {Precision::FP8, 8, 5, 2, 15},
};

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

} // namespace

const FloatFormat& format(Precision p) {
    return kFormats[static_cast<std::size_t>(p)];
}

std::string_view precision_name(Precision p) {
    switch (p) {
    case Precision::FP32: return "fp32";
    case Precision::FP16: return "fp16";
    case Precision::BP16: return "bp16";
    case Precision::FP8: return "fp8";
    }
    return "?";
}

std::optional<Precision> precision_from_name(std::string_view name) {
    for (const FloatFormat& f : kFormats) {
        if (iequals(name, precision_name(f.id))) return f.id;
    }
    return std::nullopt;
}

std::optional<Precision> widened(Precision p) {
    switch (p) {
    case Precision::FP16: return Precision::FP32;
    case Precision::FP8: return Precision::FP16;
    default: return std::nullopt;
    }
}

std::string_view value_class_name(ValueClass c) {
    switch (c) {
    case ValueClass::Zero: return "zero";
    case ValueClass::Subnormal: return "subnormal";
    case ValueClass::Normal: return "normal";
    case ValueClass::Inf: return "inf";
    case ValueClass::NaN: return "nan";
    }
    return "?";
}

DecodedValue decode(BitWord bits, const FloatFormat& fmt) {
    bits &= fmt.word_mask();
    const std::uint32_t e = fmt.exp_field(bits);
    const std::uint32_t m = fmt.man_field(bits);
    const double sgn = fmt.sign_field(bits) ? -1.0 : 1.0;
    const std::uint32_t e_ones = (1u << fmt.exp_bits) - 1;

    if (e == e_ones) {
        if (m == 0)
            return {sgn * std::numeric_limits<double>::infinity(), ValueClass::Inf};
        return {std::numeric_limits<double>::quiet_NaN(), ValueClass::NaN};
    }
    if (e == 0) {
        if (m == 0) return {sgn * 0.0, ValueClass::Zero};
        const double v = std::ldexp(static_cast<double>(m),
                                    fmt.min_exp() - static_cast<int>(fmt.man_bits));
        return {sgn * v, ValueClass::Subnormal};
    }
    const double v = std::ldexp(
        static_cast<double>(m | (1u << fmt.man_bits)),
        static_cast<int>(e) - fmt.bias - static_cast<int>(fmt.man_bits));
    return {sgn * v, ValueClass::Normal};
}

double decode_value(BitWord bits, const FloatFormat& fmt) {
    return decode(bits, fmt).value;
}

BitWord encode(double value, const FloatFormat& fmt) {
    if (std::isnan(value)) return fmt.quiet_nan();
    const std::uint32_t sign = std::signbit(value) ? 1u : 0u;
    const BitWord signed_zero = BitWord{sign} << fmt.sign_shift();
    if (std::isinf(value)) return fmt.inf_bits(sign);
    const double ax = std::fabs(value);
    if (ax == 0.0) return signed_zero;

    // ilogb is exact for subnormal doubles as well, so the split between
    // the normal and subnormal target ranges is decided without rounding.
    int e = std::ilogb(ax);
    const int mb = static_cast<int>(fmt.man_bits);

    if (e >= fmt.min_exp()) {
        // Scaling by a power of two is exact, so nearbyint sees the exact
        // significand and performs the one ties-to-even rounding.
        const double scaled = std::ldexp(ax, mb - e);
        std::uint64_t m = static_cast<std::uint64_t>(std::nearbyint(scaled));
        if (m == (std::uint64_t{1} << (mb + 1))) {
            m >>= 1;
            ++e;
        }
        if (e > fmt.max_exp()) return fmt.inf_bits(sign);
        const BitWord biased = static_cast<BitWord>(e + fmt.bias);
        return signed_zero | (biased << fmt.man_bits) |
               static_cast<BitWord>(m & fmt.man_mask());
    }

    // Subnormal target: value = m * 2^(min_exp - man_bits).
    const double scaled = std::ldexp(ax, mb - fmt.min_exp());
    const std::uint64_t m = static_cast<std::uint64_t>(std::nearbyint(scaled));
    if (m >= (std::uint64_t{1} << mb)) {
        // Rounded up to the smallest normal.
        return signed_zero | (BitWord{1} << fmt.man_bits);
    }
    return signed_zero | static_cast<BitWord>(m);
}

std::string_view field_name(FieldKind f) {
    switch (f) {
    case FieldKind::Sign: return "sign";
    case FieldKind::Exponent: return "exponent";
    case FieldKind::Mantissa: return "mantissa";
    }
    return "?";
}

std::optional<FieldKind> field_from_name(std::string_view name) {
    if (iequals(name, "sign")) return FieldKind::Sign;
    if (iequals(name, "exponent")) return FieldKind::Exponent;
    if (iequals(name, "mantissa")) return FieldKind::Mantissa;
    return std::nullopt;
}

BitRange field_bounds(const FloatFormat& fmt, FieldKind field) {
    switch (field) {
    case FieldKind::Sign:
        return {fmt.sign_shift(), fmt.sign_shift()};
    case FieldKind::Exponent:
        return {fmt.total_bits - 2, fmt.man_bits};
    case FieldKind::Mantissa:
        return {fmt.man_bits - 1, 0};
    }
    assert(false);
    return {0, 0};
}

BitWord flip_bit(BitWord bits, std::uint32_t index) {
    assert(index < 32);
    return bits ^ (BitWord{1} << index);
}

BitWord mul_round(BitWord a, BitWord b, const FloatFormat& in_fmt,
                  const FloatFormat& out_fmt) {
    // Significands are at most 24 bits, so the binary64 product is exact
    // and the encode below is the single rounding.
    return encode(decode_value(a, in_fmt) * decode_value(b, in_fmt), out_fmt);
}

BitWord add_round(BitWord x, BitWord y, const FloatFormat& fmt) {
    // The binary64 sum can itself round when exponents are far apart, but
    // with a 53-bit intermediate and at most 24-bit targets the final
    // result still equals a single ties-to-even rounding of the exact sum.
    return encode(decode_value(x, fmt) + decode_value(y, fmt), fmt);
}

std::string to_hex(BitWord bits, const FloatFormat& fmt) {
    static const char digits[] = "0123456789abcdef";
    const std::uint32_t n = fmt.total_bits / 4;
    std::string out = "0x";
    for (std::uint32_t i = 0; i < n; ++i) {
        out.push_back(digits[(bits >> (4 * (n - 1 - i))) & 0xF]);
    }
    return out;
}

std::optional<BitWord> parse_hex(std::string_view text, const FloatFormat& fmt) {
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
        text.remove_prefix(2);
    if (text.empty() || text.size() > 8) return std::nullopt;
    std::uint32_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value, 16);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    if (value & ~fmt.word_mask()) return std::nullopt;
    return value;
}

std::string format_double(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    assert(ec == std::errc{});
    std::string out(buf, ptr);
    if (out.find_first_of(".einf") == std::string::npos) out += ".0";
    return out;
}

} // namespace vecfi
