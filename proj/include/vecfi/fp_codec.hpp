// Copyright (c) 2026 the vecfi authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vecfi {

// Bit patterns are carried in the low bits of a 32-bit word, upper bits zero.
using BitWord = std::uint32_t;

enum class Precision : std::uint8_t { FP32, FP16, BP16, FP8 };

// Sign / exponent / mantissa layout of one supported format. All four
// formats follow the usual convention: biased exponent, hidden leading
// one for normals, gradual underflow through subnormals, all-ones
// exponent reserved for Inf (mantissa zero) and NaN (mantissa nonzero).
struct FloatFormat {
    Precision id;
    std::uint32_t total_bits;
    std::uint32_t exp_bits;
    std::uint32_t man_bits;
    std::int32_t bias;

    constexpr std::uint32_t sign_shift() const { return total_bits - 1; }
    constexpr BitWord sign_mask() const { return BitWord{1} << sign_shift(); }
    constexpr BitWord exp_mask() const {
        return ((BitWord{1} << exp_bits) - 1) << man_bits;
    }
    constexpr BitWord man_mask() const { return (BitWord{1} << man_bits) - 1; }
    constexpr BitWord word_mask() const {
        return total_bits == 32 ? ~BitWord{0}
                                : (BitWord{1} << total_bits) - 1;
    }
    constexpr std::uint32_t exp_field(BitWord w) const {
        return (w >> man_bits) & ((BitWord{1} << exp_bits) - 1);
    }
    constexpr std::uint32_t man_field(BitWord w) const { return w & man_mask(); }
    constexpr std::uint32_t sign_field(BitWord w) const { return w >> sign_shift(); }
    constexpr std::int32_t min_exp() const { return 1 - bias; }
    constexpr std::int32_t max_exp() const {
        return static_cast<std::int32_t>((BitWord{1} << exp_bits) - 2) - bias;
    }
    constexpr BitWord inf_bits(std::uint32_t sign) const {
        return (BitWord{sign} << sign_shift()) | exp_mask();
    }
    // Canonical quiet NaN: all-ones exponent, mantissa MSB set, sign clear.
    constexpr BitWord quiet_nan() const {
        return exp_mask() | (BitWord{1} << (man_bits - 1));
    }
};

const FloatFormat& format(Precision p);
std::string_view precision_name(Precision p);
std::optional<Precision> precision_from_name(std::string_view name);

// Widened counterpart used by widening kernels (FP16 -> FP32, FP8 -> FP16).
std::optional<Precision> widened(Precision p);

enum class ValueClass : std::uint8_t { Zero, Subnormal, Normal, Inf, NaN };

std::string_view value_class_name(ValueClass c);

struct DecodedValue {
    double value; // NaN patterns decode to a quiet binary64 NaN
    ValueClass cls;
};

// Exact: every finite pattern of every supported format is representable
// in binary64 without rounding.
DecodedValue decode(BitWord bits, const FloatFormat& fmt);
double decode_value(BitWord bits, const FloatFormat& fmt);

// Round-to-nearest-even encoding of a binary64 value. Overflow goes to
// +/-Inf, NaN input yields the canonical quiet NaN, zero keeps its sign.
BitWord encode(double value, const FloatFormat& fmt);

enum class FieldKind : std::uint8_t { Sign, Exponent, Mantissa };

std::string_view field_name(FieldKind f);
std::optional<FieldKind> field_from_name(std::string_view name);

// Inclusive bit positions of one field, LSB = bit 0 of the pattern.
struct BitRange {
    std::uint32_t hi;
    std::uint32_t lo;
    constexpr std::uint32_t width() const { return hi - lo + 1; }
};

BitRange field_bounds(const FloatFormat& fmt, FieldKind field);

BitWord flip_bit(BitWord bits, std::uint32_t index);

// One multiply / one add, each rounded exactly once to the output format.
// The product or sum is formed in binary64; operand significands are
// narrow enough that the final result matches a single ties-to-even
// rounding of the exact value (checked exhaustively in the tests).
BitWord mul_round(BitWord a, BitWord b, const FloatFormat& in_fmt,
                  const FloatFormat& out_fmt);
BitWord add_round(BitWord x, BitWord y, const FloatFormat& fmt);

// Lowercase hex with the width implied by the format, e.g. "0x3c" for FP8.
std::string to_hex(BitWord bits, const FloatFormat& fmt);
std::optional<BitWord> parse_hex(std::string_view text, const FloatFormat& fmt);

// Shortest decimal string that round-trips, with ".0" appended to
// integral values so the output always reads as a float.
std::string format_double(double v);

} // namespace vecfi
