#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace trefoil {

using u128 = unsigned __int128;
using i128 = __int128;

// Arithmetic domain Z_{2^w} with an optional fixed-point fraction width.
// Widths up to 128 are supported; every value is stored in a 128-bit word
// and reduced modulo 2^w on construction.
struct RingConfig {
    int width_bits = 32;
    int frac_bits = 0;

    constexpr RingConfig() = default;
    constexpr RingConfig(int width, int frac = 0) : width_bits(width), frac_bits(frac) {}

    constexpr u128 mask() const {
        return width_bits >= 128 ? ~u128{0} : ((u128{1} << width_bits) - 1);
    }
    constexpr u128 reduce(u128 v) const { return v & mask(); }
    // 2^(w-1), the sign bit / most negative signed value.
    constexpr u128 sign_bit() const { return u128{1} << (width_bits - 1); }
    constexpr u128 min_signed() const { return sign_bit(); }
    constexpr bool is_negative(u128 v) const { return (v & sign_bit()) != 0; }
    // Signed value as i128 (two's complement interpretation of the low w bits).
    constexpr i128 to_signed(u128 v) const {
        v = reduce(v);
        if (is_negative(v) && width_bits < 128) return (i128)(v - (u128{1} << width_bits));
        return (i128)v;
    }
    constexpr size_t byte_size() const { return (size_t)(width_bits + 7) / 8; }

    friend constexpr bool operator==(const RingConfig& a, const RingConfig& b) {
        return a.width_bits == b.width_bits && a.frac_bits == b.frac_bits;
    }

    void validate() const;
};

// A single value on Z_{2^w}. Wrapping semantics on every operation.
struct RingElement {
    u128 value = 0;
    RingConfig cfg;

    RingElement() = default;
    RingElement(u128 v, RingConfig c) : value(c.reduce(v)), cfg(c) {}
};

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_sub(const RingElement& a, const RingElement& b);
RingElement ring_mul(const RingElement& a, const RingElement& b);
RingElement ring_neg(const RingElement& a);

// Fixed-point encoding: round(r * 2^f) as a ring value, two's complement for
// negative r. Magnitude must satisfy |r| < 2^(w-1-f).
RingElement fx_encode(double r, RingConfig cfg);
double fx_decode(const RingElement& e);

// Reduce a value from a wider ring onto a narrower one (share-wise this
// converts shares of a secret in [0, 2^(k-1)) between the rings; the range
// requirement is the caller's obligation).
RingElement ring_downcast(const RingElement& e, RingConfig target);

// Serialization: little-endian, ceil(w/8) bytes per element; vectors are
// length-prefixed with a 4-byte little-endian count.
void append_element(std::vector<uint8_t>& out, u128 v, const RingConfig& cfg);
u128 read_element(const uint8_t* p, const RingConfig& cfg);
std::vector<uint8_t> serialize_values(const std::vector<u128>& vals, const RingConfig& cfg);
std::vector<u128> parse_values(const uint8_t* data, size_t len, const RingConfig& cfg);

std::string u128_to_string(u128 v);
std::string i128_to_string(i128 v);
u128 u128_from_string(const std::string& s);

}  // namespace trefoil
