#include "core/ring.hpp"

#include <cmath>

namespace trefoil {

void RingConfig::validate() const {
    require(width_bits >= 1 && width_bits <= 128, ErrorKind::Config,
            "ring width must be in [1,128], got " + std::to_string(width_bits));
    require(frac_bits >= 0 && frac_bits < width_bits, ErrorKind::Config,
            "frac_bits must satisfy 0 <= f < w");
}

static void check_same(const RingConfig& a, const RingConfig& b) {
    require(a == b, ErrorKind::Config, "ring config mismatch");
}

RingElement ring_add(const RingElement& a, const RingElement& b) {
    check_same(a.cfg, b.cfg);
    return RingElement(a.value + b.value, a.cfg);
}

RingElement ring_sub(const RingElement& a, const RingElement& b) {
    check_same(a.cfg, b.cfg);
    return RingElement(a.value - b.value, a.cfg);
}

RingElement ring_mul(const RingElement& a, const RingElement& b) {
    check_same(a.cfg, b.cfg);
    return RingElement(a.value * b.value, a.cfg);
}

RingElement ring_neg(const RingElement& a) { return RingElement(~a.value + 1, a.cfg); }

RingElement fx_encode(double r, RingConfig cfg) {
    cfg.validate();
    double limit = std::ldexp(1.0, cfg.width_bits - 1 - cfg.frac_bits);
    require(std::isfinite(r) && std::fabs(r) < limit, ErrorKind::Range,
            "fixed-point magnitude overflow");
    double scaled = std::round(std::ldexp(r, cfg.frac_bits));
    bool neg = scaled < 0;
    u128 mag = (u128)std::fabs(scaled);
    return RingElement(neg ? (u128)0 - mag : mag, cfg);
}

double fx_decode(const RingElement& e) {
    i128 s = e.cfg.to_signed(e.value);
    bool neg = s < 0;
    u128 mag = neg ? (u128)(-s) : (u128)s;
    // u128 -> double via two 64-bit halves
    double d = std::ldexp((double)(uint64_t)(mag >> 64), 64) + (double)(uint64_t)mag;
    if (neg) d = -d;
    return std::ldexp(d, -e.cfg.frac_bits);
}

RingElement ring_downcast(const RingElement& e, RingConfig target) {
    target.validate();
    return RingElement(e.value, target);
}

void append_element(std::vector<uint8_t>& out, u128 v, const RingConfig& cfg) {
    size_t nb = cfg.byte_size();
    for (size_t i = 0; i < nb; ++i) out.push_back((uint8_t)(v >> (8 * i)));
}

u128 read_element(const uint8_t* p, const RingConfig& cfg) {
    size_t nb = cfg.byte_size();
    u128 v = 0;
    for (size_t i = 0; i < nb; ++i) v |= (u128)p[i] << (8 * i);
    return cfg.reduce(v);
}

std::vector<uint8_t> serialize_values(const std::vector<u128>& vals, const RingConfig& cfg) {
    require(vals.size() <= 0xffffffffu, ErrorKind::Range, "vector too long to serialize");
    std::vector<uint8_t> out;
    out.reserve(4 + vals.size() * cfg.byte_size());
    uint32_t n = (uint32_t)vals.size();
    for (int i = 0; i < 4; ++i) out.push_back((uint8_t)(n >> (8 * i)));
    for (u128 v : vals) append_element(out, cfg.reduce(v), cfg);
    return out;
}

std::vector<u128> parse_values(const uint8_t* data, size_t len, const RingConfig& cfg) {
    require(len >= 4, ErrorKind::Protocol, "truncated vector header");
    uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n |= (uint32_t)data[i] << (8 * i);
    size_t nb = cfg.byte_size();
    require(len == 4 + (size_t)n * nb, ErrorKind::Protocol, "vector length mismatch");
    std::vector<u128> out(n);
    for (uint32_t i = 0; i < n; ++i) out[i] = read_element(data + 4 + (size_t)i * nb, cfg);
    return out;
}

std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v != 0) {
        s.push_back((char)('0' + (int)(v % 10)));
        v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

std::string i128_to_string(i128 v) {
    if (v < 0) return "-" + u128_to_string((u128)(-v));
    return u128_to_string((u128)v);
}

u128 u128_from_string(const std::string& s) {
    u128 v = 0;
    require(!s.empty(), ErrorKind::Invalid, "empty integer literal");
    for (char c : s) {
        require(c >= '0' && c <= '9', ErrorKind::Invalid, "bad digit in integer literal");
        v = v * 10 + (u128)(c - '0');
    }
    return v;
}

}  // namespace trefoil
