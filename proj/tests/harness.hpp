#pragma once

#include <array>
#include <functional>

#include "mpc/rss.hpp"
#include "net/transport.hpp"

namespace trefoil::testing {

// Runs the same protocol body at all three parties (in-process threads) and
// returns each party's serialized output plus meters.
template <class F>
std::array<SessionResult, 3> run3(F body, uint64_t seed = 42, const std::string& mode = "inproc") {
    SessionOptions opts;
    opts.seed = seed;
    opts.mode = mode;
    std::array<PartyProgram, 3> programs;
    for (int i = 0; i < 3; ++i) programs[(size_t)i] = [body](PartyCtx& ctx) { return body(ctx); };
    return run_session(programs, opts);
}

inline Bytes pack_u128s(const std::vector<u128>& vals) {
    Bytes out;
    out.reserve(vals.size() * 16);
    for (u128 v : vals)
        for (int i = 0; i < 16; ++i) out.push_back((uint8_t)(v >> (8 * i)));
    return out;
}

inline std::vector<u128> unpack_u128s(const Bytes& b) {
    std::vector<u128> out(b.size() / 16);
    for (size_t i = 0; i < out.size(); ++i) {
        u128 v = 0;
        for (int j = 0; j < 16; ++j) v |= (u128)b[i * 16 + (size_t)j] << (8 * j);
        out[i] = v;
    }
    return out;
}

}  // namespace trefoil::testing
