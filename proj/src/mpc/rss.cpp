#include "mpc/rss.hpp"

#include <algorithm>
#include <cstring>

namespace trefoil {

PartyCtx::PartyCtx(PartyId me_, Channel& ch_, uint64_t session_seed) : me(me_), ch(ch_) {
    if (session_seed != 0) {
        with_next = PairStreams(derive_seed(session_seed, 1000 + (uint64_t)self()));
        with_prev = PairStreams(derive_seed(session_seed, 1000 + (uint64_t)prev()));
        priv = Stream(derive_seed(session_seed, 2000 + (uint64_t)self()));
    } else {
        // fresh entropy: party i draws the seed for pair (i, i+1) and hands it
        // to the next party
        Phase saved = ch.meter().phase();
        ch.meter().set_phase(Phase::Setup);
        uint64_t mine = os_entropy64();
        Bytes msg(8);
        for (int i = 0; i < 8; ++i) msg[(size_t)i] = (uint8_t)(mine >> (8 * i));
        ch.send(next(), msg);
        Bytes got = ch.recv(prev());
        require(got.size() == 8, ErrorKind::Transport, "bad seed exchange");
        uint64_t theirs = 0;
        for (int i = 0; i < 8; ++i) theirs |= (uint64_t)got[(size_t)i] << (8 * i);
        with_next = PairStreams(mine);
        with_prev = PairStreams(theirs);
        priv = Stream(os_entropy64());
        ch.meter().set_phase(saved);
    }
}

DabitPool& PartyCtx::dabit_pool(int width) {
    auto it = pools_.find(width);
    if (it == pools_.end()) it = pools_.emplace(width, DabitPool(width)).first;
    return it->second;
}

void PartyCtx::ensure_dabits(int width, size_t count) {
    DabitPool& pool = dabit_pool(width);
    if (pool.available() >= count) return;
    size_t need = count - pool.available();
    Phase saved = meter().phase();
    set_phase(Phase::Setup);
    pool.add(gen_dabits(*this, width, need));
    set_phase(saved);
}

// ---------------------------------------------------------------------------
// wire helpers

static Bytes pack_ring_vec(const std::vector<u128>& vals, const RingConfig& cfg) {
    Bytes out;
    if (cfg.width_bits == 1) {
        out.assign((vals.size() + 7) / 8, 0);
        for (size_t i = 0; i < vals.size(); ++i)
            if (vals[i] & 1) out[i / 8] |= (uint8_t)(1u << (i % 8));
    } else {
        size_t nb = cfg.byte_size();
        out.resize(vals.size() * nb);
        for (size_t i = 0; i < vals.size(); ++i) {
            u128 v = cfg.reduce(vals[i]);
            for (size_t j = 0; j < nb; ++j) out[i * nb + j] = (uint8_t)(v >> (8 * j));
        }
    }
    return out;
}

static std::vector<u128> unpack_ring_vec(const Bytes& data, size_t n, const RingConfig& cfg) {
    std::vector<u128> vals(n);
    if (cfg.width_bits == 1) {
        require(data.size() == (n + 7) / 8, ErrorKind::Protocol, "bit payload size mismatch");
        for (size_t i = 0; i < n; ++i) vals[i] = (data[i / 8] >> (i % 8)) & 1;
    } else {
        size_t nb = cfg.byte_size();
        require(data.size() == n * nb, ErrorKind::Protocol, "payload size mismatch");
        for (size_t i = 0; i < n; ++i) vals[i] = read_element(data.data() + i * nb, cfg);
    }
    return vals;
}

void send_ring_vec(PartyCtx& ctx, int to, const std::vector<u128>& vals, const RingConfig& cfg) {
    ctx.ch.send(to, pack_ring_vec(vals, cfg), (uint64_t)vals.size() * (uint64_t)cfg.width_bits);
}

std::vector<u128> recv_ring_vec(PartyCtx& ctx, int from, size_t n, const RingConfig& cfg) {
    return unpack_ring_vec(ctx.ch.recv(from), n, cfg);
}

// ---------------------------------------------------------------------------
// sharing

ShareVec share_public(PartyCtx& ctx, const std::vector<u128>& vals, RingConfig cfg) {
    ShareVec out(cfg, vals.size());
    if (ctx.self() == 0)
        for (size_t i = 0; i < vals.size(); ++i) out.a[i] = cfg.reduce(vals[i]);
    if (ctx.self() == 2)
        for (size_t i = 0; i < vals.size(); ++i) out.b[i] = cfg.reduce(vals[i]);
    return out;
}

ShareVec share_public_scalar(PartyCtx& ctx, u128 v, RingConfig cfg, size_t n) {
    return share_public(ctx, std::vector<u128>(n, v), cfg);
}

ShareVec deal(PartyCtx& ctx, int dealer, const std::vector<u128>* values, RingConfig cfg,
              size_t n) {
    ShareVec out(cfg, n);
    if (ctx.self() == dealer) {
        require(values && values->size() == n, ErrorKind::Invalid, "dealer must supply values");
        std::vector<u128> third(n);
        ctx.with_prev.input().next_ring_vec(cfg, out.a, n);
        ctx.with_next.input().next_ring_vec(cfg, out.b, n);
        for (size_t i = 0; i < n; ++i) third[i] = cfg.reduce((*values)[i] - out.a[i] - out.b[i]);
        send_ring_vec(ctx, ctx.next(), third, cfg);
        send_ring_vec(ctx, ctx.prev(), third, cfg);
    } else if (ctx.self() == (dealer + 1) % 3) {
        ctx.with_prev.input().next_ring_vec(cfg, out.a, n);
        out.b = recv_ring_vec(ctx, dealer, n, cfg);
    } else {
        out.a = recv_ring_vec(ctx, dealer, n, cfg);
        ctx.with_next.input().next_ring_vec(cfg, out.b, n);
    }
    return out;
}

ShareVec deal_cheap(PartyCtx& ctx, int dealer, const std::vector<u128>* values, RingConfig cfg,
                    size_t n) {
    ShareVec out(cfg, n);
    if (ctx.self() == dealer) {
        require(values && values->size() == n, ErrorKind::Invalid, "dealer must supply values");
        ctx.with_prev.input().next_ring_vec(cfg, out.a, n);
        for (size_t i = 0; i < n; ++i) out.b[i] = cfg.reduce((*values)[i] - out.a[i]);
        send_ring_vec(ctx, ctx.next(), out.b, cfg);
    } else if (ctx.self() == (dealer + 1) % 3) {
        out.a = recv_ring_vec(ctx, dealer, n, cfg);
        // b stays 0
    } else {
        // a stays 0
        ctx.with_next.input().next_ring_vec(cfg, out.b, n);
    }
    return out;
}

std::vector<u128> open_all(PartyCtx& ctx, const ShareVec& x, bool check) {
    send_ring_vec(ctx, ctx.prev(), x.b, x.cfg);
    if (check) send_ring_vec(ctx, ctx.next(), x.a, x.cfg);
    std::vector<u128> missing = recv_ring_vec(ctx, ctx.next(), x.size(), x.cfg);
    if (check) {
        std::vector<u128> dup = recv_ring_vec(ctx, ctx.prev(), x.size(), x.cfg);
        require(dup == missing, ErrorKind::Integrity, "inconsistent replicated components");
    }
    std::vector<u128> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x.cfg.reduce(x.a[i] + x.b[i] + missing[i]);
    return out;
}

std::optional<std::vector<u128>> open_to(PartyCtx& ctx, const ShareVec& x, int who, bool check) {
    if (ctx.self() == (who + 1) % 3) send_ring_vec(ctx, who, x.b, x.cfg);
    if (check && ctx.self() == (who + 2) % 3) send_ring_vec(ctx, who, x.a, x.cfg);
    if (ctx.self() != who) return std::nullopt;
    std::vector<u128> missing = recv_ring_vec(ctx, ctx.next(), x.size(), x.cfg);
    if (check) {
        std::vector<u128> dup = recv_ring_vec(ctx, ctx.prev(), x.size(), x.cfg);
        require(dup == missing, ErrorKind::Integrity, "inconsistent replicated components");
    }
    std::vector<u128> out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x.cfg.reduce(x.a[i] + x.b[i] + missing[i]);
    return out;
}

// ---------------------------------------------------------------------------
// linear ops

static void check_pair(const ShareVec& x, const ShareVec& y) {
    require(x.cfg == y.cfg, ErrorKind::Config, "ring config mismatch");
    require(x.size() == y.size(), ErrorKind::Invalid, "length mismatch");
}

ShareVec sec_add(const ShareVec& x, const ShareVec& y) {
    check_pair(x, y);
    ShareVec out(x.cfg, x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        out.a[i] = x.cfg.reduce(x.a[i] + y.a[i]);
        out.b[i] = x.cfg.reduce(x.b[i] + y.b[i]);
    }
    return out;
}

ShareVec sec_sub(const ShareVec& x, const ShareVec& y) {
    check_pair(x, y);
    ShareVec out(x.cfg, x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        out.a[i] = x.cfg.reduce(x.a[i] - y.a[i]);
        out.b[i] = x.cfg.reduce(x.b[i] - y.b[i]);
    }
    return out;
}

ShareVec sec_neg(const ShareVec& x) {
    ShareVec out(x.cfg, x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        out.a[i] = x.cfg.reduce(~x.a[i] + 1);
        out.b[i] = x.cfg.reduce(~x.b[i] + 1);
    }
    return out;
}

ShareVec add_const(PartyCtx& ctx, const ShareVec& x, u128 c) {
    ShareVec out = x;
    if (ctx.self() == 0)
        for (auto& v : out.a) v = x.cfg.reduce(v + c);
    if (ctx.self() == 2)
        for (auto& v : out.b) v = x.cfg.reduce(v + c);
    return out;
}

ShareVec mul_const(const ShareVec& x, u128 c) {
    ShareVec out(x.cfg, x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        out.a[i] = x.cfg.reduce(x.a[i] * c);
        out.b[i] = x.cfg.reduce(x.b[i] * c);
    }
    return out;
}

ShareVec shift_up(const ShareVec& x, size_t positions) {
    ShareVec out(x.cfg, x.size());
    for (size_t i = positions; i < x.size(); ++i) {
        out.a[i] = x.a[i - positions];
        out.b[i] = x.b[i - positions];
    }
    return out;
}

ShareVec prefix_sum(const ShareVec& x) {
    ShareVec out(x.cfg, x.size());
    u128 ra = 0, rb = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        ra = x.cfg.reduce(ra + x.a[i]);
        rb = x.cfg.reduce(rb + x.b[i]);
        out.a[i] = ra;
        out.b[i] = rb;
    }
    return out;
}

ShareVec reverse(const ShareVec& x) {
    ShareVec out = x;
    std::reverse(out.a.begin(), out.a.end());
    std::reverse(out.b.begin(), out.b.end());
    return out;
}

ShareVec slice(const ShareVec& x, size_t begin, size_t count) {
    require(begin + count <= x.size(), ErrorKind::Invalid, "slice out of range");
    ShareVec out(x.cfg, count);
    std::copy(x.a.begin() + (long)begin, x.a.begin() + (long)(begin + count), out.a.begin());
    std::copy(x.b.begin() + (long)begin, x.b.begin() + (long)(begin + count), out.b.begin());
    return out;
}

void append(ShareVec& dst, const ShareVec& src) {
    require(dst.cfg == src.cfg, ErrorKind::Config, "ring config mismatch");
    dst.a.insert(dst.a.end(), src.a.begin(), src.a.end());
    dst.b.insert(dst.b.end(), src.b.begin(), src.b.end());
}

RepShare sum_all(const ShareVec& x) {
    RepShare s{x.cfg, 0, 0};
    for (size_t i = 0; i < x.size(); ++i) {
        s.a = x.cfg.reduce(s.a + x.a[i]);
        s.b = x.cfg.reduce(s.b + x.b[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// multiplication

static void local_cross_terms(PartyCtx& ctx, const ShareVec& x, const ShareVec& y,
                              std::vector<u128>& w) {
    size_t n = x.size();
    w.resize(n);
    std::vector<u128> zn, zp;
    ctx.with_next.zero().next_ring_vec(x.cfg, zn, n);
    ctx.with_prev.zero().next_ring_vec(x.cfg, zp, n);
    for (size_t i = 0; i < n; ++i)
        w[i] = x.cfg.reduce(x.a[i] * y.a[i] + x.a[i] * y.b[i] + x.b[i] * y.a[i] + zn[i] - zp[i]);
}

ShareVec sec_mul(PartyCtx& ctx, const ShareVec& x, const ShareVec& y) {
    check_pair(x, y);
    ShareVec out(x.cfg, x.size());
    local_cross_terms(ctx, x, y, out.a);
    send_ring_vec(ctx, ctx.prev(), out.a, x.cfg);
    out.b = recv_ring_vec(ctx, ctx.next(), x.size(), x.cfg);
    return out;
}

std::vector<ShareVec> sec_mul_batch(PartyCtx& ctx, const std::vector<const ShareVec*>& xs,
                                    const std::vector<const ShareVec*>& ys) {
    require(xs.size() == ys.size(), ErrorKind::Invalid, "batch arity mismatch");
    std::vector<ShareVec> out(xs.size());
    Bytes payload;
    uint64_t bits = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        check_pair(*xs[k], *ys[k]);
        out[k] = ShareVec(xs[k]->cfg, xs[k]->size());
        local_cross_terms(ctx, *xs[k], *ys[k], out[k].a);
        Bytes part = pack_ring_vec(out[k].a, out[k].cfg);
        payload.insert(payload.end(), part.begin(), part.end());
        bits += (uint64_t)out[k].size() * (uint64_t)out[k].cfg.width_bits;
    }
    ctx.ch.send(ctx.prev(), payload, bits);
    Bytes got = ctx.ch.recv(ctx.next());
    size_t off = 0;
    for (auto& sv : out) {
        size_t nb = sv.cfg.width_bits == 1 ? (sv.size() + 7) / 8 : sv.size() * sv.cfg.byte_size();
        require(off + nb <= got.size(), ErrorKind::Protocol, "short batch payload");
        Bytes part(got.begin() + (long)off, got.begin() + (long)(off + nb));
        sv.b = unpack_ring_vec(part, sv.size(), sv.cfg);
        off += nb;
    }
    require(off == got.size(), ErrorKind::Protocol, "batch payload size mismatch");
    return out;
}

// ---------------------------------------------------------------------------
// daBits

// Each party contributes one random bit shared on both rings; the XOR of the
// three contributions is uniform. XOR on Z_2 is local; on the wide ring it
// costs two multiplications.
std::vector<Dabit> gen_dabits(PartyCtx& ctx, int width, size_t count) {
    RingConfig bitcfg(1), ringcfg(width);
    std::vector<ShareVec> bit_contrib(3), ring_contrib(3);
    for (int d = 0; d < 3; ++d) {
        std::vector<u128> mine;
        std::vector<u128>* ptr = nullptr;
        if (ctx.self() == d) {
            mine.resize(count);
            for (auto& v : mine) v = ctx.priv.next_bit() ? 1 : 0;
            ptr = &mine;
        }
        bit_contrib[(size_t)d] = deal_cheap(ctx, d, ptr, bitcfg, count);
        ring_contrib[(size_t)d] = deal_cheap(ctx, d, ptr, ringcfg, count);
    }
    // Z_2: XOR = addition
    ShareVec bits = sec_add(sec_add(bit_contrib[0], bit_contrib[1]), bit_contrib[2]);
    // ring: x ^ y = x + y - 2xy
    auto xor_ring = [&](const ShareVec& x, const ShareVec& y) {
        ShareVec xy = sec_mul(ctx, x, y);
        return sec_sub(sec_add(x, y), mul_const(xy, 2));
    };
    ShareVec ring = xor_ring(xor_ring(ring_contrib[0], ring_contrib[1]), ring_contrib[2]);

    std::vector<Dabit> out(count);
    for (size_t i = 0; i < count; ++i) {
        out[i].bit_a = (uint8_t)(bits.a[i] & 1);
        out[i].bit_b = (uint8_t)(bits.b[i] & 1);
        out[i].ring_a = ring.a[i];
        out[i].ring_b = ring.b[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// test helper

ShareVec share_plain_for_tests(PartyCtx& ctx, const std::vector<u128>& vals, RingConfig cfg) {
    // every party holds the plaintext; components are derived from the values
    // themselves so all parties agree without communication
    ShareVec out(cfg, vals.size());
    for (size_t i = 0; i < vals.size(); ++i) {
        uint64_t h = mix64(0xabcdefull + i) ^ mix64((uint64_t)(vals[i] & 0xffffffffffffffffull));
        u128 c0 = cfg.reduce(((u128)mix64(h + 1) << 64) | mix64(h + 2));
        u128 c1 = cfg.reduce(((u128)mix64(h + 3) << 64) | mix64(h + 4));
        u128 c2 = cfg.reduce(vals[i] - c0 - c1);
        u128 comp[3] = {c0, c1, c2};
        out.a[i] = comp[ctx.self()];
        out.b[i] = comp[ctx.next()];
    }
    return out;
}

}  // namespace trefoil
