#include <cmath>

#include "mpc/binary.hpp"
#include "mpc/rss.hpp"

namespace trefoil {

static const RingConfig kBit(1);

// signed x < y:  (sx & !sy) | (same sign & sd)  with sd the sign of x - y.
// The two branches are disjoint, so the OR is a XOR.
static ShareVec lt_bit(PartyCtx& ctx, const ShareVec& x, const ShareVec& y) {
    require(x.cfg == y.cfg, ErrorKind::Config, "ring config mismatch");
    require(x.size() == y.size(), ErrorKind::Invalid, "length mismatch");
    ShareVec d = sec_sub(x, y);
    auto msbs = msb_bit_many(ctx, {&x, &y, &d});
    ShareVec &sx = msbs[0], &sy = msbs[1], &sd = msbs[2];
    ShareVec sxy = bit_and(ctx, sx, sy);
    ShareVec term1 = bit_xor(sx, sxy);  // sx & !sy
    ShareVec mask = bit_not(ctx, bit_xor(sx, sy));
    ShareVec term2 = bit_and(ctx, mask, sd);
    return bit_xor(term1, term2);
}

ShareVec sec_lt(PartyCtx& ctx, const ShareVec& x, const ShareVec& y) {
    return bit_to_arith(ctx, lt_bit(ctx, x, y), x.cfg);
}

ShareVec sec_eq(PartyCtx& ctx, const ShareVec& x, const ShareVec& y) {
    require(x.cfg == y.cfg, ErrorKind::Config, "ring config mismatch");
    require(x.size() == y.size(), ErrorKind::Invalid, "length mismatch");
    return bit_to_arith(ctx, eq_zero_bit(ctx, sec_sub(x, y)), x.cfg);
}

ShareVec sec_eq_const(PartyCtx& ctx, const ShareVec& x, u128 c) {
    return bit_to_arith(ctx, eq_zero_bit(ctx, add_const(ctx, x, (u128)0 - c)), x.cfg);
}

// ---------------------------------------------------------------------------
// truncation
//
// The secret is shifted into [0, 2^(w-1)) and written as d0 + d1 with d0
// computable by party 0 and d1 known to parties 1 and 2. Truncating the two
// operands separately deviates from floor(d / 2^c) by at most one positive
// bit; the remaining unknown is the wrap ovfl = (d0 + d1 - shifted) / 2^w,
// recovered exactly from the (w-1)-shift instance whose low result bit is
// unmasked with a daBit.

struct TruncPieces {
    ShareVec lo;   // floor(d0/2^c) + ceil(d1/2^c)    = floor(d/2^c) + bit
    ShareVec hi;   // the same at c = w-1             = 2*ovfl + bit'
    ShareVec bitp; // bit' recovered via the daBit
};

static TruncPieces trunc_core(PartyCtx& ctx, const ShareVec& shifted, int c) {
    const RingConfig cfg = shifted.cfg;
    const int w = cfg.width_bits;
    const size_t n = shifted.size();
    ctx.ensure_dabits(w, n);
    DabitPool& pool = ctx.dabit_pool(w);
    std::vector<Dabit> dbs(n);
    for (size_t i = 0; i < n; ++i) dbs[i] = pool.take();

    auto floor_shift = [&](u128 v, int s) { return v >> s; };
    auto ceil_shift = [&](u128 v, int s) { return v == 0 ? (u128)0 : ((v - 1) >> s) + 1; };

    // All sends are issued before any receive so the whole exchange is a
    // single round at every party.
    ShareVec sA(cfg, n), sAh(cfg, n), sB(cfg, n), sBh(cfg, n);
    std::vector<u128> b0(n, 0), b1(n, 0);
    if (ctx.self() == 0) {
        std::vector<u128> A(n), Ah(n), masked(2 * n), sendbits(n);
        for (size_t i = 0; i < n; ++i) {
            u128 d0 = cfg.reduce(shifted.a[i] + shifted.b[i]);
            A[i] = floor_shift(d0, c);
            Ah[i] = floor_shift(d0, w - 1);
        }
        ctx.with_prev.input().next_ring_vec(cfg, sA.a, n);
        ctx.with_prev.input().next_ring_vec(cfg, sAh.a, n);
        for (size_t i = 0; i < n; ++i) {
            sA.b[i] = cfg.reduce(A[i] - sA.a[i]);
            sAh.b[i] = cfg.reduce(Ah[i] - sAh.a[i]);
            masked[i] = sA.b[i];
            masked[n + i] = sAh.b[i];
            sendbits[i] = (Ah[i] & 1) ^ dbs[i].bit_a ^ dbs[i].bit_b;
        }
        send_ring_vec(ctx, 1, masked, cfg);
        send_ring_vec(ctx, 1, sendbits, kBit);
        send_ring_vec(ctx, 2, sendbits, kBit);
        b0 = sendbits;
        b1 = recv_ring_vec(ctx, 1, n, kBit);
    } else if (ctx.self() == 1) {
        std::vector<u128> sendbits(n);
        for (size_t i = 0; i < n; ++i) {
            u128 d1 = shifted.b[i];
            sB.b[i] = ceil_shift(d1, c);
            sBh.b[i] = ceil_shift(d1, w - 1);
            sendbits[i] = (sBh.b[i] & 1) ^ dbs[i].bit_b;
        }
        send_ring_vec(ctx, 0, sendbits, kBit);
        send_ring_vec(ctx, 2, sendbits, kBit);
        std::vector<u128> masked = recv_ring_vec(ctx, 0, 2 * n, cfg);
        for (size_t i = 0; i < n; ++i) {
            sA.a[i] = masked[i];
            sAh.a[i] = masked[n + i];
        }
        b0 = recv_ring_vec(ctx, 0, n, kBit);
        b1 = sendbits;
    } else {
        for (size_t i = 0; i < n; ++i) {
            u128 d1 = shifted.a[i];
            sB.a[i] = ceil_shift(d1, c);
            sBh.a[i] = ceil_shift(d1, w - 1);
        }
        ctx.with_next.input().next_ring_vec(cfg, sA.b, n);
        ctx.with_next.input().next_ring_vec(cfg, sAh.b, n);
        b0 = recv_ring_vec(ctx, 0, n, kBit);
        b1 = recv_ring_vec(ctx, 1, n, kBit);
    }

    // bit' = b ^ r = b + r - 2 b r with b public
    ShareVec bitp(cfg, n);
    for (size_t i = 0; i < n; ++i) {
        u128 b = (b0[i] ^ b1[i]) & 1;
        u128 ra = dbs[i].ring_a, rb = dbs[i].ring_b;
        bitp.a[i] = cfg.reduce(b * (ctx.self() == 0 ? 1 : 0) + ra - 2 * b * ra);
        bitp.b[i] = cfg.reduce(b * (ctx.self() == 2 ? 1 : 0) + rb - 2 * b * rb);
    }

    TruncPieces out;
    out.lo = sec_add(sA, sB);
    out.hi = sec_add(sAh, sBh);
    out.bitp = std::move(bitp);
    return out;
}

ShareVec sec_trunc(PartyCtx& ctx, const ShareVec& x, int c) {
    const RingConfig cfg = x.cfg;
    const int w = cfg.width_bits;
    require(c >= 1 && c <= w - 2, ErrorKind::Invalid, "shift must be in [1, w-2]");
    // shift the signed secret into [0, 2^(w-1))
    ShareVec shifted = add_const(ctx, x, u128{1} << (w - 2));
    TruncPieces p = trunc_core(ctx, shifted, c);
    // ovfl*2^(w-c) = (hi - bit') * 2^(w-1-c)
    ShareVec ovfl_term = mul_const(sec_sub(p.hi, p.bitp), u128{1} << (w - 1 - c));
    ShareVec res = sec_sub(p.lo, ovfl_term);
    // undo the range shift: floor((x + 2^(w-2))/2^c) = floor(x/2^c) + 2^(w-2-c)
    return add_const(ctx, res, (u128)0 - (u128{1} << (w - 2 - c)));
}

// ---------------------------------------------------------------------------
// public-constant-bit addition on a public b: z = b + r - 2br is local, so
// nothing here; division below.

// Fixed-point reciprocal-refinement division. Working precision F = f + 8
// fraction bits; the divisor is normalized into [2^(F-1), 2^F) with a
// one-hot leading-bit decomposition, then Newton iterations refine the
// reciprocal; trunc steps keep products inside the ring.
ShareVec sec_div(PartyCtx& ctx, const ShareVec& x, const ShareVec& y) {
    require(x.cfg == y.cfg, ErrorKind::Config, "ring config mismatch");
    require(x.size() == y.size(), ErrorKind::Invalid, "length mismatch");
    const RingConfig cfg = x.cfg;
    const int f = cfg.frac_bits;
    const int w = cfg.width_bits;
    require(f >= 2, ErrorKind::Config, "division requires frac_bits >= 2");
    const int F = f + 8;
    const int DB = F - 2;  // divisor bits: raw divisor must be < 2^(F-2)
    require(2 * F + 4 <= w, ErrorKind::Config, "ring too narrow for division precision");
    const size_t n = x.size();

    // one-hot leading bit of the divisor
    BitMatrix bits = decompose_low_bits(ctx, y, DB);
    // suffix OR from the top: o[p] = OR(bits[p..DB-1]) via doubling on
    // or(a,b) = a ^ b ^ ab
    std::vector<ShareVec> o(bits.begin(), bits.end());
    for (int d = 1; d < DB; d *= 2) {
        std::vector<const ShareVec*> ls, rs;
        for (int p = 0; p + d < DB; ++p) {
            ls.push_back(&o[(size_t)p]);
            rs.push_back(&o[(size_t)p + d]);
        }
        auto prods = sec_mul_batch(ctx, ls, rs);
        for (int p = 0; p + d < DB; ++p)
            o[(size_t)p] = bit_xor(bit_xor(o[(size_t)p], o[(size_t)p + d]), prods[(size_t)p]);
    }
    // lambda[p] = o[p] ^ o[p+1] is one-hot at the leading bit
    std::vector<ShareVec> lam((size_t)DB);
    for (int p = 0; p < DB - 1; ++p) lam[(size_t)p] = bit_xor(o[(size_t)p], o[(size_t)p + 1]);
    lam[(size_t)DB - 1] = o[(size_t)DB - 1];
    std::vector<const ShareVec*> lamp;
    for (auto& l : lam) lamp.push_back(&l);
    auto lam_arith = bit_to_arith_many(ctx, lamp, cfg);
    // v = sum lambda[p] * 2^(F-1-p); y*v lands in [2^(F-1), 2^F)
    ShareVec v(cfg, n);
    for (int p = 0; p < DB; ++p)
        v = sec_add(v, mul_const(lam_arith[(size_t)p], u128{1} << (F - 1 - p)));

    ShareVec u = sec_mul(ctx, y, v);

    // initial reciprocal estimate on [1/2, 1): 2.9142 - 2*u
    u128 magic = F <= 52 ? (u128)llround(2.9142 * ldexp(1.0, F))
                         : (u128)llround(2.9142 * ldexp(1.0, 52)) << (F - 52);
    ShareVec r = add_const(ctx, mul_const(u, (u128)0 - 2), magic);
    int iters = 1;
    while ((1 << iters) < f) ++iters;
    if (iters < 2) iters = 2;
    for (int it = 0; it < iters; ++it) {
        ShareVec t1 = sec_trunc(ctx, sec_mul(ctx, u, r), F);
        ShareVec t2 = add_const(ctx, sec_neg(t1), u128{2} << F);
        r = sec_trunc(ctx, sec_mul(ctx, r, t2), F);
    }
    // q = x * v * r / 2^(2F - f)
    ShareVec p1 = sec_mul(ctx, x, v);
    ShareVec p2 = sec_mul(ctx, p1, r);
    return sec_trunc(ctx, p2, 2 * F - f);
}

}  // namespace trefoil
