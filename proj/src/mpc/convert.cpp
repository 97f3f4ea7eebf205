#include "mpc/convert.hpp"

namespace trefoil {

static const RingConfig kBit(1);

static u128 ceil_shift(u128 v, int s) { return v == 0 ? (u128)0 : ((v - 1) >> s) + 1; }

ShareVec convert_share(PartyCtx& ctx, const ShareVec& x, ConversionContext& cc) {
    require(x.cfg == cc.source, ErrorKind::Config, "input not on the source ring");
    const RingConfig kcfg = cc.source, lcfg = cc.target;
    const int k = kcfg.width_bits;
    const size_t n = x.size();
    require(cc.pool && cc.pool->width() == lcfg.width_bits, ErrorKind::Setup,
            "conversion needs a target-ring daBit pool");
    require(cc.pool->available() >= n, ErrorKind::Setup, "daBit pool exhausted");
    std::vector<Dabit> dbs(n);
    for (size_t i = 0; i < n; ++i) dbs[i] = cc.pool->take();

    // sd0/st0 dealt by party 0, sd1/st1 dealt by party 1, all on the target
    // ring; the masked bits ride in the same round.
    ShareVec sd0(lcfg, n), st0(lcfg, n), sd1(lcfg, n), st1(lcfg, n);
    std::vector<u128> b0(n, 0), b1(n, 0);

    if (ctx.self() == 0) {
        std::vector<u128> masked(2 * n), bits(n);
        ctx.with_prev.input().next_ring_vec(lcfg, sd0.a, n);
        ctx.with_prev.input().next_ring_vec(lcfg, st0.a, n);
        // component 1 of party 1's two dealings
        ctx.with_next.input().next_ring_vec(lcfg, sd1.b, n);
        ctx.with_next.input().next_ring_vec(lcfg, st1.b, n);
        for (size_t i = 0; i < n; ++i) {
            u128 d0 = kcfg.reduce(x.a[i] + x.b[i]);
            u128 t0 = d0 >> (k - 1);
            sd0.b[i] = lcfg.reduce(d0 - sd0.a[i]);
            st0.b[i] = lcfg.reduce(t0 - st0.a[i]);
            masked[i] = sd0.b[i];
            masked[n + i] = st0.b[i];
            bits[i] = (t0 & 1) ^ dbs[i].bit_a ^ dbs[i].bit_b;
        }
        send_ring_vec(ctx, 1, masked, lcfg);
        send_ring_vec(ctx, 1, bits, kBit);
        send_ring_vec(ctx, 2, bits, kBit);
        b0 = bits;
        b1 = recv_ring_vec(ctx, 1, n, kBit);
    } else if (ctx.self() == 1) {
        std::vector<u128> masked(2 * n), bits(n);
        ctx.with_prev.input().next_ring_vec(lcfg, sd1.a, n);
        ctx.with_prev.input().next_ring_vec(lcfg, st1.a, n);
        for (size_t i = 0; i < n; ++i) {
            u128 d1 = x.b[i];  // component 2
            u128 t1 = ceil_shift(d1, k - 1);
            sd1.b[i] = lcfg.reduce(d1 - sd1.a[i]);
            st1.b[i] = lcfg.reduce(t1 - st1.a[i]);
            masked[i] = sd1.b[i];
            masked[n + i] = st1.b[i];
            bits[i] = (t1 & 1) ^ dbs[i].bit_b;  // component 2 of the daBit
        }
        send_ring_vec(ctx, 2, masked, lcfg);
        send_ring_vec(ctx, 0, bits, kBit);
        send_ring_vec(ctx, 2, bits, kBit);
        b1 = bits;
        {
            std::vector<u128> got = recv_ring_vec(ctx, 0, 2 * n, lcfg);
            for (size_t i = 0; i < n; ++i) {
                sd0.a[i] = got[i];
                st0.a[i] = got[n + i];
            }
        }
        b0 = recv_ring_vec(ctx, 0, n, kBit);
    } else {
        ctx.with_next.input().next_ring_vec(lcfg, sd0.b, n);
        ctx.with_next.input().next_ring_vec(lcfg, st0.b, n);
        {
            std::vector<u128> got = recv_ring_vec(ctx, 1, 2 * n, lcfg);
            for (size_t i = 0; i < n; ++i) {
                sd1.a[i] = got[i];
                st1.a[i] = got[n + i];
            }
        }
        b0 = recv_ring_vec(ctx, 0, n, kBit);
        b1 = recv_ring_vec(ctx, 1, n, kBit);
    }

    ShareVec d = sec_add(sd0, sd1);
    ShareVec truncsum = sec_add(st0, st1);
    // bit = b ^ r on the target ring, b public
    ShareVec bitp(lcfg, n);
    for (size_t i = 0; i < n; ++i) {
        u128 b = (b0[i] ^ b1[i]) & 1;
        u128 ra = dbs[i].ring_a, rb = dbs[i].ring_b;
        bitp.a[i] = lcfg.reduce((ctx.self() == 0 ? b : 0) + ra - 2 * b * ra);
        bitp.b[i] = lcfg.reduce((ctx.self() == 2 ? b : 0) + rb - 2 * b * rb);
    }
    ShareVec ovfl = mul_const(sec_sub(truncsum, bitp), u128{1} << (k - 1));
    return sec_sub(d, ovfl);
}

ShareVec convert_down(const ShareVec& x, RingConfig target) {
    require(target.width_bits < x.cfg.width_bits, ErrorKind::Config,
            "downward conversion requires a narrower target");
    ShareVec out(target, x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        out.a[i] = target.reduce(x.a[i]);
        out.b[i] = target.reduce(x.b[i]);
    }
    return out;
}

TruncIdentity trunc_identity_check(u128 d0, u128 d1, int c, int k, int l) {
    RingConfig lcfg(l);
    require(c >= 0 && c < k && k < l, ErrorKind::Invalid, "need 0 <= c < k < l");
    u128 left = d0 >> c;
    u128 neg_d1 = lcfg.reduce((u128)0 - d1);
    i128 shifted = lcfg.to_signed(neg_d1) >> c;  // arithmetic shift
    u128 right = lcfg.reduce((u128)0 - (u128)shifted);
    u128 value = lcfg.reduce(left + right);
    u128 floor_sum = (d0 + d1) >> c;
    TruncIdentity out;
    out.value = value;
    out.bit = lcfg.to_signed(lcfg.reduce(value - floor_sum));
    return out;
}

// ---------------------------------------------------------------------------
// two-party variant

TwoPartyConvertMsg TwoPartyConvertState::round1() {
    const int k = source.width_bits;
    u128 d = source.reduce(share_k);
    u128 trunc = party == 0 ? (d >> (k - 1)) : ceil_shift(d, k - 1);
    // operand sharings from the common PRG: the non-dealer's share is the
    // stream value, the dealer keeps value - stream
    Stream masks(mask_seed);
    for (int p = 0; p < 2; ++p) {
        u128 md = masks.next_ring(target);
        u128 mt = masks.next_ring(target);
        if (p == party) {
            d_share_[p] = target.reduce(d - md);
            trunc_share_[p] = target.reduce(trunc - mt);
        } else {
            d_share_[p] = md;
            trunc_share_[p] = mt;
        }
    }
    my_bit_ = (uint8_t)((trunc & 1) ^ dabit.bit[party]);
    return TwoPartyConvertMsg{my_bit_};
}

u128 TwoPartyConvertState::finish(const TwoPartyConvertMsg& theirs) {
    const int k = source.width_bits;
    u128 b = (u128)((my_bit_ ^ theirs.masked_bit) & 1);
    u128 r = dabit.ring[party];
    u128 bit_share = target.reduce((party == 0 ? b : 0) + r - 2 * b * r);
    u128 d = target.reduce(d_share_[0] + d_share_[1]);
    u128 truncsum = target.reduce(trunc_share_[0] + trunc_share_[1]);
    u128 ovfl = target.reduce((truncsum - bit_share) << (k - 1));
    return target.reduce(d - ovfl);
}

std::pair<u128, u128> convert_share_two_party(u128 secret, RingConfig source, RingConfig target,
                                              uint64_t seed) {
    require(source.reduce(secret) < source.sign_bit(), ErrorKind::Range,
            "secret must lie in [0, 2^(k-1))");
    Stream rng(derive_seed(seed, 0x7079));
    TwoPartyDabitDealer dealer(derive_seed(seed, 0xdab));
    TwoPartyDabit db = dealer.next(target);

    u128 x0 = source.reduce(rng.next_u128());
    u128 x1 = source.reduce(secret - x0);
    uint64_t mask_seed = derive_seed(seed, 0x3a5f);

    TwoPartyConvertState p0{0, source, target, x0, db, mask_seed};
    TwoPartyConvertState p1{1, source, target, x1, db, mask_seed};
    TwoPartyConvertMsg m0 = p0.round1();
    TwoPartyConvertMsg m1 = p1.round1();
    return {p0.finish(m1), p1.finish(m0)};
}

}  // namespace trefoil
