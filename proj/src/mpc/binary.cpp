#include "mpc/binary.hpp"

namespace trefoil {

static const RingConfig kBit(1);

ShareVec bit_not(PartyCtx& ctx, const ShareVec& x) { return add_const(ctx, x, 1); }

ShareVec bit_and(PartyCtx& ctx, const ShareVec& x, const ShareVec& y) {
    return sec_mul(ctx, x, y);
}

BitMatrix inject_bits(PartyCtx& ctx, int comp, const std::vector<u128>& vals, int nbits) {
    size_t n = vals.size();
    bool holder_a = ctx.self() == comp;
    bool holder_b = ctx.next() == comp;
    BitMatrix out((size_t)nbits, ShareVec(kBit, n));
    if (!holder_a && !holder_b) return out;
    for (int p = 0; p < nbits; ++p) {
        for (size_t i = 0; i < n; ++i) {
            u128 bit = (vals[i] >> p) & 1;
            if (holder_a) out[(size_t)p].a[i] = bit;
            if (holder_b) out[(size_t)p].b[i] = bit;
        }
    }
    return out;
}

ShareVec inject_bit_plane(PartyCtx& ctx, int comp, const std::vector<uint8_t>& bits) {
    ShareVec out(kBit, bits.size());
    if (ctx.self() == comp)
        for (size_t i = 0; i < bits.size(); ++i) out.a[i] = bits[i] & 1;
    if (ctx.next() == comp)
        for (size_t i = 0; i < bits.size(); ++i) out.b[i] = bits[i] & 1;
    return out;
}

BitMatrix xor_deal_bits(PartyCtx& ctx, int dealer, const std::vector<u128>* vals, int nbits,
                        size_t n) {
    BitMatrix out((size_t)nbits, ShareVec(kBit, n));
    // component `dealer` from the pairwise stream, component dealer+1 is the
    // masked value, component dealer+2 stays zero (same layout as deal_cheap)
    if (ctx.self() == dealer) {
        require(vals && vals->size() == n, ErrorKind::Invalid, "dealer must supply values");
        std::vector<u128> masked(n * (size_t)nbits);
        for (int p = 0; p < nbits; ++p) {
            std::vector<u128> mask;
            ctx.with_prev.bits().next_ring_vec(kBit, mask, n);
            for (size_t i = 0; i < n; ++i) {
                u128 bit = ((*vals)[i] >> p) & 1;
                out[(size_t)p].a[i] = mask[i];
                out[(size_t)p].b[i] = bit ^ mask[i];
                masked[(size_t)p * n + i] = bit ^ mask[i];
            }
        }
        send_ring_vec(ctx, ctx.next(), masked, kBit);
    } else if (ctx.self() == (dealer + 1) % 3) {
        std::vector<u128> masked = recv_ring_vec(ctx, dealer, n * (size_t)nbits, kBit);
        for (int p = 0; p < nbits; ++p)
            for (size_t i = 0; i < n; ++i) out[(size_t)p].a[i] = masked[(size_t)p * n + i];
    } else {
        for (int p = 0; p < nbits; ++p) {
            std::vector<u128> mask;
            ctx.with_next.bits().next_ring_vec(kBit, mask, n);
            for (size_t i = 0; i < n; ++i) out[(size_t)p].b[i] = mask[i];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// adders

// carry-save layer: X + Y + Z == S + T with S = X^Y^Z and
// T = (maj(X,Y,Z) << 1); one multiplication round.
static void carry_save(PartyCtx& ctx, const BitMatrix& X, const BitMatrix& Y, const BitMatrix& Z,
                       BitMatrix& S, BitMatrix& T) {
    int w = (int)X.size();
    size_t n = X[0].size();
    S.assign((size_t)w, ShareVec(kBit, n));
    T.assign((size_t)w, ShareVec(kBit, n));
    std::vector<ShareVec> xy((size_t)w), xz((size_t)w);
    std::vector<const ShareVec*> ls, rs;
    for (int p = 0; p < w; ++p) {
        xy[(size_t)p] = bit_xor(X[(size_t)p], Y[(size_t)p]);  // x^y
        S[(size_t)p] = bit_xor(xy[(size_t)p], Z[(size_t)p]);
    }
    for (int p = 0; p + 1 < w; ++p) {  // top carry falls off mod 2^w
        ls.push_back(&X[(size_t)p]);
        rs.push_back(&Y[(size_t)p]);
        ls.push_back(&Z[(size_t)p]);
        rs.push_back(&xy[(size_t)p]);
    }
    auto prods = sec_mul_batch(ctx, ls, rs);
    for (int p = 0; p + 1 < w; ++p) {
        // maj = xy ^ z(x^y)
        T[(size_t)p + 1] = bit_xor(prods[(size_t)p * 2], prods[(size_t)p * 2 + 1]);
    }
}

// Kogge-Stone prefix: carries[p] = carry INTO bit p of A+B, for p in [0, w).
static BitMatrix ks_carries(PartyCtx& ctx, const BitMatrix& A, const BitMatrix& B) {
    int w = (int)A.size();
    size_t n = A[0].size();
    std::vector<ShareVec> G((size_t)w), P((size_t)w);
    {
        std::vector<const ShareVec*> ls, rs;
        for (int p = 0; p < w; ++p) {
            ls.push_back(&A[(size_t)p]);
            rs.push_back(&B[(size_t)p]);
        }
        auto g = sec_mul_batch(ctx, ls, rs);
        for (int p = 0; p < w; ++p) {
            G[(size_t)p] = std::move(g[(size_t)p]);
            P[(size_t)p] = bit_xor(A[(size_t)p], B[(size_t)p]);
        }
    }
    for (int d = 1; d < w; d *= 2) {
        std::vector<const ShareVec*> ls, rs;
        for (int p = d; p < w; ++p) {
            ls.push_back(&P[(size_t)p]);
            rs.push_back(&G[(size_t)p - d]);
            ls.push_back(&P[(size_t)p]);
            rs.push_back(&P[(size_t)p - d]);
        }
        auto prods = sec_mul_batch(ctx, ls, rs);
        size_t k = 0;
        for (int p = d; p < w; ++p) {
            G[(size_t)p] = bit_xor(G[(size_t)p], prods[k++]);
            P[(size_t)p] = prods[k++];
        }
    }
    BitMatrix carries((size_t)w, ShareVec(kBit, n));
    for (int p = 1; p < w; ++p) carries[(size_t)p] = G[(size_t)p - 1];
    return carries;
}

// carry into the top bit only: tree reduction over (g, p) pairs of bits
// [0, w-2]; O(w) ANDs instead of O(w log w).
static ShareVec carry_into_top(PartyCtx& ctx, const BitMatrix& A, const BitMatrix& B) {
    int t = (int)A.size() - 1;  // combine bits 0..t-1
    size_t n = A[0].size();
    if (t <= 0) return ShareVec(kBit, n);
    std::vector<ShareVec> G((size_t)t), P((size_t)t);
    {
        std::vector<const ShareVec*> ls, rs;
        for (int p = 0; p < t; ++p) {
            ls.push_back(&A[(size_t)p]);
            rs.push_back(&B[(size_t)p]);
        }
        auto g = sec_mul_batch(ctx, ls, rs);
        for (int p = 0; p < t; ++p) {
            G[(size_t)p] = std::move(g[(size_t)p]);
            P[(size_t)p] = bit_xor(A[(size_t)p], B[(size_t)p]);
        }
    }
    while (G.size() > 1) {
        size_t pairs = G.size() / 2;
        std::vector<const ShareVec*> ls, rs;
        for (size_t k = 0; k < pairs; ++k) {
            // combine (lo=2k, hi=2k+1): g' = g_hi ^ p_hi g_lo ; p' = p_hi p_lo
            ls.push_back(&P[2 * k + 1]);
            rs.push_back(&G[2 * k]);
            ls.push_back(&P[2 * k + 1]);
            rs.push_back(&P[2 * k]);
        }
        auto prods = sec_mul_batch(ctx, ls, rs);
        std::vector<ShareVec> G2, P2;
        for (size_t k = 0; k < pairs; ++k) {
            G2.push_back(bit_xor(G[2 * k + 1], prods[2 * k]));
            P2.push_back(prods[2 * k + 1]);
        }
        if (G.size() % 2 == 1) {
            G2.push_back(G.back());
            P2.push_back(P.back());
        }
        G = std::move(G2);
        P = std::move(P2);
    }
    return G[0];
}

// The three additive components of x as locally-known binary sharings.
static void component_bits(PartyCtx& ctx, const ShareVec& x, int nbits, BitMatrix out[3]) {
    for (int comp = 0; comp < 3; ++comp) {
        std::vector<u128> local(x.size(), 0);
        if (ctx.self() == comp) local = x.a;
        if (ctx.next() == comp) local = x.b;
        out[comp] = inject_bits(ctx, comp, local, nbits);
    }
}

BitMatrix decompose_low_bits(PartyCtx& ctx, const ShareVec& x, int nbits) {
    require(nbits >= 1 && nbits <= x.cfg.width_bits, ErrorKind::Invalid, "bad bit count");
    BitMatrix comp[3];
    component_bits(ctx, x, nbits, comp);
    if (nbits == 1) {
        BitMatrix out(1, bit_xor(bit_xor(comp[0][0], comp[1][0]), comp[2][0]));
        return out;
    }
    BitMatrix S, T;
    carry_save(ctx, comp[0], comp[1], comp[2], S, T);
    BitMatrix carries = ks_carries(ctx, S, T);
    BitMatrix out((size_t)nbits);
    for (int p = 0; p < nbits; ++p)
        out[(size_t)p] = bit_xor(bit_xor(S[(size_t)p], T[(size_t)p]), carries[(size_t)p]);
    return out;
}

std::vector<ShareVec> msb_bit_many(PartyCtx& ctx, const std::vector<const ShareVec*>& xs) {
    // concatenate inputs of equal width so every stage batches into shared
    // rounds, then split the resulting plane
    require(!xs.empty(), ErrorKind::Invalid, "empty msb batch");
    int w = xs[0]->cfg.width_bits;
    ShareVec all(xs[0]->cfg, 0);
    for (auto* x : xs) {
        require(x->cfg.width_bits == w, ErrorKind::Config, "msb batch width mismatch");
        append(all, *x);
    }
    ShareVec plane(kBit, all.size());
    if (w == 1) {
        for (size_t i = 0; i < all.size(); ++i) {
            plane.a[i] = all.a[i] & 1;
            plane.b[i] = all.b[i] & 1;
        }
    } else {
        BitMatrix comp[3];
        component_bits(ctx, all, w, comp);
        BitMatrix S, T;
        carry_save(ctx, comp[0], comp[1], comp[2], S, T);
        ShareVec carry = carry_into_top(ctx, S, T);
        plane = bit_xor(bit_xor(S[(size_t)w - 1], T[(size_t)w - 1]), carry);
    }
    std::vector<ShareVec> out;
    size_t off = 0;
    for (auto* x : xs) {
        ShareVec piece(kBit, x->size());
        std::copy(plane.a.begin() + (long)off, plane.a.begin() + (long)(off + x->size()),
                  piece.a.begin());
        std::copy(plane.b.begin() + (long)off, plane.b.begin() + (long)(off + x->size()),
                  piece.b.begin());
        out.push_back(std::move(piece));
        off += x->size();
    }
    return out;
}

ShareVec msb_bit(PartyCtx& ctx, const ShareVec& x) { return msb_bit_many(ctx, {&x})[0]; }

ShareVec eq_zero_bit(PartyCtx& ctx, const ShareVec& x) {
    int w = x.cfg.width_bits;
    size_t n = x.size();
    // x == 0  <=>  (c0 + c1) == (-c2): the left side is known to party 0,
    // the right side to parties 1 and 2; equal numbers have equal bits.
    std::vector<u128> u, v(n, 0);
    std::vector<u128>* uptr = nullptr;
    if (ctx.self() == 0) {
        u.resize(n);
        for (size_t i = 0; i < n; ++i) u[i] = x.cfg.reduce(x.a[i] + x.b[i]);
        uptr = &u;
    }
    if (ctx.self() == 1)
        for (size_t i = 0; i < n; ++i) v[i] = x.cfg.reduce((u128)0 - x.b[i]);
    if (ctx.self() == 2)
        for (size_t i = 0; i < n; ++i) v[i] = x.cfg.reduce((u128)0 - x.a[i]);

    BitMatrix U = xor_deal_bits(ctx, 0, uptr, w, n);
    BitMatrix V = inject_bits(ctx, 2, v, w);
    std::vector<ShareVec> planes((size_t)w);
    for (int p = 0; p < w; ++p)
        planes[(size_t)p] = bit_not(ctx, bit_xor(U[(size_t)p], V[(size_t)p]));
    // AND-tree
    while (planes.size() > 1) {
        size_t pairs = planes.size() / 2;
        std::vector<const ShareVec*> ls, rs;
        for (size_t k = 0; k < pairs; ++k) {
            ls.push_back(&planes[2 * k]);
            rs.push_back(&planes[2 * k + 1]);
        }
        auto prods = sec_mul_batch(ctx, ls, rs);
        std::vector<ShareVec> nextp = std::move(prods);
        if (planes.size() % 2 == 1) nextp.push_back(planes.back());
        planes = std::move(nextp);
    }
    return planes[0];
}

std::vector<ShareVec> bit_to_arith_many(PartyCtx& ctx, const std::vector<const ShareVec*>& planes,
                                        RingConfig cfg) {
    // arithmetic sharings of the three XOR components, then two XOR layers
    // on the ring: a ^ b = a + b - 2ab
    size_t m = planes.size();
    std::vector<ShareVec> A0(m), A1(m), A2(m);
    for (size_t k = 0; k < m; ++k) {
        const ShareVec& pl = *planes[k];
        size_t n = pl.size();
        std::vector<u128> mine_a(n), mine_b(n);
        for (size_t i = 0; i < n; ++i) {
            mine_a[i] = pl.a[i] & 1;
            mine_b[i] = pl.b[i] & 1;
        }
        ShareVec* comps[3] = {&A0[k], &A1[k], &A2[k]};
        for (int comp = 0; comp < 3; ++comp) {
            ShareVec sv(cfg, n);
            if (ctx.self() == comp)
                for (size_t i = 0; i < n; ++i) sv.a[i] = mine_a[i];
            if (ctx.next() == comp)
                for (size_t i = 0; i < n; ++i) sv.b[i] = mine_b[i];
            *comps[comp] = std::move(sv);
        }
    }
    auto xor_layer = [&](std::vector<ShareVec>& xs, std::vector<ShareVec>& ys) {
        std::vector<const ShareVec*> ls, rs;
        for (size_t k = 0; k < m; ++k) {
            ls.push_back(&xs[k]);
            rs.push_back(&ys[k]);
        }
        auto prods = sec_mul_batch(ctx, ls, rs);
        std::vector<ShareVec> out(m);
        for (size_t k = 0; k < m; ++k)
            out[k] = sec_sub(sec_add(xs[k], ys[k]), mul_const(prods[k], 2));
        return out;
    };
    auto t = xor_layer(A0, A1);
    return xor_layer(t, A2);
}

ShareVec bit_to_arith(PartyCtx& ctx, const ShareVec& plane, RingConfig cfg) {
    return bit_to_arith_many(ctx, {&plane}, cfg)[0];
}

}  // namespace trefoil
