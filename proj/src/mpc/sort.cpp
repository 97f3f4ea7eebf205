#include "mpc/sort.hpp"

#include <numeric>

#include "mpc/binary.hpp"

namespace trefoil {

// ---------------------------------------------------------------------------
// oblivious shuffle
//
// A random shuffle is the composition of three legs; the permutation of leg
// L is derived from the pairwise seed of (P_L, P_L+1). Within a leg the two
// holders form a two-additive sharing, permute and re-randomize locally, and
// re-share. Applying the same key to several vectors batches the traffic;
// applying the inverse legs in reverse order undoes the shuffle.

namespace {

using Perm = std::vector<uint32_t>;

Perm draw_perm(Stream& s, size_t n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0u);
    for (size_t i = n; i > 1; --i) {
        size_t j = (size_t)s.next_below(i);
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

Perm invert(const Perm& p) {
    Perm inv(p.size());
    for (size_t i = 0; i < p.size(); ++i) inv[p[i]] = (uint32_t)i;
    return inv;
}

struct ShuffleKey {
    size_t n;
    // sigma[L] is known to parties L and L+1
    std::array<Perm, 3> sigma;
    std::array<bool, 3> known{};
};

ShuffleKey gen_shuffle_key(PartyCtx& ctx, size_t n) {
    ShuffleKey key;
    key.n = n;
    int self = ctx.self();
    key.sigma[(size_t)self] = draw_perm(ctx.with_next.shuffle(), n);
    key.known[(size_t)self] = true;
    int prior = ctx.prev();
    key.sigma[(size_t)prior] = draw_perm(ctx.with_prev.shuffle(), n);
    key.known[(size_t)prior] = true;
    return key;
}

// permute out[sigma[i]] = in[i] (forward) or out[i] = in[sigma[i]] (inverse)
std::vector<u128> permute_fwd(const Perm& sigma, const std::vector<u128>& in) {
    std::vector<u128> out(in.size());
    for (size_t i = 0; i < in.size(); ++i) out[sigma[i]] = in[i];
    return out;
}

// One leg: the pair (first = P_L, second = P_L+1) permutes its two-additive
// view and re-shares. vecs are replaced by fresh sharings of the permuted
// values. `fwd` selects sigma vs its inverse.
void shuffle_leg(PartyCtx& ctx, int L, const ShuffleKey& key, bool fwd,
                 std::vector<ShareVec>& vecs) {
    int first = L, second = (L + 1) % 3, third = (L + 2) % 3;
    int self = ctx.self();
    size_t n = key.n;

    Perm sigma;
    if (key.known[(size_t)L]) {
        sigma = fwd ? key.sigma[(size_t)L] : invert(key.sigma[(size_t)L]);
    }

    // every vector is processed with the same leg in one payload per edge
    std::vector<std::vector<u128>> to_deal(vecs.size());
    for (size_t v = 0; v < vecs.size(); ++v) {
        ShareVec& sv = vecs[v];
        std::vector<u128> mine(n, 0);
        if (self == first) {
            for (size_t i = 0; i < n; ++i) mine[i] = sv.cfg.reduce(sv.a[i] + sv.b[i]);
            to_deal[v] = permute_fwd(sigma, mine);
        } else if (self == second) {
            for (size_t i = 0; i < n; ++i) mine[i] = sv.b[i];
            to_deal[v] = permute_fwd(sigma, mine);
        }
    }

    // both pair members deal their permuted halves (cheap sharing); sends
    // first, then receives, so the leg is one round at every party
    std::vector<ShareVec> dealt_first(vecs.size()), dealt_second(vecs.size());
    for (size_t v = 0; v < vecs.size(); ++v) {
        const RingConfig cfg = vecs[v].cfg;
        dealt_first[v] = ShareVec(cfg, n);
        dealt_second[v] = ShareVec(cfg, n);
        ShareVec& df = dealt_first[v];
        ShareVec& ds = dealt_second[v];
        if (self == first) {
            ctx.with_prev.input().next_ring_vec(cfg, df.a, n);
            for (size_t i = 0; i < n; ++i) df.b[i] = cfg.reduce(to_deal[v][i] - df.a[i]);
            ctx.with_next.input().next_ring_vec(cfg, ds.b, n);
        } else if (self == second) {
            ctx.with_prev.input().next_ring_vec(cfg, ds.a, n);
            for (size_t i = 0; i < n; ++i) ds.b[i] = cfg.reduce(to_deal[v][i] - ds.a[i]);
        } else {
            ctx.with_next.input().next_ring_vec(cfg, df.b, n);
        }
    }
    for (size_t v = 0; v < vecs.size(); ++v) {
        if (self == first) send_ring_vec(ctx, second, dealt_first[v].b, vecs[v].cfg);
        if (self == second) send_ring_vec(ctx, third, dealt_second[v].b, vecs[v].cfg);
    }
    for (size_t v = 0; v < vecs.size(); ++v) {
        if (self == second) dealt_first[v].a = recv_ring_vec(ctx, first, n, vecs[v].cfg);
        if (self == third) dealt_second[v].a = recv_ring_vec(ctx, second, n, vecs[v].cfg);
    }
    for (size_t v = 0; v < vecs.size(); ++v) vecs[v] = sec_add(dealt_first[v], dealt_second[v]);
}

void shuffle_apply(PartyCtx& ctx, const ShuffleKey& key, std::vector<ShareVec>& vecs) {
    for (int L = 0; L < 3; ++L) shuffle_leg(ctx, L, key, true, vecs);
}

void shuffle_unapply(PartyCtx& ctx, const ShuffleKey& key, std::vector<ShareVec>& vecs) {
    for (int L = 2; L >= 0; --L) shuffle_leg(ctx, L, key, false, vecs);
}

Perm open_shuffled_perm(PartyCtx& ctx, const ShareVec& shuffled_pi) {
    std::vector<u128> vals = open_all(ctx, shuffled_pi);
    Perm mu(vals.size());
    std::vector<bool> seen(vals.size(), false);
    for (size_t i = 0; i < vals.size(); ++i) {
        require(vals[i] < vals.size(), ErrorKind::Protocol, "opened value not a valid rank");
        mu[i] = (uint32_t)vals[i];
        require(!seen[mu[i]], ErrorKind::Protocol, "opened ranks collide");
        seen[mu[i]] = true;
    }
    return mu;
}

}  // namespace

// ---------------------------------------------------------------------------
// permutation application

std::vector<ShareVec> apply_perm_many(PartyCtx& ctx, const SharedPermutation& pi,
                                      const std::vector<const ShareVec*>& xs) {
    size_t n = pi.size();
    for (auto* x : xs)
        require(x->size() == n, ErrorKind::Invalid, "length mismatch with permutation");
    ShuffleKey key = gen_shuffle_key(ctx, n);
    std::vector<ShareVec> batch;
    batch.push_back(pi);
    for (auto* x : xs) batch.push_back(*x);
    shuffle_apply(ctx, key, batch);
    Perm mu = open_shuffled_perm(ctx, batch[0]);  // pi composed with the mask
    std::vector<ShareVec> out;
    for (size_t v = 1; v < batch.size(); ++v) {
        ShareVec z(batch[v].cfg, n);
        for (size_t j = 0; j < n; ++j) {
            z.a[mu[j]] = batch[v].a[j];
            z.b[mu[j]] = batch[v].b[j];
        }
        out.push_back(std::move(z));
    }
    return out;
}

std::vector<ShareVec> unapply_perm_many(PartyCtx& ctx, const SharedPermutation& pi,
                                        const std::vector<const ShareVec*>& xs) {
    size_t n = pi.size();
    for (auto* x : xs)
        require(x->size() == n, ErrorKind::Invalid, "length mismatch with permutation");
    ShuffleKey key = gen_shuffle_key(ctx, n);
    std::vector<ShareVec> pibatch{pi};
    shuffle_apply(ctx, key, pibatch);
    Perm mu = open_shuffled_perm(ctx, pibatch[0]);
    std::vector<ShareVec> ys;
    for (auto* x : xs) {
        ShareVec y(x->cfg, n);
        for (size_t j = 0; j < n; ++j) {
            y.a[j] = x->a[mu[j]];
            y.b[j] = x->b[mu[j]];
        }
        ys.push_back(std::move(y));
    }
    shuffle_unapply(ctx, key, ys);
    return ys;
}

ShareVec apply_perm(PartyCtx& ctx, const SharedPermutation& pi, const ShareVec& x) {
    return apply_perm_many(ctx, pi, {&x})[0];
}

ShareVec unapply_perm(PartyCtx& ctx, const SharedPermutation& pi, const ShareVec& x) {
    return unapply_perm_many(ctx, pi, {&x})[0];
}

SharedPermutation compose_perms(PartyCtx& ctx, const SharedPermutation& alpha,
                                const SharedPermutation& beta) {
    require(alpha.size() == beta.size(), ErrorKind::Invalid, "length mismatch");
    // pi[i] = beta[alpha[i]] is exactly reading beta at alpha's positions
    return unapply_perm(ctx, alpha, beta);
}

// ---------------------------------------------------------------------------
// bit decomposition and rank generation

std::vector<ShareVec> bit_vec_dec(PartyCtx& ctx, const ShareVec& x, int nbits) {
    int w = x.cfg.width_bits;
    if (nbits == 0) nbits = w;
    require(nbits >= 1 && nbits <= w, ErrorKind::Invalid, "bad bit count");
    BitMatrix planes = decompose_low_bits(ctx, x, nbits);
    std::vector<const ShareVec*> ptrs;
    for (auto& p : planes) ptrs.push_back(&p);
    return bit_to_arith_many(ctx, ptrs, x.cfg);
}

SharedPermutation gen_perm_by_bit(PartyCtx& ctx, const ShareVec& bits) {
    const RingConfig cfg = bits.cfg;
    size_t n = bits.size();
    // ranks: zeros get their prefix count of zeros, ones get (#zeros) plus
    // their prefix count of ones; one multiplication layer selects
    ShareVec ones = share_public_scalar(ctx, 1, cfg, n);
    ShareVec zeros_flag = sec_sub(ones, bits);
    ShareVec pz_incl = prefix_sum(zeros_flag);
    ShareVec po_incl = prefix_sum(bits);
    ShareVec pz = sec_sub(pz_incl, zeros_flag);  // exclusive prefixes
    ShareVec po = sec_sub(po_incl, bits);
    RepShare z = at(pz_incl, n - 1);  // total zeros
    ShareVec zbro(cfg, n);
    for (size_t i = 0; i < n; ++i) {
        zbro.a[i] = z.a;
        zbro.b[i] = z.b;
    }
    ShareVec delta = sec_sub(sec_add(zbro, po), pz);
    ShareVec sel = sec_mul(ctx, bits, delta);
    return sec_add(pz, sel);
}

SharedPermutation gen_perm(PartyCtx& ctx, const ShareVec& x, int bound_bits) {
    ++ctx.stats.gen_perm_count;
    const int w = x.cfg.width_bits;
    ShareVec keyed = x;
    int nbits = w;
    if (bound_bits > 0) {
        require(bound_bits <= w, ErrorKind::Invalid, "bound exceeds ring width");
        nbits = bound_bits;
    } else {
        // signed order = unsigned order of x + 2^(w-1)
        keyed = add_const(ctx, x, x.cfg.sign_bit());
    }
    std::vector<ShareVec> bits = bit_vec_dec(ctx, keyed, nbits);
    SharedPermutation pi = gen_perm_by_bit(ctx, bits[0]);
    for (int j = 1; j < nbits; ++j) {
        ShareVec reordered = apply_perm(ctx, pi, bits[(size_t)j]);
        SharedPermutation alpha = gen_perm_by_bit(ctx, reordered);
        pi = compose_perms(ctx, pi, alpha);
    }
    return pi;
}

}  // namespace trefoil
