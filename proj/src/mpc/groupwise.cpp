#include "mpc/groupwise.hpp"

namespace trefoil {

namespace {

// tail flags: last element of each group (head flags shifted left, 1 at the
// end); local on shares plus one public constant.
ShareVec tails_from_heads(PartyCtx& ctx, const ShareVec& g) {
    size_t n = g.size();
    ShareVec t(g.cfg, n);
    for (size_t i = 0; i + 1 < n; ++i) {
        t.a[i] = g.a[i + 1];
        t.b[i] = g.b[i + 1];
    }
    ShareVec one = share_public_scalar(ctx, 1, g.cfg, 1);
    t.a[n - 1] = one.a[0];
    t.b[n - 1] = one.b[0];
    return t;
}

}  // namespace

GroupCtx::GroupCtx(PartyCtx& ctx, const ShareVec& flags) : g_(flags) {
    require(flags.size() >= 1, ErrorKind::Invalid, "empty group vector");
    ShareVec one = share_public_scalar(ctx, 1, g_.cfg, g_.size());
    tail_ = tails_from_heads(ctx, g_);
    rg_ = reverse(tail_);
    rtail_ = reverse(g_);
    head_perm_ = gen_perm_by_bit(ctx, sec_sub(one, g_));
    tail_perm_ = gen_perm_by_bit(ctx, sec_sub(one, tail_));
    rhead_perm_ = gen_perm_by_bit(ctx, sec_sub(one, rg_));
    rtail_perm_ = gen_perm_by_bit(ctx, sec_sub(one, rtail_));
}

ShareVec GroupCtx::suffix_after(PartyCtx& ctx, const ShareVec& x, const ShareVec& g,
                                const SharedPermutation& hp, const SharedPermutation& tp) const {
    ShareVec s_incl = trefoil::prefix_sum(x);
    ShareVec s_excl = sec_sub(s_incl, x);
    // group totals land on slots 0..G-1 as tail-aligned minus head-aligned
    // global prefixes, then return to the heads and spread by a prefix sum
    ShareVec S = apply_perm(ctx, hp, s_excl);
    ShareVec T = apply_perm(ctx, tp, s_incl);
    ShareVec D = sec_sub(T, S);
    ShareVec W = unapply_perm(ctx, hp, D);
    ShareVec V = sec_mul(ctx, W, g);
    ShareVec c = trefoil::prefix_sum(V);
    return sec_sub(c, s_incl);
}

GroupCtx::Sums GroupCtx::sums(PartyCtx& ctx, const ShareVec& x) const {
    require(x.size() == size(), ErrorKind::Invalid, "length mismatch");
    ShareVec sa = suffix_after(ctx, x, g_, head_perm_, tail_perm_);
    ShareVec sar = suffix_after(ctx, reverse(x), rg_, rhead_perm_, rtail_perm_);
    ShareVec before = reverse(sar);  // strictly-before-within-group
    Sums out{sec_add(before, x), ShareVec{}};
    out.total = sec_add(out.prefix, sa);
    return out;
}

ShareVec GroupCtx::sum(PartyCtx& ctx, const ShareVec& x) const { return sums(ctx, x).total; }

ShareVec GroupCtx::prefix_sum(PartyCtx& ctx, const ShareVec& x) const {
    return sums(ctx, x).prefix;
}

// ---------------------------------------------------------------------------
// segmented max by doubling

namespace {

struct ScanState {
    ShareVec canlook;              // window still inside the group
    std::vector<ShareVec> tracks;  // tracks[0] = compared values, rest payloads
};

// one doubling level: candidates sit `offset` to the left; `prefer_cand_ties`
// selects the candidate on equal values (used by the mirrored pass)
void scan_level(PartyCtx& ctx, ScanState& st, size_t offset, bool prefer_cand_ties) {
    const ShareVec& v = st.tracks[0];
    ShareVec cand = shift_up(v, offset);
    ShareVec take = sec_lt(ctx, v, cand);  // strictly greater candidate wins
    if (prefer_cand_ties) {
        // candidate also wins ties: take = 1 - (cand < v)
        ShareVec lt2 = sec_lt(ctx, cand, v);
        ShareVec one = share_public_scalar(ctx, 1, v.cfg, v.size());
        take = sec_sub(one, lt2);
    }
    ShareVec gated = sec_mul(ctx, take, st.canlook);
    ShareVec cl_shift = shift_up(st.canlook, offset);

    std::vector<ShareVec> diffs;
    std::vector<const ShareVec*> ls, rs;
    for (auto& tr : st.tracks) {
        diffs.push_back(sec_sub(shift_up(tr, offset), tr));
    }
    for (auto& d : diffs) {
        ls.push_back(&gated);
        rs.push_back(&d);
    }
    ls.push_back(&st.canlook);
    rs.push_back(&cl_shift);
    auto prods = sec_mul_batch(ctx, ls, rs);
    for (size_t t = 0; t < st.tracks.size(); ++t)
        st.tracks[t] = sec_add(st.tracks[t], prods[t]);
    st.canlook = std::move(prods.back());
}

// prefix pass: tracks[i] ends as the group-prefix max (and payloads at its
// last attaining position when prefer_cand_ties is false)
void segmented_scan(PartyCtx& ctx, ScanState& st, bool prefer_cand_ties) {
    size_t n = st.tracks[0].size();
    for (size_t o = 1; o < n; o *= 2) scan_level(ctx, st, o, prefer_cand_ties);
}

}  // namespace

std::pair<ShareVec, ShareVec> GroupCtx::max_pair(PartyCtx& ctx, const ShareVec& x,
                                                 const ShareVec& y) const {
    require(x.size() == size() && y.size() == size(), ErrorKind::Invalid, "length mismatch");
    require(x.cfg == g_.cfg && y.cfg == g_.cfg, ErrorKind::Config, "ring config mismatch");
    const RingConfig cfg = x.cfg;
    size_t n = x.size();
    ShareVec one = share_public_scalar(ctx, 1, cfg, n);

    // forward: prefix max over [f(i), i], ties toward the later element
    ScanState fwd{sec_sub(one, g_), {x, y}};
    segmented_scan(ctx, fwd, false);

    // mirrored: suffix max over [i, l(i)], ties toward the original-later
    // element (candidate side on the reversed axis)
    ScanState bwd{sec_sub(one, rg_), {reverse(x), reverse(y)}};
    segmented_scan(ctx, bwd, true);
    ShareVec bv = reverse(bwd.tracks[0]);
    ShareVec bp = reverse(bwd.tracks[1]);

    // combine; on equal maxima the suffix side holds the last argmax
    ShareVec lt2 = sec_lt(ctx, bv, fwd.tracks[0]);
    ShareVec take_fwd = lt2;
    ShareVec dv = sec_sub(fwd.tracks[0], bv);
    ShareVec dp = sec_sub(fwd.tracks[1], bp);
    auto prods = sec_mul_batch(ctx, {&take_fwd, &take_fwd}, {&dv, &dp});
    return {sec_add(bv, prods[0]), sec_add(bp, prods[1])};
}

ShareVec GroupCtx::max(PartyCtx& ctx, const ShareVec& x) const {
    return max_pair(ctx, x, x).first;
}

ShareVec group_sum(PartyCtx& ctx, const ShareVec& g, const ShareVec& x) {
    return GroupCtx(ctx, g).sum(ctx, x);
}

ShareVec group_prefix_sum(PartyCtx& ctx, const ShareVec& g, const ShareVec& x) {
    return GroupCtx(ctx, g).prefix_sum(ctx, x);
}

ShareVec group_max(PartyCtx& ctx, const ShareVec& g, const ShareVec& x) {
    return GroupCtx(ctx, g).max(ctx, x);
}

std::pair<ShareVec, ShareVec> group_max_pair(PartyCtx& ctx, const ShareVec& g, const ShareVec& x,
                                             const ShareVec& y) {
    return GroupCtx(ctx, g).max_pair(ctx, x, y);
}

// ---------------------------------------------------------------------------
// vector max

std::vector<ShareVec> vect_max_cols(PartyCtx& ctx, const std::vector<const ShareVec*>& values,
                                    const std::vector<std::vector<const ShareVec*>>& payloads) {
    require(!values.empty(), ErrorKind::Invalid, "empty input");
    size_t rows = values.size();
    for (auto& pl : payloads)
        require(pl.size() == rows, ErrorKind::Invalid, "payload row count mismatch");

    // working copies: tracks[t][r]
    std::vector<std::vector<ShareVec>> tracks(1 + payloads.size());
    for (size_t r = 0; r < rows; ++r) tracks[0].push_back(*values[r]);
    for (size_t p = 0; p < payloads.size(); ++p)
        for (size_t r = 0; r < rows; ++r) tracks[p + 1].push_back(*payloads[p][r]);

    while (tracks[0].size() > 1) {
        size_t m = tracks[0].size();
        size_t pairs = m / 2;
        // winner of (earlier 2t, later 2t+1): later unless earlier is greater
        ShareVec earlier(tracks[0][0].cfg, 0), later(tracks[0][0].cfg, 0);
        for (size_t t = 0; t < pairs; ++t) {
            append(later, tracks[0][2 * t + 1]);
            append(earlier, tracks[0][2 * t]);
        }
        ShareVec take = sec_lt(ctx, later, earlier);
        size_t n = tracks[0][0].size();
        std::vector<std::vector<ShareVec>> next(tracks.size());
        std::vector<ShareVec> takes(pairs);
        for (size_t t = 0; t < pairs; ++t) takes[t] = slice(take, t * n, n);
        std::vector<const ShareVec*> ls, rs;
        std::vector<ShareVec> diffs;
        diffs.reserve(pairs * tracks.size());
        for (size_t t = 0; t < pairs; ++t)
            for (size_t tr = 0; tr < tracks.size(); ++tr)
                diffs.push_back(sec_sub(tracks[tr][2 * t], tracks[tr][2 * t + 1]));
        for (size_t t = 0; t < pairs; ++t)
            for (size_t tr = 0; tr < tracks.size(); ++tr) {
                ls.push_back(&takes[t]);
                rs.push_back(&diffs[t * tracks.size() + tr]);
            }
        auto prods = sec_mul_batch(ctx, ls, rs);
        for (size_t t = 0; t < pairs; ++t)
            for (size_t tr = 0; tr < tracks.size(); ++tr)
                next[tr].push_back(
                    sec_add(tracks[tr][2 * t + 1], prods[t * tracks.size() + tr]));
        if (m % 2 == 1)
            for (size_t tr = 0; tr < tracks.size(); ++tr) next[tr].push_back(tracks[tr].back());
        tracks = std::move(next);
    }
    std::vector<ShareVec> out;
    for (size_t p = 0; p < payloads.size(); ++p) out.push_back(tracks[p + 1][0]);
    if (payloads.empty()) out.push_back(tracks[0][0]);
    return out;
}

RepShare vect_max(PartyCtx& ctx, const ShareVec& x, const ShareVec& y) {
    require(x.size() == y.size() && x.size() >= 1, ErrorKind::Invalid,
            "vectors must be non-empty and equal length");
    // treat elements as rows of width 1
    std::vector<ShareVec> vrows, prows;
    std::vector<const ShareVec*> vptr;
    std::vector<std::vector<const ShareVec*>> pptr(1);
    for (size_t i = 0; i < x.size(); ++i) {
        vrows.push_back(slice(x, i, 1));
        prows.push_back(slice(y, i, 1));
    }
    for (size_t i = 0; i < x.size(); ++i) {
        vptr.push_back(&vrows[i]);
        pptr[0].push_back(&prows[i]);
    }
    ShareVec win = vect_max_cols(ctx, vptr, pptr)[0];
    return at(win, 0);
}

}  // namespace trefoil
