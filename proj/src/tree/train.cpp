#include "tree/train.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace trefoil {

namespace {

int ceil_log2(size_t n) {
    int b = 0;
    while (((size_t)1 << b) < n) ++b;
    return b;
}

// daBit demand of one compute_split_scores call (conversions plus the
// division's internal truncations), used to provision pools up front.
size_t dabits_per_score_call(size_t n, int v, int f, bool with_trunc) {
    int iters = 1;
    while ((1 << iters) < f) ++iters;
    if (iters < 2) iters = 2;
    size_t truncs_in_div = (size_t)(2 * iters + 1);
    size_t total = (2 + 2 * (size_t)v) * n        // share lifts
                   + 2 * truncs_in_div * n        // two divisions
                   + (with_trunc ? n : 0);        // final score truncation
    return total;
}

}  // namespace

ShareVec node_boundary_flags(PartyCtx& ctx, const ShareVec& spnd_sorted) {
    size_t n = spnd_sorted.size();
    const RingConfig cfg = spnd_sorted.cfg;
    ShareVec one = share_public_scalar(ctx, 1, cfg, 1);
    ShareVec flags(cfg, n);
    set_at(flags, 0, at(one, 0));
    if (n == 1) return flags;
    ShareVec eq = sec_eq(ctx, slice(spnd_sorted, 0, n - 1), slice(spnd_sorted, 1, n - 1));
    ShareVec neq = sec_sub(share_public_scalar(ctx, 1, cfg, n - 1), eq);
    for (size_t j = 1; j < n; ++j) set_at(flags, j, at(neq, j - 1));
    return flags;
}

ShareVec compute_split_scores(PartyCtx& ctx, const GroupCtx& groups,
                              const ShareVec& labels_sorted, int v, const TrainParams& params) {
    const RingConfig kcfg = params.small;
    RingConfig lcfg = params.large;
    const size_t n = labels_sorted.size();
    const int logn = ceil_log2(n);
    const int f = params.frac_bits > 0 ? params.frac_bits : 2 * std::max(1, logn);
    lcfg.frac_bits = f;
    const int trunc_amount = f + logn - (kcfg.width_bits - 1);

    ctx.ensure_dabits(lcfg.width_bits,
                      dabits_per_score_call(n, v, f, trunc_amount > 0));
    ConversionContext lift(kcfg, lcfg, &ctx.dabit_pool(lcfg.width_bits));

    // side sizes per split position
    ShareVec ones = share_public_scalar(ctx, 1, kcfg, n);
    GroupCtx::Sums sz = groups.sums(ctx, ones);
    ShareVec ps_small = sz.prefix;
    ShareVec ss_small = sec_sub(sz.total, ps_small);
    ShareVec ps = convert_share(ctx, ps_small, lift);
    ShareVec ss = convert_share(ctx, ss_small, lift);

    // per-label squared side counts, accumulated on the large ring
    ShareVec presqs(lcfg, n), sufsqs(lcfg, n);
    for (int l = 0; l < v; ++l) {
        ShareVec is_l = sec_eq_const(ctx, labels_sorted, (u128)l);
        GroupCtx::Sums cs = groups.sums(ctx, is_l);
        ShareVec pre_small = cs.prefix;
        ShareVec suf_small = sec_sub(cs.total, pre_small);
        ShareVec pre = convert_share(ctx, pre_small, lift);
        ShareVec suf = convert_share(ctx, suf_small, lift);
        auto sq = sec_mul_batch(ctx, {&pre, &suf}, {&pre, &suf});
        presqs = sec_add(presqs, sq[0]);
        sufsqs = sec_add(sufsqs, sq[1]);
    }

    // score = presqs/ps + sufsqs/ss in fixed point; ss is zero only at
    // positions the caller masks, where the quotient is garbage but bounded
    ShareVec q1 = sec_div(ctx, presqs, ps);
    ShareVec q2 = sec_div(ctx, sufsqs, ss);
    ShareVec score = sec_add(q1, q2);

    // keep the top k-1 bits when the f-scaled score outgrows the small ring
    if (trunc_amount > 0) score = sec_trunc(ctx, score, trunc_amount);
    return convert_down(score, kcfg);
}

AttrSplit attribute_split_selection(PartyCtx& ctx, const GroupCtx& groups,
                                    const ShareVec& attr_sorted, const ShareVec& labels_sorted,
                                    int v, const TrainParams& params) {
    const RingConfig kcfg = params.small;
    const size_t n = attr_sorted.size();
    ShareVec score = compute_split_scores(ctx, groups, labels_sorted, v, params);

    // candidate thresholds: doubled midpoints (adjacent sums); the final
    // position falls back to twice the last value
    ShareVec thr(kcfg, n);
    for (size_t j = 0; j + 1 < n; ++j) {
        thr.a[j] = kcfg.reduce(attr_sorted.a[j] + attr_sorted.a[j + 1]);
        thr.b[j] = kcfg.reduce(attr_sorted.b[j] + attr_sorted.b[j + 1]);
    }
    thr.a[n - 1] = kcfg.reduce(2 * attr_sorted.a[n - 1]);
    thr.b[n - 1] = kcfg.reduce(2 * attr_sorted.b[n - 1]);

    // invalid positions: last of a group, or equal adjacent attribute values
    ShareVec masked(kcfg, n);
    {
        ShareVec eq_adj(kcfg, 0);
        if (n > 1)
            eq_adj = sec_eq(ctx, slice(attr_sorted, 0, n - 1), slice(attr_sorted, 1, n - 1));
        // group end flag = flags shifted by one (with 1 at the end)
        const ShareVec& g = groups.flags();
        ShareVec gend(kcfg, n);
        for (size_t j = 0; j + 1 < n; ++j) {
            gend.a[j] = g.a[j + 1];
            gend.b[j] = g.b[j + 1];
        }
        ShareVec one = share_public_scalar(ctx, 1, kcfg, 1);
        gend.a[n - 1] = one.a[0];
        gend.b[n - 1] = one.b[0];
        if (n > 1) {
            ShareVec eq_full(kcfg, n);
            for (size_t j = 0; j + 1 < n; ++j) {
                eq_full.a[j] = eq_adj.a[j];
                eq_full.b[j] = eq_adj.b[j];
            }
            // p = gend OR eq = gend + eq - gend*eq
            ShareVec prod = sec_mul(ctx, gend, eq_full);
            masked = sec_sub(sec_add(gend, eq_full), prod);
        } else {
            masked = gend;
        }
    }

    // score becomes MinValue at masked positions, unchanged otherwise
    ShareVec min_v = share_public_scalar(ctx, kcfg.min_signed(), kcfg, n);
    ShareVec delta = sec_sub(min_v, score);
    ShareVec sel = sec_mul(ctx, masked, delta);
    score = sec_add(score, sel);

    auto [best_score, best_thr] = groups.max_pair(ctx, score, thr);
    return AttrSplit{std::move(best_thr), std::move(best_score)};
}

LayerOutputs train_internal_layer(PartyCtx& ctx, int k, const ShareVec& spnd,
                                  const SecureDataset& ds,
                                  const std::vector<SharedPermutation>& perms,
                                  const TrainParams& params) {
    const RingConfig kcfg = params.small;
    const size_t n = ds.n();
    const size_t m = ds.m();

    ShareVec spnd_sorted = apply_perm(ctx, perms[0], spnd);
    ShareVec g = node_boundary_flags(ctx, spnd_sorted);
    GroupCtx groups(ctx, g);

    std::vector<ShareVec> scores(m), thrs(m);
    for (size_t i = 0; i < m; ++i) {
        auto applied = apply_perm_many(ctx, perms[i], {&ds.labels, &ds.attrs[i]});
        AttrSplit split =
            attribute_split_selection(ctx, groups, applied[1], applied[0], ds.v, params);
        scores[i] = std::move(split.score);
        thrs[i] = std::move(split.threshold2);
    }

    // across attributes: the winner's index and threshold per position
    std::vector<ShareVec> attr_idx(m);
    for (size_t i = 0; i < m; ++i) attr_idx[i] = share_public_scalar(ctx, (u128)i, kcfg, n);
    std::vector<const ShareVec*> vals;
    std::vector<std::vector<const ShareVec*>> payloads(2);
    for (size_t i = 0; i < m; ++i) {
        vals.push_back(&scores[i]);
        payloads[0].push_back(&attr_idx[i]);
        payloads[1].push_back(&thrs[i]);
    }
    auto win = vect_max_cols(ctx, vals, payloads);
    ShareVec spat = std::move(win[0]);
    ShareVec spth = std::move(win[1]);

    LayerOutputs out;
    auto formatted = format_layer(ctx, k, g, {&spnd_sorted, &spat, &spth});
    out.layer.leaf = false;
    out.layer.nid = std::move(formatted[0]);
    out.layer.f1 = std::move(formatted[1]);
    out.layer.f2 = std::move(formatted[2]);
    auto unapplied = unapply_perm_many(ctx, perms[0], {&spat, &spth});
    out.spat = std::move(unapplied[0]);
    out.spth = std::move(unapplied[1]);
    return out;
}

ShareVec test_samples(PartyCtx& ctx, const SecureDataset& ds, const ShareVec& spat,
                      const ShareVec& spth) {
    const RingConfig kcfg = spat.cfg;
    const size_t n = ds.n();
    const size_t m = ds.m();
    // one-hot select each sample's attribute value
    std::vector<ShareVec> eq(m);
    for (size_t i = 0; i < m; ++i) eq[i] = sec_eq_const(ctx, spat, (u128)i);
    std::vector<const ShareVec*> ls, rs;
    for (size_t i = 0; i < m; ++i) {
        ls.push_back(&eq[i]);
        rs.push_back(&ds.attrs[i]);
    }
    auto prods = sec_mul_batch(ctx, ls, rs);
    ShareVec x(kcfg, n);
    for (size_t i = 0; i < m; ++i) x = sec_add(x, prods[i]);
    // threshold comparison on doubled values keeps midpoints exact
    return sec_lt(ctx, mul_const(x, 2), spth);
}

ShareVec advance_spnd(PartyCtx& ctx, const ShareVec& spnd, const ShareVec& b) {
    require(spnd.size() == b.size(), ErrorKind::Invalid, "length mismatch");
    return add_const(ctx, sec_add(mul_const(spnd, 2), b), 1);
}

void update_perms(PartyCtx& ctx, const ShareVec& b, std::vector<SharedPermutation>& perms) {
    require(!perms.empty(), ErrorKind::Invalid, "no permutations");
    for (auto& pi : perms) {
        ShareVec reordered = apply_perm(ctx, pi, b);
        SharedPermutation alpha = gen_perm_by_bit(ctx, reordered);
        pi = compose_perms(ctx, pi, alpha);
    }
}

SharedLayer train_leaf_layer(PartyCtx& ctx, int h, const SharedPermutation& pi0,
                             const ShareVec& spnd, const ShareVec& labels, int v) {
    const RingConfig kcfg = labels.cfg;
    const size_t n = labels.size();
    auto applied = apply_perm_many(ctx, pi0, {&labels, &spnd});
    ShareVec ylab = std::move(applied[0]);
    ShareVec spnd_sorted = std::move(applied[1]);
    ShareVec g = node_boundary_flags(ctx, spnd_sorted);
    GroupCtx groups(ctx, g);

    std::vector<ShareVec> counts((size_t)v), label_consts((size_t)v);
    for (int l = 0; l < v; ++l) {
        ShareVec is_l = sec_eq_const(ctx, ylab, (u128)l);
        counts[(size_t)l] = groups.sum(ctx, is_l);
        label_consts[(size_t)l] = share_public_scalar(ctx, (u128)l, kcfg, n);
    }
    std::vector<const ShareVec*> vals;
    std::vector<std::vector<const ShareVec*>> payloads(1);
    for (int l = 0; l < v; ++l) {
        vals.push_back(&counts[(size_t)l]);
        payloads[0].push_back(&label_consts[(size_t)l]);
    }
    ShareVec splb = std::move(vect_max_cols(ctx, vals, payloads)[0]);

    auto formatted = format_layer(ctx, h, g, {&spnd_sorted, &splb});
    SharedLayer layer;
    layer.leaf = true;
    layer.nid = std::move(formatted[0]);
    layer.f1 = std::move(formatted[1]);
    return layer;
}

std::vector<ShareVec> format_layer(PartyCtx& ctx, int k, const ShareVec& g,
                                   const std::vector<const ShareVec*>& ws) {
    size_t n = g.size();
    ShareVec ones = share_public_scalar(ctx, 1, g.cfg, n);
    SharedPermutation alpha = gen_perm_by_bit(ctx, sec_sub(ones, g));
    auto moved = apply_perm_many(ctx, alpha, ws);
    size_t keep = n;
    if (k < 62) keep = std::min<size_t>(n, (size_t)1 << k);
    std::vector<ShareVec> out;
    for (auto& w : moved) out.push_back(slice(w, 0, keep));
    return out;
}

SharedModel train_decision_tree(PartyCtx& ctx, const SecureDataset& ds, int h,
                                const TrainParams& params) {
    require(h >= 1 && ds.n() >= 1 && ds.m() >= 1, ErrorKind::Invalid,
            "need h >= 1 and a non-empty dataset");
    require(h <= params.small.width_bits - 2, ErrorKind::Config,
            "tree height exceeds nid range");
    const RingConfig kcfg = params.small;

    SharedModel model;
    model.m = (int)ds.m();
    model.v = ds.v;
    model.h = h;
    model.scale_digits = ds.scale_digits;

    std::vector<SharedPermutation> perms;
    perms.reserve(ds.m());
    for (size_t i = 0; i < ds.m(); ++i) perms.push_back(gen_perm(ctx, ds.attrs[i]));
    ShareVec spnd(kcfg, ds.n());  // all zeros: every sample at the root

    for (int k = 0; k < h; ++k) {
        LayerOutputs lo = train_internal_layer(ctx, k, spnd, ds, perms, params);
        model.layers.push_back(std::move(lo.layer));
        ShareVec b = test_samples(ctx, ds, lo.spat, lo.spth);
        spnd = advance_spnd(ctx, spnd, b);
        update_perms(ctx, b, perms);
    }
    model.layers.push_back(train_leaf_layer(ctx, h, perms[0], spnd, ds.labels, ds.v));
    return model;
}

// ---------------------------------------------------------------------------
// opening and serialization

std::optional<TreeModel> open_model(PartyCtx& ctx, const SharedModel& model, int to_party,
                                    bool to_all) {
    std::vector<std::vector<u128>> opened_nid, opened_f1, opened_f2;
    for (const auto& layer : model.layers) {
        auto do_open = [&](const ShareVec& sv) -> std::optional<std::vector<u128>> {
            if (to_all) return open_all(ctx, sv, true);
            return open_to(ctx, sv, to_party, true);
        };
        auto nid = do_open(layer.nid);
        auto f1 = do_open(layer.f1);
        std::optional<std::vector<u128>> f2;
        if (!layer.leaf) f2 = do_open(layer.f2);
        if (!nid) continue;
        opened_nid.push_back(*nid);
        opened_f1.push_back(*f1);
        opened_f2.push_back(layer.leaf ? std::vector<u128>{} : *f2);
    }
    if (!to_all && ctx.self() != to_party) return std::nullopt;

    TreeModel out;
    out.m = model.m;
    out.v = model.v;
    out.h = model.h;
    out.scale_digits = model.scale_digits;
    out.internal_layers.resize((size_t)model.h);
    const RingConfig kcfg = model.layers[0].nid.cfg;
    for (size_t k = 0; k < model.layers.size(); ++k) {
        bool leaf = model.layers[k].leaf;
        // format padding repeats an already-seen nid; everything before the
        // first repeat is a genuine group head
        std::set<uint64_t> seen;
        for (size_t j = 0; j < opened_nid[k].size(); ++j) {
            uint64_t nid = (uint64_t)opened_nid[k][j];
            if (!seen.insert(nid).second) break;
            if (leaf) {
                out.leaves.push_back(TreeModel::Leaf{nid, (uint64_t)opened_f1[k][j]});
            } else {
                out.internal_layers[k].push_back(TreeModel::Internal{
                    nid, (uint64_t)opened_f1[k][j], kcfg.to_signed(opened_f2[k][j])});
            }
        }
        if (leaf) {
            std::sort(out.leaves.begin(), out.leaves.end(),
                      [](const TreeModel::Leaf& a, const TreeModel::Leaf& b) {
                          return a.nid < b.nid;
                      });
        } else {
            std::sort(out.internal_layers[k].begin(), out.internal_layers[k].end(),
                      [](const TreeModel::Internal& a, const TreeModel::Internal& b) {
                          return a.nid < b.nid;
                      });
        }
    }
    return out;
}

std::vector<uint8_t> SharedModel::serialize() const {
    std::vector<uint8_t> out;
    auto push32 = [&](uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back((uint8_t)(v >> (8 * i)));
    };
    out.insert(out.end(), {'t', 'f', 'm', '1'});
    push32((uint32_t)m);
    push32((uint32_t)v);
    push32((uint32_t)h);
    push32((uint32_t)scale_digits);
    push32((uint32_t)layers.size());
    for (const auto& layer : layers) {
        out.push_back(layer.leaf ? 1 : 0);
        RingConfig cfg = layer.nid.cfg;
        push32((uint32_t)cfg.width_bits);
        for (const ShareVec* sv : {&layer.nid, &layer.f1}) {
            auto a = serialize_values(sv->a, cfg);
            auto b = serialize_values(sv->b, cfg);
            out.insert(out.end(), a.begin(), a.end());
            out.insert(out.end(), b.begin(), b.end());
        }
        if (!layer.leaf) {
            auto a = serialize_values(layer.f2.a, cfg);
            auto b = serialize_values(layer.f2.b, cfg);
            out.insert(out.end(), a.begin(), a.end());
            out.insert(out.end(), b.begin(), b.end());
        }
    }
    return out;
}

SharedModel SharedModel::deserialize(const std::vector<uint8_t>& bytes, RingConfig cfg) {
    size_t off = 0;
    auto need = [&](size_t n) {
        require(off + n <= bytes.size(), ErrorKind::Load, "truncated shared model");
    };
    need(4);
    require(bytes[0] == 't' && bytes[1] == 'f' && bytes[2] == 'm' && bytes[3] == '1',
            ErrorKind::Load, "bad shared-model magic");
    off = 4;
    auto read32 = [&]() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= (uint32_t)bytes[off + (size_t)i] << (8 * i);
        off += 4;
        return v;
    };
    SharedModel out;
    out.m = (int)read32();
    out.v = (int)read32();
    out.h = (int)read32();
    out.scale_digits = (int)read32();
    uint32_t nlayers = read32();
    auto read_vec = [&](RingConfig c) {
        need(4);
        uint32_t count = 0;
        for (int i = 0; i < 4; ++i) count |= (uint32_t)bytes[off + (size_t)i] << (8 * i);
        size_t total = 4 + (size_t)count * c.byte_size();
        need(total);
        auto vals = parse_values(bytes.data() + off, total, c);
        off += total;
        return vals;
    };
    for (uint32_t k = 0; k < nlayers; ++k) {
        need(1);
        SharedLayer layer;
        layer.leaf = bytes[off++] != 0;
        uint32_t width = read32();
        RingConfig c((int)width, cfg.frac_bits);
        auto fill = [&](ShareVec& sv) {
            auto a = read_vec(c);
            auto b = read_vec(c);
            sv = ShareVec(c, a.size());
            sv.a = a;
            sv.b = b;
        };
        fill(layer.nid);
        fill(layer.f1);
        if (!layer.leaf) fill(layer.f2);
        out.layers.push_back(std::move(layer));
    }
    return out;
}

}  // namespace trefoil
