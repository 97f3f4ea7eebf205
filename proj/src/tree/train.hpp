#pragma once

#include "mpc/convert.hpp"
#include "mpc/groupwise.hpp"
#include "mpc/sort.hpp"
#include "tree/model.hpp"

namespace trefoil {

// Secret-shared training dataset: m attribute vectors and a label vector on
// the small ring; attributes are pre-scaled integers (doubled quantized
// values), labels reconstruct to [0, v).
struct SecureDataset {
    std::vector<ShareVec> attrs;
    ShareVec labels;
    int v = 0;
    int scale_digits = 0;

    size_t n() const { return labels.size(); }
    size_t m() const { return attrs.size(); }
};

// Ring and fixed-point parameters of a training run.
struct TrainParams {
    RingConfig small{32};       // k
    RingConfig large{128};      // l
    int frac_bits = 0;          // f; 0 = choose 2*ceil(log2 n) at run time
};

// One secret-shared tree layer: nid plus either (attribute, threshold2) or
// the predicted label, at most min(2^k, n) rows.
struct SharedLayer {
    bool leaf = false;
    ShareVec nid;
    ShareVec f1;  // attribute index or label
    ShareVec f2;  // doubled threshold (internal layers only)
};

struct SharedModel {
    int m = 0, v = 0, h = 0, scale_digits = 0;
    std::vector<SharedLayer> layers;

    std::vector<uint8_t> serialize() const;
    static SharedModel deserialize(const std::vector<uint8_t>& bytes, RingConfig cfg);
};

// per-sample outputs of one internal layer, in input order
struct LayerOutputs {
    SharedLayer layer;
    ShareVec spat;  // split attribute index per sample
    ShareVec spth;  // doubled split threshold per sample
};

// g from a node-sorted sample-node vector: 1 at every first-of-run position.
ShareVec node_boundary_flags(PartyCtx& ctx, const ShareVec& spnd_sorted);

// split scores for grouped, attribute-sorted labels; lifted onto the large
// ring for squaring and division, truncated into k-1 bits, and reduced back.
ShareVec compute_split_scores(PartyCtx& ctx, const GroupCtx& groups, const ShareVec& labels_sorted,
                              int v, const TrainParams& params);

// per-attribute best split: scores masked at group ends and duplicate
// attribute values, then a group-wise arg-max carrying the thresholds.
struct AttrSplit {
    ShareVec threshold2;
    ShareVec score;
};
AttrSplit attribute_split_selection(PartyCtx& ctx, const GroupCtx& groups,
                                    const ShareVec& attr_sorted, const ShareVec& labels_sorted,
                                    int v, const TrainParams& params);

LayerOutputs train_internal_layer(PartyCtx& ctx, int k, const ShareVec& spnd,
                                  const SecureDataset& ds,
                                  const std::vector<SharedPermutation>& perms,
                                  const TrainParams& params);

// comparison bits between each sample's chosen attribute and threshold
ShareVec test_samples(PartyCtx& ctx, const SecureDataset& ds, const ShareVec& spat,
                      const ShareVec& spth);

// nid update 2*spnd + 1 + b (local)
ShareVec advance_spnd(PartyCtx& ctx, const ShareVec& spnd, const ShareVec& b);

void update_perms(PartyCtx& ctx, const ShareVec& b, std::vector<SharedPermutation>& perms);

SharedLayer train_leaf_layer(PartyCtx& ctx, int h, const SharedPermutation& pi0,
                             const ShareVec& spnd, const ShareVec& labels, int v);

// keeps only the first min(2^k, n) rows after moving group heads to the front
std::vector<ShareVec> format_layer(PartyCtx& ctx, int k, const ShareVec& g,
                                   const std::vector<const ShareVec*>& ws);

SharedModel train_decision_tree(PartyCtx& ctx, const SecureDataset& ds, int h,
                                const TrainParams& params);

// Opens a shared model (to one party or to all); entries with repeated nids
// (format padding) are dropped.
std::optional<TreeModel> open_model(PartyCtx& ctx, const SharedModel& model, int to_party,
                                    bool to_all = false);

}  // namespace trefoil
