#pragma once

#include "mpc/sort.hpp"

namespace trefoil {

// Group-wise aggregation over contiguous groups marked by a flag vector
// (g[0] = 1, g[i] = 1 exactly at the first element of each group).
//
// Sums and prefix sums cost a constant number of rounds: group totals are
// read off as differences of global prefix sums brought head-to-head by the
// head/tail rank permutations, once per direction. Building a GroupCtx runs
// those rank generations once so repeated aggregations under the same flags
// reuse them.
class GroupCtx {
  public:
    GroupCtx(PartyCtx& ctx, const ShareVec& flags);

    const ShareVec& flags() const { return g_; }
    size_t size() const { return g_.size(); }

    // z[i] = sum of x over i's group
    ShareVec sum(PartyCtx& ctx, const ShareVec& x) const;
    // z[i] = sum of x from the group head through i
    ShareVec prefix_sum(PartyCtx& ctx, const ShareVec& x) const;
    struct Sums {
        ShareVec prefix;
        ShareVec total;
    };
    Sums sums(PartyCtx& ctx, const ShareVec& x) const;

    // z[i] = max of x over i's group (signed); the pair form also returns the
    // companion values at the argmax, ties resolved toward the LAST maximal
    // element of the group.
    ShareVec max(PartyCtx& ctx, const ShareVec& x) const;
    std::pair<ShareVec, ShareVec> max_pair(PartyCtx& ctx, const ShareVec& x,
                                           const ShareVec& y) const;

  private:
    ShareVec g_;           // head flags
    ShareVec tail_;        // tail flags (derived locally from g)
    ShareVec rg_, rtail_;  // flags of the reversed axis
    SharedPermutation head_perm_, tail_perm_;    // ranks bringing heads/tails front
    SharedPermutation rhead_perm_, rtail_perm_;  // same on the reversed axis

    // suffix-after-within-group of x under (flags, head/tail perms)
    ShareVec suffix_after(PartyCtx& ctx, const ShareVec& x, const ShareVec& g,
                          const SharedPermutation& hp, const SharedPermutation& tp) const;
};

ShareVec group_sum(PartyCtx& ctx, const ShareVec& g, const ShareVec& x);
ShareVec group_prefix_sum(PartyCtx& ctx, const ShareVec& g, const ShareVec& x);
ShareVec group_max(PartyCtx& ctx, const ShareVec& g, const ShareVec& x);
std::pair<ShareVec, ShareVec> group_max_pair(PartyCtx& ctx, const ShareVec& g, const ShareVec& x,
                                             const ShareVec& y);

// y-value at the LAST position where x attains its maximum (signed order).
RepShare vect_max(PartyCtx& ctx, const ShareVec& x, const ShareVec& y);

// Column-wise variant: rows are m equal-length vectors; returns, for every
// column, the payload rows' entries at the last maximal row of `values`.
std::vector<ShareVec> vect_max_cols(PartyCtx& ctx, const std::vector<const ShareVec*>& values,
                                    const std::vector<std::vector<const ShareVec*>>& payloads);

}  // namespace trefoil
