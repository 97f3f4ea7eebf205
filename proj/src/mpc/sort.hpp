#pragma once

#include "mpc/rss.hpp"

namespace trefoil {

// A secret-shared permutation: n shared values that reconstruct to a
// permutation of 0..n-1. apply moves x[i] to slot pi[i]; unapply reverses
// that, so unapply(pi, apply(pi, x)) == x.
using SharedPermutation = ShareVec;

// Applies one shared permutation to several vectors in shared rounds.
std::vector<ShareVec> apply_perm_many(PartyCtx& ctx, const SharedPermutation& pi,
                                      const std::vector<const ShareVec*>& xs);
std::vector<ShareVec> unapply_perm_many(PartyCtx& ctx, const SharedPermutation& pi,
                                        const std::vector<const ShareVec*>& xs);
ShareVec apply_perm(PartyCtx& ctx, const SharedPermutation& pi, const ShareVec& x);
ShareVec unapply_perm(PartyCtx& ctx, const SharedPermutation& pi, const ShareVec& x);

// pi[i] = beta[alpha[i]]: applying the result equals applying alpha then beta.
SharedPermutation compose_perms(PartyCtx& ctx, const SharedPermutation& alpha,
                                const SharedPermutation& beta);

// Binary expansion of each element as arithmetic 0/1 vectors (bit j of x[i]
// lands in result[j][i]); nbits defaults to the full ring width.
std::vector<ShareVec> bit_vec_dec(PartyCtx& ctx, const ShareVec& x, int nbits = 0);

// Stable ascending rank of a 0/1 vector: zeros keep their order first, then
// ones. One multiplication round.
SharedPermutation gen_perm_by_bit(PartyCtx& ctx, const ShareVec& bits);

// Stable ascending rank of x under the signed interpretation (radix sort
// over all bits). With a declared bound (0 < bound_bits < w), only the low
// bound_bits are decomposed and values are taken as non-negative.
SharedPermutation gen_perm(PartyCtx& ctx, const ShareVec& x, int bound_bits = 0);

}  // namespace trefoil
