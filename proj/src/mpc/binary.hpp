#pragma once

#include "mpc/rss.hpp"

namespace trefoil {

// Bit-plane representation: plane p holds bit p of every element as a
// width-1 ShareVec (XOR sharing; AND is a width-1 multiplication).
using BitMatrix = std::vector<ShareVec>;

// XOR/AND/NOT on width-1 shares.
inline ShareVec bit_xor(const ShareVec& x, const ShareVec& y) { return sec_add(x, y); }
ShareVec bit_not(PartyCtx& ctx, const ShareVec& x);
ShareVec bit_and(PartyCtx& ctx, const ShareVec& x, const ShareVec& y);

// Binary sharing whose component `comp` carries the given local values
// (known to the two holders of that component); no communication. Parties
// that do not hold `comp` pass anything (ignored).
BitMatrix inject_bits(PartyCtx& ctx, int comp, const std::vector<u128>& vals, int nbits);
ShareVec inject_bit_plane(PartyCtx& ctx, int comp, const std::vector<uint8_t>& bits);

// XOR-dealing of plaintext words by one party: one masked message of
// n*nbits packed bits to the dealer's next party.
BitMatrix xor_deal_bits(PartyCtx& ctx, int dealer, const std::vector<u128>* vals, int nbits,
                        size_t n);

// Exact binary decomposition of the low `nbits` bits of an arithmetic
// sharing (carry-save layer + parallel-prefix adder).
BitMatrix decompose_low_bits(PartyCtx& ctx, const ShareVec& x, int nbits);

// Most significant bit of each element (sign bit under the signed
// interpretation), as a width-1 plane. Batched variant shares rounds.
ShareVec msb_bit(PartyCtx& ctx, const ShareVec& x);
std::vector<ShareVec> msb_bit_many(PartyCtx& ctx, const std::vector<const ShareVec*>& xs);

// x == 0 as a width-1 plane.
ShareVec eq_zero_bit(PartyCtx& ctx, const ShareVec& x);

// Width-1 planes -> 0/1 values on the target ring (two multiplication
// rounds for any number of planes).
ShareVec bit_to_arith(PartyCtx& ctx, const ShareVec& plane, RingConfig cfg);
std::vector<ShareVec> bit_to_arith_many(PartyCtx& ctx, const std::vector<const ShareVec*>& planes,
                                        RingConfig cfg);

}  // namespace trefoil
