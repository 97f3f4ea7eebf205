#pragma once

#include "mpc/rss.hpp"

namespace trefoil {

// Lifting shares of small non-negative secrets from Z_{2^k} onto Z_{2^l}
// (k < l), exactly, in one online round of 4l+4 bits across parties per
// element. Secrets must lie in [0, 2^(k-1)); one target-ring daBit is
// consumed per element.
struct ConversionContext {
    RingConfig source;  // k
    RingConfig target;  // l
    DabitPool* pool = nullptr;

    ConversionContext(RingConfig src, RingConfig tgt, DabitPool* p)
        : source(src), target(tgt), pool(p) {
        require(src.width_bits < tgt.width_bits, ErrorKind::Config,
                "conversion requires a strictly wider target ring");
    }
};

ShareVec convert_share(PartyCtx& ctx, const ShareVec& x, ConversionContext& cc);

// Reduction onto a narrower ring is share-local for secrets in [0, 2^(k-1)).
ShareVec convert_down(const ShareVec& x, RingConfig target);

// Plaintext two-operand truncation identity (test oracle): returns
// ((d0 >> c) + (-((-d1) >> c)) mod 2^l, bit) with
// bit = value - floor((d0+d1)/2^c); bit is 0 or 1 whenever d0 + d1 < 2^(k+1).
struct TruncIdentity {
    u128 value;
    i128 bit;
};
TruncIdentity trunc_identity_check(u128 d0, u128 d1, int c, int k, int l);

// --- two-party variant --------------------------------------------------------
//
// Additive two-party sharing on Z_{2^k} lifted onto Z_{2^l}. Correlated
// randomness comes from a dealer object; the default dealer is an insecure
// test-only source (flagged), since two-party daBit generation is out of
// scope here.

struct TwoPartyDabit {
    uint8_t bit[2];  // additive shares of r on Z_2
    u128 ring[2];    // additive shares of r on Z_{2^l}
};

class TwoPartyDabitDealer {
  public:
    explicit TwoPartyDabitDealer(uint64_t seed) : stream_(seed) {}
    static constexpr bool insecure_test_dealer = true;

    TwoPartyDabit next(const RingConfig& target) {
        TwoPartyDabit d;
        uint8_t r = stream_.next_bit() ? 1 : 0;
        d.bit[0] = stream_.next_bit() ? 1 : 0;
        d.bit[1] = d.bit[0] ^ r;
        d.ring[0] = target.reduce(stream_.next_u128());
        d.ring[1] = target.reduce((u128)r - d.ring[0]);
        return d;
    }

  private:
    Stream stream_;
};

// Party state for the two-party protocol. The large-ring sharings of each
// operand use a PRG common to both parties, so the single exchanged message
// per direction is one masked bit.
struct TwoPartyConvertMsg {
    uint8_t masked_bit;
};

struct TwoPartyConvertState {
    int party;  // 0 or 1
    RingConfig source, target;
    u128 share_k;         // input additive share on Z_{2^k}
    TwoPartyDabit dabit;  // this party's rows: bit[party], ring[party]
    uint64_t mask_seed;   // common PRG seed for the l-ring sharings

    TwoPartyConvertState(int p, RingConfig src, RingConfig tgt, u128 share, TwoPartyDabit db,
                         uint64_t seed)
        : party(p), source(src), target(tgt), share_k(share), dabit(db), mask_seed(seed) {}

    TwoPartyConvertMsg round1();
    u128 finish(const TwoPartyConvertMsg& theirs);

  private:
    u128 d_share_[2] = {0, 0};      // additive l-ring shares of d0, d1
    u128 trunc_share_[2] = {0, 0};  // additive l-ring shares of truncd0, truncd1
    uint8_t my_bit_ = 0;
};

// Convenience driver running both parties in one call (used by tests and the
// CLI demo): splits x additively, converts, returns the two l-ring shares.
std::pair<u128, u128> convert_share_two_party(u128 secret, RingConfig source, RingConfig target,
                                              uint64_t seed);

}  // namespace trefoil
