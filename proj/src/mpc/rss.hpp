#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "core/prng.hpp"
#include "core/ring.hpp"
#include "net/transport.hpp"

namespace trefoil {

// Replicated sharing x = c0 + c1 + c2 (mod 2^w); party i holds (c_i, c_{i+1})
// as the (a, b) arrays below. Component j is derivable from the pairwise
// seed shared by parties j-1 and j, which is what the cheap dealing and the
// zero sharings rely on.
struct ShareVec {
    RingConfig cfg;
    std::vector<u128> a;  // component (party id)
    std::vector<u128> b;  // component (party id + 1)

    ShareVec() = default;
    ShareVec(RingConfig c, size_t n) : cfg(c), a(n, 0), b(n, 0) {}

    size_t size() const { return a.size(); }
    void reduce() {
        for (auto& v : a) v = cfg.reduce(v);
        for (auto& v : b) v = cfg.reduce(v);
    }
};

// One shared element (a length-1 view is often clearer than a vector).
struct RepShare {
    RingConfig cfg;
    u128 a = 0;
    u128 b = 0;
};

inline RepShare at(const ShareVec& v, size_t i) { return RepShare{v.cfg, v.a[i], v.b[i]}; }
inline void set_at(ShareVec& v, size_t i, const RepShare& s) {
    v.a[i] = v.cfg.reduce(s.a);
    v.b[i] = v.cfg.reduce(s.b);
}

// A random bit r shared both on Z_2 and on a wider ring (the conversion
// target); consumed one per converted element.
struct Dabit {
    uint8_t bit_a = 0, bit_b = 0;  // components on Z_2
    u128 ring_a = 0, ring_b = 0;   // components on Z_{2^w}
};

class DabitPool {
  public:
    explicit DabitPool(int width = 0) : width_(width) {}
    int width() const { return width_; }
    size_t available() const { return items_.size() - used_; }
    void add(std::vector<Dabit> more) {
        items_.insert(items_.end(), more.begin(), more.end());
    }
    const Dabit& take() {
        require(used_ < items_.size(), ErrorKind::Setup, "daBit pool exhausted");
        return items_[used_++];
    }

  private:
    int width_;
    std::vector<Dabit> items_;
    size_t used_ = 0;
};

struct PartyStats {
    uint64_t gen_perm_count = 0;
};

// Per-party protocol context: transport endpoint, pairwise PRG streams,
// private randomness, and correlated-randomness pools. Single-threaded use.
class PartyCtx {
  public:
    PartyCtx(PartyId me, Channel& ch, uint64_t session_seed);

    PartyId me;
    Channel& ch;
    PairStreams with_next;  // pair (me, me+1): component me+1
    PairStreams with_prev;  // pair (me-1, me): component me
    Stream priv;
    PartyStats stats;

    int self() const { return me.id; }
    int next() const { return me.next(); }
    int prev() const { return me.prev(); }

    CommMeter& meter() { return ch.meter(); }
    void set_phase(Phase p) { ch.meter().set_phase(p); }

    DabitPool& dabit_pool(int width);
    // Tops the pool up to at least `count` items; generation is metered as
    // setup-phase communication.
    void ensure_dabits(int width, size_t count);

  private:
    std::map<int, DabitPool> pools_;
};

// --- wire helpers -----------------------------------------------------------

// Ring vectors go on the wire as packed ceil(w/8)-byte little-endian words;
// width-1 vectors are bit-packed and metered by exact bit count.
void send_ring_vec(PartyCtx& ctx, int to, const std::vector<u128>& vals, const RingConfig& cfg);
std::vector<u128> recv_ring_vec(PartyCtx& ctx, int from, size_t n, const RingConfig& cfg);

// --- sharing / reconstruction ----------------------------------------------

// Public constant: component 0 carries the value, all parties know it.
ShareVec share_public(PartyCtx& ctx, const std::vector<u128>& vals, RingConfig cfg);
ShareVec share_public_scalar(PartyCtx& ctx, u128 v, RingConfig cfg, size_t n);

// Standard dealing by one party: two components from pairwise PRGs, the
// third sent to each of the two other parties (w bits each).
ShareVec deal(PartyCtx& ctx, int dealer, const std::vector<u128>* values, RingConfig cfg,
              size_t n);

// Input sharing at w bits total: one PRG component, one masked component sent
// to a single party, third component publicly zero.
ShareVec deal_cheap(PartyCtx& ctx, int dealer, const std::vector<u128>* values, RingConfig cfg,
                    size_t n);

// Reconstruction. open_all costs one round; with check=true every party
// receives its missing component from both holders and verifies agreement.
std::vector<u128> open_all(PartyCtx& ctx, const ShareVec& x, bool check = false);
std::optional<std::vector<u128>> open_to(PartyCtx& ctx, const ShareVec& x, int who,
                                         bool check = false);

// --- linear operations (no communication) ------------------------------------

ShareVec sec_add(const ShareVec& x, const ShareVec& y);
ShareVec sec_sub(const ShareVec& x, const ShareVec& y);
ShareVec sec_neg(const ShareVec& x);
ShareVec add_const(PartyCtx& ctx, const ShareVec& x, u128 c);
ShareVec mul_const(const ShareVec& x, u128 c);
// z <- x shifted right by `positions` (z[i] = x[i-positions]), zero-filled.
ShareVec shift_up(const ShareVec& x, size_t positions);
ShareVec prefix_sum(const ShareVec& x);   // inclusive
ShareVec reverse(const ShareVec& x);
ShareVec slice(const ShareVec& x, size_t begin, size_t count);
void append(ShareVec& dst, const ShareVec& src);
RepShare sum_all(const ShareVec& x);

// --- multiplication ----------------------------------------------------------

// Element-wise product; one round, w bits per party per element.
ShareVec sec_mul(PartyCtx& ctx, const ShareVec& x, const ShareVec& y);
// Same round for many independent products.
std::vector<ShareVec> sec_mul_batch(PartyCtx& ctx, const std::vector<const ShareVec*>& xs,
                                    const std::vector<const ShareVec*>& ys);

// --- comparisons (signed), truncation, division ------------------------------

// 0/1 shares on the ring of the inputs.
ShareVec sec_lt(PartyCtx& ctx, const ShareVec& x, const ShareVec& y);
ShareVec sec_eq(PartyCtx& ctx, const ShareVec& x, const ShareVec& y);
ShareVec sec_eq_const(PartyCtx& ctx, const ShareVec& x, u128 c);

// z = floor(x / 2^c) + err, err in {0, 1}; requires |x| < 2^(w-2) and
// 1 <= c <= w-2. One round; consumes one width-w daBit per element.
ShareVec sec_trunc(PartyCtx& ctx, const ShareVec& x, int c);

// Fixed-point division with f = cfg.frac_bits fraction bits; inputs are
// same-scale values, output is the f-scaled quotient. Declared domain:
// divisor > 0 with raw value < 2^(f+6), dividend >= 0 with raw value
// < 2^(w - 2f - 20); relative error <= 2^(-f+2).
ShareVec sec_div(PartyCtx& ctx, const ShareVec& x, const ShareVec& y);

// --- correlated randomness ----------------------------------------------------

std::vector<Dabit> gen_dabits(PartyCtx& ctx, int width, size_t count);

// --- misc ---------------------------------------------------------------------

// Test helper: plaintext values -> consistent shares at every party without
// a dealer round (all parties are given the plaintext).
ShareVec share_plain_for_tests(PartyCtx& ctx, const std::vector<u128>& vals, RingConfig cfg);

}  // namespace trefoil
