#pragma once

#include <array>
#include <cstdint>

namespace trefoil {

enum class Phase { Setup, Online };

// Per-party communication accounting. Sizes count protocol payload only
// (framing excluded); bit-level payloads are recorded with their exact bit
// count even though the wire carries whole bytes. A round is a
// synchronization point: the first receive after any send (or the first
// receive overall) opens a new round, and consecutive receives with no send
// in between belong to the same round.
struct PhaseMeter {
    std::array<uint64_t, 3> bytes_to{{0, 0, 0}};  // indexed by peer id
    uint64_t payload_bits = 0;
    uint64_t rounds = 0;

    uint64_t total_bytes() const { return bytes_to[0] + bytes_to[1] + bytes_to[2]; }
};

class CommMeter {
  public:
    void set_phase(Phase p) { phase_ = p; }
    Phase phase() const { return phase_; }

    void on_send(int to, uint64_t payload_bytes, uint64_t payload_bits) {
        PhaseMeter& m = at(phase_);
        m.bytes_to[(size_t)to] += payload_bytes;
        m.payload_bits += payload_bits;
        sent_since_recv_ = true;
    }

    void on_recv() {
        PhaseMeter& m = at(phase_);
        if (sent_since_recv_ || m.rounds == 0) {
            ++m.rounds;
            sent_since_recv_ = false;
        }
    }

    const PhaseMeter& setup() const { return setup_; }
    const PhaseMeter& online() const { return online_; }

    void reset() {
        setup_ = PhaseMeter{};
        online_ = PhaseMeter{};
        sent_since_recv_ = false;
    }

  private:
    PhaseMeter& at(Phase p) { return p == Phase::Setup ? setup_ : online_; }

    Phase phase_ = Phase::Online;
    PhaseMeter setup_;
    PhaseMeter online_;
    bool sent_since_recv_ = false;
};

}  // namespace trefoil
