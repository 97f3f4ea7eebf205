#pragma once

#include <array>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "net/meter.hpp"

namespace trefoil {

struct PartyId {
    int id = 0;
    int next() const { return (id + 1) % 3; }
    int prev() const { return (id + 2) % 3; }
};

using Bytes = std::vector<uint8_t>;

// One party's endpoint. FIFO per ordered pair, blocking receives. payload
// sizes are metered; `bits` overrides the metered size for packed bit
// payloads (0 = bytes * 8).
class Channel {
  public:
    virtual ~Channel() = default;

    void send(int to, const Bytes& payload, uint64_t bits = 0) {
        meter_.on_send(to, payload.size(), bits ? bits : payload.size() * 8);
        do_send(to, payload);
    }

    Bytes recv(int from) {
        meter_.on_recv();
        return do_recv(from);
    }

    CommMeter& meter() { return meter_; }
    int self() const { return self_; }

  protected:
    explicit Channel(int self) : self_(self) {}
    virtual void do_send(int to, const Bytes& payload) = 0;
    virtual Bytes do_recv(int from) = 0;

    int self_;
    CommMeter meter_;
};

// Shared in-process mailbox for three parties.
class InprocBus {
  public:
    void post(int from, int to, Bytes payload);
    Bytes take(int from, int to);
    void shutdown(const std::string& reason);

  private:
    struct Slot {
        std::deque<Bytes> q;
    };
    std::mutex mu_;
    std::condition_variable cv_;
    Slot slots_[3][3];
    bool down_ = false;
    std::string reason_;
};

class InprocChannel : public Channel {
  public:
    InprocChannel(int self, std::shared_ptr<InprocBus> bus) : Channel(self), bus_(std::move(bus)) {}

  protected:
    void do_send(int to, const Bytes& payload) override;
    Bytes do_recv(int from) override;

  private:
    std::shared_ptr<InprocBus> bus_;
    uint64_t send_seq_[3] = {0, 0, 0};
    uint64_t recv_seq_[3] = {0, 0, 0};
};

// TCP endpoint. Each party listens on its own address; the lower-id party of
// each pair accepts the connection from the higher-id one. The handshake
// exchanges party ids and a config digest; every message is framed as
// 1-byte from, 1-byte to, 8-byte seq, 4-byte length, payload (little-endian).
class TcpChannel : public Channel {
  public:
    TcpChannel(int self, const std::array<std::string, 3>& addresses, uint64_t config_digest);
    ~TcpChannel() override;

    TcpChannel(const TcpChannel&) = delete;
    TcpChannel& operator=(const TcpChannel&) = delete;

  protected:
    void do_send(int to, const Bytes& payload) override;
    Bytes do_recv(int from) override;

  private:
    int fd_[3] = {-1, -1, -1};  // connected socket per peer
    uint64_t send_seq_[3] = {0, 0, 0};
    uint64_t recv_seq_[3] = {0, 0, 0};
    // out-of-order buffer: frames read from a peer socket while waiting on
    // another peer never happen (one socket per pair), but a frame may carry
    // an unexpected (from,to) header, which is a protocol error.
};

struct SessionResult {
    Bytes output;
    CommMeter meter;
    uint64_t gen_perm_count = 0;
};

struct SessionOptions {
    uint64_t seed = 1;  // 0 = fresh OS entropy
    std::string mode = "inproc";
    std::array<std::string, 3> addresses{};  // tcp mode
    uint64_t config_digest = 0;
};

class PartyCtx;  // defined in mpc/rss.hpp
using PartyProgram = std::function<Bytes(PartyCtx&)>;

// Runs the three party programs to completion (three threads for inproc, or
// three loopback sockets when mode == "tcp") and returns each party's output
// and meter. Any party aborting aborts the session with a diagnostic.
std::array<SessionResult, 3> run_session(const std::array<PartyProgram, 3>& programs,
                                         const SessionOptions& opts = {});

// Runs a single party of a distributed tcp session (used by the CLI).
SessionResult run_party(const PartyProgram& program, int party_id, const SessionOptions& opts);

// Three free loopback host:port strings (for tests and single-host runs).
std::array<std::string, 3> pick_loopback_addresses();

}  // namespace trefoil
