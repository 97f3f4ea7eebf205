#include "net/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <thread>

#include "mpc/rss.hpp"

namespace trefoil {

// ---------------------------------------------------------------------------
// in-process bus

void InprocBus::post(int from, int to, Bytes payload) {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (down_) throw Error(ErrorKind::Transport, "session aborted: " + reason_);
        slots_[from][to].q.push_back(std::move(payload));
    }
    cv_.notify_all();
}

Bytes InprocBus::take(int from, int to) {
    std::unique_lock<std::mutex> lk(mu_);
    cv_.wait(lk, [&] { return down_ || !slots_[from][to].q.empty(); });
    if (slots_[from][to].q.empty() && down_)
        throw Error(ErrorKind::Transport, "session aborted: " + reason_);
    Bytes b = std::move(slots_[from][to].q.front());
    slots_[from][to].q.pop_front();
    return b;
}

void InprocBus::shutdown(const std::string& reason) {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (!down_) {
            down_ = true;
            reason_ = reason;
        }
    }
    cv_.notify_all();
}

static void put_u64(Bytes& b, uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back((uint8_t)(v >> (8 * i)));
}

static uint64_t get_u64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= (uint64_t)p[i] << (8 * i);
    return v;
}

void InprocChannel::do_send(int to, const Bytes& payload) {
    Bytes framed;
    framed.reserve(8 + payload.size());
    put_u64(framed, send_seq_[to]++);
    framed.insert(framed.end(), payload.begin(), payload.end());
    bus_->post(self_, to, std::move(framed));
}

Bytes InprocChannel::do_recv(int from) {
    Bytes framed = bus_->take(from, self_);
    require(framed.size() >= 8, ErrorKind::Transport, "short frame");
    uint64_t seq = get_u64(framed.data());
    require(seq == recv_seq_[from], ErrorKind::Desync,
            "sequence gap from party " + std::to_string(from));
    ++recv_seq_[from];
    return Bytes(framed.begin() + 8, framed.end());
}

// ---------------------------------------------------------------------------
// tcp

namespace {

struct Addr {
    std::string host;
    uint16_t port;
};

Addr parse_addr(const std::string& s) {
    auto pos = s.rfind(':');
    require(pos != std::string::npos, ErrorKind::Config, "address must be host:port, got " + s);
    Addr a;
    a.host = s.substr(0, pos);
    if (a.host.empty()) a.host = "127.0.0.1";
    int port = std::stoi(s.substr(pos + 1));
    require(port > 0 && port < 65536, ErrorKind::Config, "bad port in " + s);
    a.port = (uint16_t)port;
    return a;
}

void write_all(int fd, const uint8_t* p, size_t n) {
    while (n > 0) {
        ssize_t w = ::write(fd, p, n);
        if (w <= 0) throw Error(ErrorKind::Transport, "peer write failed");
        p += w;
        n -= (size_t)w;
    }
}

void read_all(int fd, uint8_t* p, size_t n) {
    while (n > 0) {
        ssize_t r = ::read(fd, p, n);
        if (r <= 0) throw Error(ErrorKind::Transport, "peer disconnected");
        p += r;
        n -= (size_t)r;
    }
}

int listen_on(const Addr& a) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    require(fd >= 0, ErrorKind::Transport, "socket() failed");
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(a.port);
    sa.sin_addr.s_addr = a.host == "0.0.0.0" ? INADDR_ANY : inet_addr(a.host.c_str());
    if (::bind(fd, (sockaddr*)&sa, sizeof(sa)) != 0 || ::listen(fd, 8) != 0) {
        ::close(fd);
        throw Error(ErrorKind::Transport, "cannot listen on " + a.host);
    }
    return fd;
}

int connect_to(const Addr& a) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        require(fd >= 0, ErrorKind::Transport, "socket() failed");
        sockaddr_in sa{};
        sa.sin_family = AF_INET;
        sa.sin_port = htons(a.port);
        sa.sin_addr.s_addr = inet_addr(a.host.c_str());
        if (::connect(fd, (sockaddr*)&sa, sizeof(sa)) == 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            return fd;
        }
        ::close(fd);
        std::this_thread::sleep_for(std::chrono::milliseconds(25));
    }
    throw Error(ErrorKind::Transport, "cannot connect to " + a.host);
}

}  // namespace

TcpChannel::TcpChannel(int self, const std::array<std::string, 3>& addresses,
                       uint64_t config_digest)
    : Channel(self) {
    Addr mine = parse_addr(addresses[(size_t)self]);
    int lfd = listen_on(mine);
    // pair (i, j) with i < j: i accepts, j connects
    int expected_accepts = self == 0 ? 2 : (self == 1 ? 1 : 0);
    for (int peer = self + 1; peer < 3; ++peer) (void)peer;  // connections made below
    std::vector<int> pending;
    for (int k = 0; k < expected_accepts; ++k) {
        int fd = ::accept(lfd, nullptr, nullptr);
        require(fd >= 0, ErrorKind::Transport, "accept failed");
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        pending.push_back(fd);
    }
    for (int peer = 0; peer < self; ++peer) fd_[peer] = connect_to(parse_addr(addresses[(size_t)peer]));
    ::close(lfd);

    // handshake: 1-byte id + 8-byte digest on every pair link
    auto say_hello = [&](int fd) {
        uint8_t buf[9];
        buf[0] = (uint8_t)self;
        for (int i = 0; i < 8; ++i) buf[1 + i] = (uint8_t)(config_digest >> (8 * i));
        write_all(fd, buf, 9);
    };
    auto hear_hello = [&](int fd) -> int {
        uint8_t buf[9];
        read_all(fd, buf, 9);
        uint64_t digest = 0;
        for (int i = 0; i < 8; ++i) digest |= (uint64_t)buf[1 + i] << (8 * i);
        require(digest == config_digest, ErrorKind::Config, "config digest mismatch with peer");
        return buf[0];
    };
    // send every hello before reading any: per-socket say-then-hear can
    // deadlock under unlucky accept ordering
    for (int fd : pending) say_hello(fd);
    for (int peer = 0; peer < self; ++peer) say_hello(fd_[peer]);
    for (int fd : pending) {
        int peer = hear_hello(fd);
        require(peer > self && peer < 3 && fd_[peer] == -1, ErrorKind::Transport,
                "unexpected peer in handshake");
        fd_[peer] = fd;
    }
    for (int peer = 0; peer < self; ++peer) {
        int got = hear_hello(fd_[peer]);
        require(got == peer, ErrorKind::Transport, "peer id mismatch in handshake");
    }
}

TcpChannel::~TcpChannel() {
    for (int fd : fd_)
        if (fd >= 0) ::close(fd);
}

void TcpChannel::do_send(int to, const Bytes& payload) {
    Bytes frame;
    frame.reserve(14 + payload.size());
    frame.push_back((uint8_t)self_);
    frame.push_back((uint8_t)to);
    put_u64(frame, send_seq_[to]++);
    uint32_t len = (uint32_t)payload.size();
    for (int i = 0; i < 4; ++i) frame.push_back((uint8_t)(len >> (8 * i)));
    frame.insert(frame.end(), payload.begin(), payload.end());
    write_all(fd_[to], frame.data(), frame.size());
}

Bytes TcpChannel::do_recv(int from) {
    uint8_t hdr[14];
    read_all(fd_[from], hdr, 14);
    require(hdr[0] == (uint8_t)from && hdr[1] == (uint8_t)self_, ErrorKind::Transport,
            "misrouted frame");
    uint64_t seq = get_u64(hdr + 2);
    require(seq == recv_seq_[from], ErrorKind::Desync,
            "sequence gap from party " + std::to_string(from));
    ++recv_seq_[from];
    uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= (uint32_t)hdr[10 + i] << (8 * i);
    Bytes payload(len);
    if (len > 0) read_all(fd_[from], payload.data(), len);
    return payload;
}

std::array<std::string, 3> pick_loopback_addresses() {
    std::array<std::string, 3> out;
    int fds[3];
    for (int i = 0; i < 3; ++i) {
        fds[i] = ::socket(AF_INET, SOCK_STREAM, 0);
        require(fds[i] >= 0, ErrorKind::Transport, "socket() failed");
        sockaddr_in sa{};
        sa.sin_family = AF_INET;
        sa.sin_addr.s_addr = inet_addr("127.0.0.1");
        sa.sin_port = 0;
        require(::bind(fds[i], (sockaddr*)&sa, sizeof(sa)) == 0, ErrorKind::Transport,
                "bind failed");
        socklen_t len = sizeof(sa);
        ::getsockname(fds[i], (sockaddr*)&sa, &len);
        out[(size_t)i] = "127.0.0.1:" + std::to_string(ntohs(sa.sin_port));
    }
    for (int i = 0; i < 3; ++i) ::close(fds[i]);
    return out;
}

// ---------------------------------------------------------------------------
// session runner

static SessionResult run_one(const PartyProgram& program, int id,
                             std::unique_ptr<Channel> channel, const SessionOptions& opts) {
    PartyCtx ctx(PartyId{id}, *channel, opts.seed);
    SessionResult res;
    res.output = program(ctx);
    res.meter = channel->meter();
    res.gen_perm_count = ctx.stats.gen_perm_count;
    return res;
}

std::array<SessionResult, 3> run_session(const std::array<PartyProgram, 3>& programs,
                                         const SessionOptions& opts) {
    std::array<SessionResult, 3> results;
    std::array<std::exception_ptr, 3> errors{};

    auto bus = std::make_shared<InprocBus>();
    bool tcp = opts.mode == "tcp";
    std::array<std::string, 3> addrs = opts.addresses;
    if (tcp && addrs[0].empty()) addrs = pick_loopback_addresses();

    std::array<std::thread, 3> threads;
    for (int i = 0; i < 3; ++i) {
        threads[(size_t)i] = std::thread([&, i] {
            try {
                std::unique_ptr<Channel> ch;
                if (tcp)
                    ch = std::make_unique<TcpChannel>(i, addrs, opts.config_digest);
                else
                    ch = std::make_unique<InprocChannel>(i, bus);
                results[(size_t)i] = run_one(programs[(size_t)i], i, std::move(ch), opts);
            } catch (...) {
                errors[(size_t)i] = std::current_exception();
                bus->shutdown("party " + std::to_string(i) + " aborted");
            }
        });
    }
    for (auto& t : threads) t.join();
    for (int i = 0; i < 3; ++i) {
        if (errors[(size_t)i]) {
            try {
                std::rethrow_exception(errors[(size_t)i]);
            } catch (const Error& e) {
                throw Error(e.kind(), "party " + std::to_string(i) + ": " + e.what());
            } catch (const std::exception& e) {
                throw Error(ErrorKind::Protocol, "party " + std::to_string(i) + ": " + e.what());
            }
        }
    }
    return results;
}

SessionResult run_party(const PartyProgram& program, int party_id, const SessionOptions& opts) {
    require(opts.mode == "tcp", ErrorKind::Config, "single-party sessions require tcp mode");
    auto ch = std::make_unique<TcpChannel>(party_id, opts.addresses, opts.config_digest);
    return run_one(program, party_id, std::move(ch), opts);
}

}  // namespace trefoil
