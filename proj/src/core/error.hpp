#pragma once

#include <stdexcept>
#include <string>

namespace trefoil {

enum class ErrorKind {
    Config,     // mismatched or invalid ring/session configuration
    Range,      // value outside the representable/declared domain
    Load,       // dataset ingestion failure
    Transport,  // peer disconnect, framing, handshake
    Desync,     // sequence-number gap between peers
    Setup,      // missing correlated randomness / preprocessing
    Integrity,  // inconsistent replicated components at reconstruction
    Protocol,   // any other protocol-level failure
    Invalid,    // bad argument at an API boundary
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) fail(kind, msg);
}

}  // namespace trefoil
