/*
 * Copyright 2026 The ssreg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <thread>

#include "ssreg/error.h"
#include "ssreg/transport.h"

namespace ssreg {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint32_t kHandshakeMagic = 0x53535247;  // "SSRG"
constexpr std::size_t kMaxBody = std::size_t{1} << 30;

void WriteAll(int fd, const std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kPeerClosed,
                  std::string("send failed: ") + std::strerror(errno));
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

// Returns false on orderly EOF before any byte was read.
bool ReadAll(int fd, std::uint8_t* data, std::size_t len) {
  std::size_t got = 0;
  while (got < len) {
    const ssize_t n = ::recv(fd, data + got, len - got, 0);
    if (n == 0) {
      if (got == 0) return false;
      throw Error(ErrorCode::kPeerClosed, "connection closed mid-frame");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kPeerClosed,
                  std::string("recv failed: ") + std::strerror(errno));
    }
    got += static_cast<std::size_t>(n);
  }
  return true;
}

bool WaitReadable(int fd, Clock::time_point deadline) {
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) return false;
    pollfd p{fd, POLLIN, 0};
    const int r = ::poll(&p, 1, static_cast<int>(left.count()));
    if (r > 0) return true;
    if (r < 0 && errno != EINTR) return false;
  }
}

sockaddr_in ResolveV4(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  SSREG_ENFORCE(::getaddrinfo(host.c_str(), nullptr, &hints, &res) == 0 && res,
                ErrorCode::kTransportError, "cannot resolve host " + host);
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  ::freeaddrinfo(res);
  return addr;
}

void SetNoDelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

struct Hello {
  std::uint32_t magic;
  std::uint16_t n;
  std::uint16_t id;
};

void SendHello(int fd, std::size_t n, PartyId id) {
  std::uint8_t buf[8];
  const std::uint32_t magic = htonl(kHandshakeMagic);
  const std::uint16_t nn = htons(static_cast<std::uint16_t>(n));
  const std::uint16_t ii = htons(static_cast<std::uint16_t>(id));
  std::memcpy(buf, &magic, 4);
  std::memcpy(buf + 4, &nn, 2);
  std::memcpy(buf + 6, &ii, 2);
  WriteAll(fd, buf, sizeof(buf));
}

Hello ReadHello(int fd, Clock::time_point deadline) {
  SSREG_ENFORCE(WaitReadable(fd, deadline), ErrorCode::kConnectTimeout,
                "handshake timed out");
  std::uint8_t buf[8];
  SSREG_ENFORCE(ReadAll(fd, buf, sizeof(buf)), ErrorCode::kPeerClosed,
                "peer closed during handshake");
  Hello h;
  std::memcpy(&h.magic, buf, 4);
  std::memcpy(&h.n, buf + 4, 2);
  std::memcpy(&h.id, buf + 6, 2);
  h.magic = ntohl(h.magic);
  h.n = ntohs(h.n);
  h.id = ntohs(h.id);
  SSREG_ENFORCE(h.magic == kHandshakeMagic, ErrorCode::kRosterMismatch,
                "peer is not an ssreg party");
  return h;
}

class TcpLink final : public Link {
 public:
  TcpLink(PartyId self, std::size_t n)
      : self_(self), n_(n), fds_(n, -1), boxes_(n) {
    for (auto& b : boxes_) b = std::make_unique<Mailbox>();
  }

  ~TcpLink() override { Close(); }

  bool Has(PartyId peer) const { return fds_[peer] >= 0; }
  void Adopt(PartyId peer, int fd) { fds_[peer] = fd; }

  void StartReaders() {
    for (PartyId p = 0; p < n_; ++p) {
      if (p == self_) continue;
      readers_.emplace_back([this, p] { ReaderLoop(p); });
    }
  }

  PartyId self() const override { return self_; }
  std::size_t num_parties() const override { return n_; }

  void Send(PartyId to, std::vector<std::uint8_t> body) override {
    SSREG_ENFORCE(to < n_ && to != self_ && fds_[to] >= 0,
                  ErrorCode::kTransportError, "bad destination party");
    std::uint8_t prefix[4];
    const std::uint32_t len = htonl(static_cast<std::uint32_t>(body.size()));
    std::memcpy(prefix, &len, 4);
    std::lock_guard lock(write_mu_);
    WriteAll(fds_[to], prefix, 4);
    WriteAll(fds_[to], body.data(), body.size());
  }

  std::vector<std::uint8_t> Receive(
      PartyId from, std::chrono::milliseconds timeout) override {
    SSREG_ENFORCE(from < n_ && from != self_, ErrorCode::kTransportError,
                  "bad source party");
    return boxes_[from]->Pop(timeout);
  }

  std::size_t LiveChannels() const override {
    std::size_t live = 0;
    for (PartyId p = 0; p < n_; ++p) {
      if (p != self_ && fds_[p] >= 0 && !closed_) ++live;
    }
    return live;
  }

  void Close() override {
    if (closed_.exchange(true)) return;
    for (int fd : fds_) {
      if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
    }
    for (auto& t : readers_) {
      if (t.joinable()) t.join();
    }
    for (int& fd : fds_) {
      if (fd >= 0) ::close(fd);
      fd = -1;
    }
  }

 private:
  void ReaderLoop(PartyId peer) {
    const int fd = fds_[peer];
    try {
      for (;;) {
        std::uint8_t prefix[4];
        if (!ReadAll(fd, prefix, 4)) break;
        std::uint32_t len;
        std::memcpy(&len, prefix, 4);
        len = ntohl(len);
        if (len > kMaxBody) break;
        std::vector<std::uint8_t> body(len);
        if (len > 0 && !ReadAll(fd, body.data(), len)) break;
        boxes_[peer]->Push(std::move(body));
      }
    } catch (const Error&) {
    }
    boxes_[peer]->Close();
  }

  PartyId self_;
  std::size_t n_;
  std::vector<int> fds_;
  std::vector<std::unique_ptr<Mailbox>> boxes_;
  std::vector<std::thread> readers_;
  std::mutex write_mu_;
  std::atomic<bool> closed_{false};
};

int Listen(const std::string& host, std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  SSREG_ENFORCE(fd >= 0, ErrorCode::kTransportError, "socket() failed");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = ResolveV4(host, port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd, 64) != 0) {
    const std::string why = std::strerror(errno);
    ::close(fd);
    throw Error(ErrorCode::kTransportError,
                "cannot listen on " + host + ":" + std::to_string(port) +
                    ": " + why);
  }
  return fd;
}

int Dial(const Endpoint& ep, Clock::time_point deadline) {
  const sockaddr_in addr = ResolveV4(ep.host, ep.port);
  for (;;) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    SSREG_ENFORCE(fd >= 0, ErrorCode::kTransportError, "socket() failed");
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr),
                  sizeof(addr)) == 0) {
      return fd;
    }
    ::close(fd);
    if (Clock::now() >= deadline) {
      throw Error(ErrorCode::kConnectTimeout,
                  "could not reach party " + std::to_string(ep.id) + " at " +
                      ep.host + ":" + std::to_string(ep.port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

}  // namespace

std::unique_ptr<Link> ConnectTcp(const Roster& roster, PartyId self,
                                 const TcpOptions& options) {
  ValidateRoster(roster);
  const std::size_t n = roster.size();
  SSREG_ENFORCE(self < n, ErrorCode::kRosterMismatch, "self not in roster");
  std::vector<Endpoint> by_id(n);
  for (const auto& e : roster) by_id[e.id] = e;

  const auto deadline = Clock::now() + options.connect_timeout;
  std::string bind_host = by_id[self].host;
  if (!options.bind_address.empty()) bind_host = options.bind_address;
  if (const char* env = std::getenv("SSREG_BIND_ADDRESS"); env && *env) {
    bind_host = env;
  }

  auto link = std::make_unique<TcpLink>(self, n);
  int listener = -1;
  if (self + 1 < n) listener = Listen(bind_host, by_id[self].port);

  try {
    for (PartyId peer = 0; peer < self; ++peer) {
      const int fd = Dial(by_id[peer], deadline);
      SetNoDelay(fd);
      link->Adopt(peer, fd);
      SendHello(fd, n, self);
      const Hello h = ReadHello(fd, deadline);
      SSREG_ENFORCE(h.n == n && h.id == peer, ErrorCode::kRosterMismatch,
                    "party at " + by_id[peer].host + ":" +
                        std::to_string(by_id[peer].port) + " reports n=" +
                        std::to_string(h.n) + " id=" + std::to_string(h.id));
    }
    for (std::size_t accepted = 0; accepted + self + 1 < n; ++accepted) {
      SSREG_ENFORCE(WaitReadable(listener, deadline),
                    ErrorCode::kConnectTimeout,
                    "timed out waiting for higher-numbered parties");
      const int fd = ::accept(listener, nullptr, nullptr);
      SSREG_ENFORCE(fd >= 0, ErrorCode::kTransportError, "accept() failed");
      SetNoDelay(fd);
      const Hello h = ReadHello(fd, deadline);
      // Answer first so a mismatched dialer sees the disagreement too.
      SendHello(fd, n, self);
      if (h.n != n || h.id <= self || h.id >= n || link->Has(h.id)) {
        ::close(fd);
        throw Error(ErrorCode::kRosterMismatch,
                    "peer reports n=" + std::to_string(h.n) +
                        " id=" + std::to_string(h.id));
      }
      link->Adopt(h.id, fd);
    }
  } catch (...) {
    if (listener >= 0) ::close(listener);
    throw;
  }
  if (listener >= 0) ::close(listener);
  link->StartReaders();
  return link;
}

}  // namespace ssreg
