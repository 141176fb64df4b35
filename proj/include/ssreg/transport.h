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

#ifndef SSREG_TRANSPORT_H_
#define SSREG_TRANSPORT_H_

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "ssreg/ring.h"

namespace ssreg {

using PartyId = std::size_t;

enum class MsgKind : std::uint16_t {
  kShareDistribution = 1,
  kSmmD = 2,
  kSmmE = 3,
  kSmmN = 4,
  kYShare = 5,
  kWShare = 6,
  kControl = 7,
};

std::string_view MsgKindName(MsgKind kind);

// Wire layout: u32 big-endian body length, then a 16-byte big-endian header
// (round u32, kind u16, sender u16, receiver u16, reserved u32, two zero
// pad bytes), then the
// payload (one serialized RingMatrix).
struct Frame {
  std::uint32_t round = 0;
  MsgKind kind = MsgKind::kControl;
  std::uint16_t sender = 0;
  std::uint16_t receiver = 0;
  std::uint32_t reserved = 0;
  std::vector<std::uint8_t> payload;

  std::size_t WireSize() const { return 4 + kHeaderSize + payload.size(); }
  friend bool operator==(const Frame&, const Frame&) = default;

  static constexpr std::size_t kHeaderSize = 16;
};

// Header plus payload, without the length prefix.
std::vector<std::uint8_t> EncodeFrameBody(const Frame& frame);
// Length prefix, header and payload.
std::vector<std::uint8_t> EncodeFrame(const Frame& frame);
Frame DecodeFrameBody(std::span<const std::uint8_t> body);

// Frames one party received, in the order its protocol consumed them.
struct Transcript {
  std::vector<Frame> frames;

  std::size_t TotalWireBytes() const;
  // BLAKE2b over the concatenated wire encodings.
  std::string Digest() const;
};

// Blocking FIFO of frame bodies from one peer.
class Mailbox {
 public:
  void Push(std::vector<std::uint8_t> body);
  void Close();
  // Throws kRecvTimeout or kPeerClosed.
  std::vector<std::uint8_t> Pop(std::chrono::milliseconds timeout);

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::vector<std::uint8_t>> queue_;
  bool closed_ = false;
};

// Raw point-to-point delivery of frame bodies. Per-peer order is FIFO.
class Link {
 public:
  virtual ~Link() = default;
  virtual PartyId self() const = 0;
  virtual std::size_t num_parties() const = 0;
  virtual void Send(PartyId to, std::vector<std::uint8_t> body) = 0;
  virtual std::vector<std::uint8_t> Receive(
      PartyId from, std::chrono::milliseconds timeout) = 0;
  // Outgoing channels currently usable.
  virtual std::size_t LiveChannels() const = 0;
  virtual void Close() = 0;
};

// In-process full mesh for n parties; each party obtains its Link once.
class LoopbackHub : public std::enable_shared_from_this<LoopbackHub> {
 public:
  static std::shared_ptr<LoopbackHub> Create(std::size_t num_parties);

  std::unique_ptr<Link> Connect(PartyId self);
  std::size_t num_parties() const { return num_parties_; }
  Mailbox& mailbox(PartyId from, PartyId to) {
    return *boxes_[from * num_parties_ + to];
  }

 private:
  explicit LoopbackHub(std::size_t num_parties);

  std::size_t num_parties_;
  std::vector<std::unique_ptr<Mailbox>> boxes_;
  std::mutex mu_;
  std::vector<bool> taken_;
};

struct Endpoint {
  PartyId id = 0;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

using Roster = std::vector<Endpoint>;

// Throws kRosterMismatch unless ids are distinct and cover [0, n), n >= 2.
void ValidateRoster(const Roster& roster);

struct TcpOptions {
  std::chrono::milliseconds connect_timeout{30000};
  // Overrides the listen address; SSREG_BIND_ADDRESS in the environment
  // takes precedence over both this and the roster host.
  std::string bind_address;
};

// Establishes the full mesh: party i dials every j < i and accepts every
// j > i; both ends exchange (n, id) and fail with kRosterMismatch on
// disagreement.
std::unique_ptr<Link> ConnectTcp(const Roster& roster, PartyId self,
                                 const TcpOptions& options = {});

struct SessionOptions {
  std::chrono::milliseconds timeout{30000};
  // Long benchmark runs turn this off to keep memory flat.
  bool record_transcript = true;
};

struct TrafficStats {
  std::size_t bytes_sent = 0;
  std::size_t bytes_received = 0;
  std::size_t frames_sent = 0;
  std::size_t frames_received = 0;
};

// A party's runtime handle: framing, round stamping, kind checks, transcript
// recording and byte accounting over a Link. Confined to one thread.
class Session {
 public:
  explicit Session(std::unique_ptr<Link> link, SessionOptions options = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  PartyId id() const { return link_->self(); }
  std::size_t num_parties() const { return link_->num_parties(); }
  std::uint32_t round() const { return round_; }
  void SetRound(std::uint32_t round) { round_ = round; }
  std::chrono::milliseconds timeout() const { return options_.timeout; }

  void Send(PartyId to, MsgKind kind, const RingMatrix& payload);
  // Next frame from `from`; throws kUnexpectedKind when its kind or round
  // differs from what the protocol expects.
  Frame RecvFrame(PartyId from, MsgKind expected);
  RingMatrix Recv(PartyId from, MsgKind expected);

  // Every party sends the label digest to every other and waits for theirs.
  // Mismatched labels or a timeout raise kBarrierTimeout.
  void Barrier(std::string_view label);

  const Transcript& transcript() const { return transcript_; }
  const TrafficStats& traffic() const { return traffic_; }
  std::size_t LiveChannels() const { return link_->LiveChannels(); }
  void Close();

 private:
  std::unique_ptr<Link> link_;
  SessionOptions options_;
  std::uint32_t round_ = 0;
  Transcript transcript_;
  TrafficStats traffic_;
};

// Runs fn(session) for every party of a fresh loopback mesh on its own
// thread and rethrows the first failure after all threads finish.
template <typename Fn>
void RunLoopbackParties(std::size_t num_parties, Fn&& fn,
                        SessionOptions options = {});

}  // namespace ssreg

#include "ssreg/transport_inl.h"

#endif  // SSREG_TRANSPORT_H_
