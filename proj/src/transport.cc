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

#include "ssreg/transport.h"

#include <functional>

#include "ssreg/error.h"
#include "ssreg/prg.h"

namespace ssreg {
namespace {

void PutBe(std::uint64_t v, int bytes, std::vector<std::uint8_t>& out) {
  for (int i = bytes - 1; i >= 0; --i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

std::uint64_t GetBe(std::span<const std::uint8_t> bytes, std::size_t at,
                    int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 8) | bytes[at + i];
  return v;
}

bool KnownKind(std::uint16_t k) { return k >= 1 && k <= 7; }

}  // namespace

std::string_view MsgKindName(MsgKind kind) {
  switch (kind) {
    case MsgKind::kShareDistribution: return "share-distribution";
    case MsgKind::kSmmD: return "smm-D";
    case MsgKind::kSmmE: return "smm-E";
    case MsgKind::kSmmN: return "smm-N";
    case MsgKind::kYShare: return "y-share";
    case MsgKind::kWShare: return "w-share";
    case MsgKind::kControl: return "control";
  }
  return "unknown";
}

std::vector<std::uint8_t> EncodeFrameBody(const Frame& frame) {
  std::vector<std::uint8_t> out;
  out.reserve(Frame::kHeaderSize + frame.payload.size());
  PutBe(frame.round, 4, out);
  PutBe(static_cast<std::uint16_t>(frame.kind), 2, out);
  PutBe(frame.sender, 2, out);
  PutBe(frame.receiver, 2, out);
  PutBe(frame.reserved, 4, out);
  PutBe(0, 2, out);  // pads the header to kHeaderSize
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

std::vector<std::uint8_t> EncodeFrame(const Frame& frame) {
  std::vector<std::uint8_t> body = EncodeFrameBody(frame);
  std::vector<std::uint8_t> out;
  out.reserve(4 + body.size());
  PutBe(body.size(), 4, out);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Frame DecodeFrameBody(std::span<const std::uint8_t> body) {
  SSREG_ENFORCE(body.size() >= Frame::kHeaderSize,
                ErrorCode::kDeserializeError, "frame shorter than header");
  Frame f;
  f.round = static_cast<std::uint32_t>(GetBe(body, 0, 4));
  const auto kind = static_cast<std::uint16_t>(GetBe(body, 4, 2));
  SSREG_ENFORCE(KnownKind(kind), ErrorCode::kDeserializeError,
                "unknown message kind " + std::to_string(kind));
  f.kind = static_cast<MsgKind>(kind);
  f.sender = static_cast<std::uint16_t>(GetBe(body, 6, 2));
  f.receiver = static_cast<std::uint16_t>(GetBe(body, 8, 2));
  f.reserved = static_cast<std::uint32_t>(GetBe(body, 10, 4));
  f.payload.assign(body.begin() + Frame::kHeaderSize, body.end());
  return f;
}

std::size_t Transcript::TotalWireBytes() const {
  std::size_t total = 0;
  for (const auto& f : frames) total += f.WireSize();
  return total;
}

std::string Transcript::Digest() const {
  std::vector<std::uint8_t> all;
  for (const auto& f : frames) {
    auto bytes = EncodeFrame(f);
    all.insert(all.end(), bytes.begin(), bytes.end());
  }
  return HexDigest(all);
}

void Mailbox::Push(std::vector<std::uint8_t> body) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(body));
  }
  cv_.notify_one();
}

void Mailbox::Close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::vector<std::uint8_t> Mailbox::Pop(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  if (!cv_.wait_for(lock, timeout,
                    [this] { return !queue_.empty() || closed_; })) {
    throw Error(ErrorCode::kRecvTimeout, "no frame within timeout");
  }
  if (queue_.empty()) throw Error(ErrorCode::kPeerClosed, "peer closed");
  auto body = std::move(queue_.front());
  queue_.pop_front();
  return body;
}

namespace {

class LoopbackLink final : public Link {
 public:
  LoopbackLink(std::shared_ptr<LoopbackHub> hub, PartyId self)
      : hub_(std::move(hub)), self_(self) {}
  ~LoopbackLink() override { Close(); }

  PartyId self() const override { return self_; }
  std::size_t num_parties() const override { return hub_->num_parties(); }

  void Send(PartyId to, std::vector<std::uint8_t> body) override {
    SSREG_ENFORCE(to < num_parties() && to != self_,
                  ErrorCode::kTransportError, "bad destination party");
    SSREG_ENFORCE(!closed_, ErrorCode::kPeerClosed, "link closed");
    hub_->mailbox(self_, to).Push(std::move(body));
  }

  std::vector<std::uint8_t> Receive(
      PartyId from, std::chrono::milliseconds timeout) override {
    SSREG_ENFORCE(from < num_parties() && from != self_,
                  ErrorCode::kTransportError, "bad source party");
    return hub_->mailbox(from, self_).Pop(timeout);
  }

  std::size_t LiveChannels() const override {
    return closed_ ? 0 : num_parties() - 1;
  }

  void Close() override {
    if (closed_) return;
    closed_ = true;
    for (PartyId to = 0; to < num_parties(); ++to) {
      if (to != self_) hub_->mailbox(self_, to).Close();
    }
  }

 private:
  std::shared_ptr<LoopbackHub> hub_;
  PartyId self_;
  bool closed_ = false;
};

}  // namespace

LoopbackHub::LoopbackHub(std::size_t num_parties)
    : num_parties_(num_parties), taken_(num_parties, false) {
  SSREG_ENFORCE(num_parties >= 2, ErrorCode::kInvalidPartyCount,
                "a session needs at least two parties");
  boxes_.reserve(num_parties * num_parties);
  for (std::size_t i = 0; i < num_parties * num_parties; ++i) {
    boxes_.push_back(std::make_unique<Mailbox>());
  }
}

std::shared_ptr<LoopbackHub> LoopbackHub::Create(std::size_t num_parties) {
  return std::shared_ptr<LoopbackHub>(new LoopbackHub(num_parties));
}

std::unique_ptr<Link> LoopbackHub::Connect(PartyId self) {
  std::lock_guard lock(mu_);
  SSREG_ENFORCE(self < num_parties_, ErrorCode::kRosterMismatch,
                "party id out of range");
  SSREG_ENFORCE(!taken_[self], ErrorCode::kRosterMismatch,
                "party " + std::to_string(self) + " already connected");
  taken_[self] = true;
  return std::make_unique<LoopbackLink>(shared_from_this(), self);
}

void ValidateRoster(const Roster& roster) {
  SSREG_ENFORCE(roster.size() >= 2, ErrorCode::kRosterMismatch,
                "roster needs at least two parties");
  std::vector<bool> seen(roster.size(), false);
  for (const auto& e : roster) {
    SSREG_ENFORCE(e.id < roster.size(), ErrorCode::kRosterMismatch,
                  "party id " + std::to_string(e.id) + " out of range");
    SSREG_ENFORCE(!seen[e.id], ErrorCode::kRosterMismatch,
                  "duplicate party id " + std::to_string(e.id));
    seen[e.id] = true;
  }
}

Session::Session(std::unique_ptr<Link> link, SessionOptions options)
    : link_(std::move(link)), options_(options) {}

Session::~Session() { Close(); }

void Session::Close() {
  if (link_) link_->Close();
}

void Session::Send(PartyId to, MsgKind kind, const RingMatrix& payload) {
  Frame f;
  f.round = round_;
  f.kind = kind;
  f.sender = static_cast<std::uint16_t>(id());
  f.receiver = static_cast<std::uint16_t>(to);
  f.payload = Serialize(payload);
  traffic_.bytes_sent += f.WireSize();
  ++traffic_.frames_sent;
  link_->Send(to, EncodeFrameBody(f));
}

Frame Session::RecvFrame(PartyId from, MsgKind expected) {
  auto body = link_->Receive(from, options_.timeout);
  Frame f = DecodeFrameBody(body);
  traffic_.bytes_received += f.WireSize();
  ++traffic_.frames_received;
  SSREG_ENFORCE(f.sender == from && f.receiver == id(),
                ErrorCode::kUnexpectedKind, "frame addressed incorrectly");
  SSREG_ENFORCE(f.kind == expected, ErrorCode::kUnexpectedKind,
                "expected " + std::string(MsgKindName(expected)) + " from " +
                    std::to_string(from) + ", got " +
                    std::string(MsgKindName(f.kind)));
  SSREG_ENFORCE(f.round == round_, ErrorCode::kUnexpectedKind,
                "round desync: expected " + std::to_string(round_) + ", got " +
                    std::to_string(f.round));
  if (options_.record_transcript) transcript_.frames.push_back(f);
  return f;
}

RingMatrix Session::Recv(PartyId from, MsgKind expected) {
  return Deserialize(RecvFrame(from, expected).payload);
}

void Session::Barrier(std::string_view label) {
  const std::uint64_t tag = DeriveSeed(0, label);
  const RingMatrix mine(1, 1, {tag});
  for (PartyId p = 0; p < num_parties(); ++p) {
    if (p != id()) Send(p, MsgKind::kControl, mine);
  }
  for (PartyId p = 0; p < num_parties(); ++p) {
    if (p == id()) continue;
    RingMatrix theirs(1, 1);
    try {
      theirs = Recv(p, MsgKind::kControl);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kRecvTimeout) {
        throw Error(ErrorCode::kBarrierTimeout,
                    "party " + std::to_string(p) + " never reached barrier '" +
                        std::string(label) + "'");
      }
      throw;
    }
    SSREG_ENFORCE(theirs == mine, ErrorCode::kBarrierTimeout,
                  "party " + std::to_string(p) +
                      " arrived at a different barrier than '" +
                      std::string(label) + "'");
  }
}

}  // namespace ssreg
