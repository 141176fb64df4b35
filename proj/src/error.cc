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

#include "ssreg/error.h"

namespace ssreg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMagnitudeOverflow: return "MagnitudeOverflow";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidPartyCount: return "InvalidPartyCount";
    case ErrorCode::kTripleExhausted: return "TripleExhausted";
    case ErrorCode::kMalformedTranscript: return "MalformedTranscript";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kConnectTimeout: return "ConnectTimeout";
    case ErrorCode::kRosterMismatch: return "RosterMismatch";
    case ErrorCode::kUnexpectedKind: return "UnexpectedKind";
    case ErrorCode::kPeerClosed: return "PeerClosed";
    case ErrorCode::kDeserializeError: return "DeserializeError";
    case ErrorCode::kBarrierTimeout: return "BarrierTimeout";
    case ErrorCode::kRecvTimeout: return "RecvTimeout";
    case ErrorCode::kPolicyMismatch: return "PolicyMismatch";
    case ErrorCode::kSampleCountMismatch: return "SampleCountMismatch";
    case ErrorCode::kLabelDomainError: return "LabelDomainError";
    case ErrorCode::kBatchTooLarge: return "BatchTooLarge";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kSingleClassError: return "SingleClassError";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingLabelColumn: return "MissingLabelColumn";
    case ErrorCode::kTooFewColumns: return "TooFewColumns";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kSpecHashMismatch: return "SpecHashMismatch";
    case ErrorCode::kPartyCrashed: return "PartyCrashed";
    case ErrorCode::kHashMismatch: return "HashMismatch";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ssreg
