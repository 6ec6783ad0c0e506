// SPDX-License-Identifier: Apache-2.0
#include "ezchain/core/error.hpp"

namespace ezchain {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidValue: return "InvalidValue";
        case ErrorCode::SplitOutOfRange: return "SplitOutOfRange";
        case ErrorCode::MalformedEncoding: return "MalformedEncoding";
        case ErrorCode::KeyError: return "KeyError";
        case ErrorCode::EmptyTree: return "EmptyTree";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::UnknownSender: return "UnknownSender";
        case ErrorCode::BlockPruned: return "BlockPruned";
        case ErrorCode::InsufficientFunds: return "InsufficientFunds";
        case ErrorCode::ValueNotHeld: return "ValueNotHeld";
        case ErrorCode::NotYetIncluded: return "NotYetIncluded";
        case ErrorCode::ProofUnavailable: return "ProofUnavailable";
        case ErrorCode::InfeasibleTopology: return "InfeasibleTopology";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::ScenarioError: return "ScenarioError";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ChainMismatch: return "ChainMismatch";
        case ErrorCode::SelfTransfer: return "SelfTransfer";
    }
    return "Unknown";
}

}  // namespace ezchain
