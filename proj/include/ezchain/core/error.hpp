// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ezchain {

enum class ErrorCode {
    InvalidValue,
    SplitOutOfRange,
    MalformedEncoding,
    KeyError,
    EmptyTree,
    IndexOutOfRange,
    UnknownSender,
    BlockPruned,
    InsufficientFunds,
    ValueNotHeld,
    NotYetIncluded,
    ProofUnavailable,
    InfeasibleTopology,
    ConfigError,
    ScenarioError,
    BoundViolated,
    IoError,
    ChainMismatch,
    SelfTransfer,
};

std::string_view to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the library; `code()` identifies the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ezchain
