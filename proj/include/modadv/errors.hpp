#pragma once

#include <stdexcept>
#include <string>

namespace modadv {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller passed a value that violates a precondition (bad dimension, off-grid SNR, ...).
struct InvalidInput : Error {
    explicit InvalidInput(const std::string& msg) : Error("invalid input: " + msg) {}
};

// A documented inter-module contract was broken (unscaled features, scaler mismatch, ...).
struct ContractError : Error {
    explicit ContractError(const std::string& msg) : Error("contract violation: " + msg) {}
};

// A file on disk does not match its declared format; carries a byte offset or field name.
struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error("format error: " + msg) {}
};

// Training failed (divergence, non-convergence, degenerate data).
struct TrainingError : Error {
    explicit TrainingError(const std::string& msg) : Error("training error: " + msg) {}
};

// Filesystem problem, always naming the path involved.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("io error: " + msg) {}
};

} // namespace modadv
