#pragma once

#include <stdexcept>
#include <string>

namespace lswarm {

/// Invalid or inconsistent configuration (bad key, out-of-range value, crowded arena).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A genome or network violates a structural invariant (cycle, dangling endpoint).
class StructuralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke an operation's precondition (wrong observation width, stepping a finished episode).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed serialized document (genome, checkpoint, trajectory log).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lswarm
