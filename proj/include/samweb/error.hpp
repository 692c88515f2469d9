#pragma once

#include <stdexcept>
#include <string>

namespace samweb {

// Every failure the library reports deliberately carries one of these kinds,
// so callers (and the CLI exit-code mapping) can switch on it without parsing
// message text.
enum class ErrorKind {
    SyntaxError,
    UnknownIdentifier,
    FrameSymbolPresent,
    UnboundSymbol,
    DomainViolation,
    AllPointsSingular,
    NonAffineWJet,
    JetOrderOverflow,
    NondegeneracyViolation,
    NonTerminatingRelationCycle,
    NoSignChange,
    MarginViolation,
    NoConvergence,
    EmptyCell,
    ConfigParseError,
    IoError,
    InvalidArgument,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace samweb
