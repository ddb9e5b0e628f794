#pragma once

#include <stdexcept>
#include <string>

namespace causal {

enum class Errc {
    NonNormalized,
    NegativeWeight,
    OutOfDomain,
    NotSupercritical,
    DegenerateQ,
    SizeLimit,
    NoBackbone,
    Mu0Positive,
    UnknownVertex,
    Disconnected,
    NotClosed,
    NotASlice,
    TooShallow,
    NoPlateau,
    IsolatedVertex,
    InsufficientMaterialization,
    TailNotAboveH,
    NoRegenerations,
    NotYetReached,
    NotKFree,
    DisconnectedTerminals,
    SolverFailure,
    TooLarge,
    TerminalsNotOuter,
    TooFewCutsets,
    TruncationDies,
    ConfigInvalid,
    IoError,
    ParseError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace causal
