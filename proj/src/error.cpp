#include "causal/error.hpp"

namespace causal {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonNormalized: return "NonNormalized";
        case Errc::NegativeWeight: return "NegativeWeight";
        case Errc::OutOfDomain: return "OutOfDomain";
        case Errc::NotSupercritical: return "NotSupercritical";
        case Errc::DegenerateQ: return "DegenerateQ";
        case Errc::SizeLimit: return "SizeLimit";
        case Errc::NoBackbone: return "NoBackbone";
        case Errc::Mu0Positive: return "Mu0Positive";
        case Errc::UnknownVertex: return "UnknownVertex";
        case Errc::Disconnected: return "Disconnected";
        case Errc::NotClosed: return "NotClosed";
        case Errc::NotASlice: return "NotASlice";
        case Errc::TooShallow: return "TooShallow";
        case Errc::NoPlateau: return "NoPlateau";
        case Errc::IsolatedVertex: return "IsolatedVertex";
        case Errc::InsufficientMaterialization: return "InsufficientMaterialization";
        case Errc::TailNotAboveH: return "TailNotAboveH";
        case Errc::NoRegenerations: return "NoRegenerations";
        case Errc::NotYetReached: return "NotYetReached";
        case Errc::NotKFree: return "NotKFree";
        case Errc::DisconnectedTerminals: return "DisconnectedTerminals";
        case Errc::SolverFailure: return "SolverFailure";
        case Errc::TooLarge: return "TooLarge";
        case Errc::TerminalsNotOuter: return "TerminalsNotOuter";
        case Errc::TooFewCutsets: return "TooFewCutsets";
        case Errc::TruncationDies: return "TruncationDies";
        case Errc::ConfigInvalid: return "ConfigInvalid";
        case Errc::IoError: return "IoError";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace causal
