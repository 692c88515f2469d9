#include "samweb/error.hpp"

namespace samweb {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorKind::FrameSymbolPresent: return "FrameSymbolPresent";
        case ErrorKind::UnboundSymbol: return "UnboundSymbol";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::AllPointsSingular: return "AllPointsSingular";
        case ErrorKind::NonAffineWJet: return "NonAffineWJet";
        case ErrorKind::JetOrderOverflow: return "JetOrderOverflow";
        case ErrorKind::NondegeneracyViolation: return "NondegeneracyViolation";
        case ErrorKind::NonTerminatingRelationCycle: return "NonTerminatingRelationCycle";
        case ErrorKind::NoSignChange: return "NoSignChange";
        case ErrorKind::MarginViolation: return "MarginViolation";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::EmptyCell: return "EmptyCell";
        case ErrorKind::ConfigParseError: return "ConfigParseError";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

} // namespace samweb
