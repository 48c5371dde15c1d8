#pragma once

#include <stdexcept>
#include <string>

namespace tropic {

enum class Errc {
    ZeroDivision,
    NotPositiveValuation,
    NotAFacet,
    ConstantPolynomial,
    DisconnectedPath,
    UnboundedEdgeInPath,
    GenusNotOne,
    NotAZero,
    SingularInitialTerm,
    NotOnTropicalization,
    VertexPoint,
    NoRationalRoot,
    NotSmooth,
    NotAnEnd,
    NotAnIdeal,
    HypothesisFailed,
    ThresholdViolated,
    PrecisionExhausted,
    InvalidInput,
};

inline const char* errc_name(Errc e) {
    switch (e) {
        case Errc::ZeroDivision: return "ZeroDivision";
        case Errc::NotPositiveValuation: return "NotPositiveValuation";
        case Errc::NotAFacet: return "NotAFacet";
        case Errc::ConstantPolynomial: return "ConstantPolynomial";
        case Errc::DisconnectedPath: return "DisconnectedPath";
        case Errc::UnboundedEdgeInPath: return "UnboundedEdgeInPath";
        case Errc::GenusNotOne: return "GenusNotOne";
        case Errc::NotAZero: return "NotAZero";
        case Errc::SingularInitialTerm: return "SingularInitialTerm";
        case Errc::NotOnTropicalization: return "NotOnTropicalization";
        case Errc::VertexPoint: return "VertexPoint";
        case Errc::NoRationalRoot: return "NoRationalRoot";
        case Errc::NotSmooth: return "NotSmooth";
        case Errc::NotAnEnd: return "NotAnEnd";
        case Errc::NotAnIdeal: return "NotAnIdeal";
        case Errc::HypothesisFailed: return "HypothesisFailed";
        case Errc::ThresholdViolated: return "ThresholdViolated";
        case Errc::PrecisionExhausted: return "PrecisionExhausted";
        case Errc::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

/// Single exception type for all semantic failures; `code()` names the case.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace tropic
