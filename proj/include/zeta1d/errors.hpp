#ifndef ZETA1D_ERRORS_HPP
#define ZETA1D_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace zeta1d {

/// Half-open byte range in an input string, with 1-based line/column of its start.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
    long line = 1;
    long column = 1;
};

enum class ErrCode {
    InvalidField,
    InvalidCurve,
    GlueMismatch,
    MissingPoint,
    NonNegativeWeight,
    PrecisionUnachievable,
    NotAVanishingPoint,
    ExactUnavailable,
    WeightMismatch,
    MalformedData,
    InconsistentWithStructure,
    IncompleteProfile,
    NonIntegralT1,
    RegulatorRequired,
    OrderMismatch,
    SyntaxError,
    UsageError,
    InternalInconsistency,
};

const char* err_name(ErrCode code);

class Error : public std::runtime_error {
public:
    Error(ErrCode code, const std::string& message)
        : std::runtime_error(std::string("[") + err_name(code) + "] " + message), code_(code) {}
    Error(ErrCode code, const std::string& message, SourceSpan span)
        : std::runtime_error(std::string("[") + err_name(code) + "] " + message), code_(code),
          span_(span) {}

    ErrCode code() const { return code_; }
    const std::optional<SourceSpan>& span() const { return span_; }

private:
    ErrCode code_;
    std::optional<SourceSpan> span_;
};

inline const char* err_name(ErrCode code) {
    switch (code) {
    case ErrCode::InvalidField: return "InvalidField";
    case ErrCode::InvalidCurve: return "InvalidCurve";
    case ErrCode::GlueMismatch: return "GlueMismatch";
    case ErrCode::MissingPoint: return "MissingPoint";
    case ErrCode::NonNegativeWeight: return "NonNegativeWeight";
    case ErrCode::PrecisionUnachievable: return "PrecisionUnachievable";
    case ErrCode::NotAVanishingPoint: return "NotAVanishingPoint";
    case ErrCode::ExactUnavailable: return "ExactUnavailable";
    case ErrCode::WeightMismatch: return "WeightMismatch";
    case ErrCode::MalformedData: return "MalformedData";
    case ErrCode::InconsistentWithStructure: return "InconsistentWithStructure";
    case ErrCode::IncompleteProfile: return "IncompleteProfile";
    case ErrCode::NonIntegralT1: return "NonIntegralT1";
    case ErrCode::RegulatorRequired: return "RegulatorRequired";
    case ErrCode::OrderMismatch: return "OrderMismatch";
    case ErrCode::SyntaxError: return "SyntaxError";
    case ErrCode::UsageError: return "UsageError";
    case ErrCode::InternalInconsistency: return "InternalInconsistency";
    }
    return "Unknown";
}

} // namespace zeta1d

#endif
