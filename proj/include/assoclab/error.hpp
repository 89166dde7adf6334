// Typed error hierarchy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace assoclab {

enum class ErrorKind {
    Parameter,     // bad sizes, negative eigenvalues, invalid enum values
    Dimension,     // mismatched vector/matrix dimensions
    Degenerate,    // zero-variance input where a ratio is required
    Construction,  // graph construction failed (retry cap exceeded)
    Size,          // exceeds an enumeration/decomposition cap
    Regime,        // parameters outside a theorem's regime
    Config,        // config file parse/validation problems
    Unsupported,   // feature intentionally not provided
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::Degenerate: return "degenerate";
        case ErrorKind::Construction: return "construction";
        case ErrorKind::Size: return "size";
        case ErrorKind::Regime: return "regime";
        case ErrorKind::Config: return "config";
        case ErrorKind::Unsupported: return "unsupported";
    }
    return "unknown";
}

}  // namespace assoclab
