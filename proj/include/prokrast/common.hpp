#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace prokrast {

// Absolute tolerance for perceived-cost ties and breakpoint merging.
// Edge weights are plain doubles, so every downstream comparison that can
// tie (agent choices, menu choices, envelope crossings) uses this slack.
inline constexpr double kTieTol = 1e-12;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Graph construction / validation.
class LayeringError : public Error { public: using Error::Error; };
class DisconnectedError : public Error { public: using Error::Error; };
class NegativeWeightError : public Error { public: using Error::Error; };
class CycleError : public Error { public: using Error::Error; };
class UnreachableTargetError : public Error { public: using Error::Error; };

// Operation preconditions (wrong graph class, invalid parameters, ...).
class PreconditionError : public Error { public: using Error::Error; };

// Worst-case synthesis and bound machinery.
class UnboundedRatioError : public Error { public: using Error::Error; };
class NoValidFractionError : public Error { public: using Error::Error; };
class NoValidDeltaError : public Error { public: using Error::Error; };
class ConditionUnsatisfiableError : public Error { public: using Error::Error; };
class InvalidThresholdError : public Error { public: using Error::Error; };
class NotDominantError : public Error { public: using Error::Error; };

// Pricing.
class NonMonotoneMenuError : public Error { public: using Error::Error; };

/// Format with a fixed number of significant digits ('.' decimal, no locale).
inline std::string fmt_sig(double x, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return buf;
}

}  // namespace prokrast
