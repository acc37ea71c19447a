#ifndef SGN_ERROR_HPP_
#define SGN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgn {

enum class BreakdownKind {
    riccati_denominator,
    non_finite_update,
    non_finite_gradient,
    non_finite_residual,
};

constexpr std::string_view to_string(BreakdownKind k) noexcept {
    switch (k) {
        case BreakdownKind::riccati_denominator: return "riccati_denominator";
        case BreakdownKind::non_finite_update: return "non_finite_update";
        case BreakdownKind::non_finite_gradient: return "non_finite_gradient";
        case BreakdownKind::non_finite_residual: return "non_finite_residual";
    }
    return "unknown";
}

/// Raised when an estimator can no longer continue: the replication is
/// aborted and reported, never silently regularized.
class NumericalBreakdown : public std::runtime_error {
public:
    NumericalBreakdown(BreakdownKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    BreakdownKind kind() const noexcept { return kind_; }

private:
    BreakdownKind kind_;
};

/// Invalid experiment or model configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace sgn

#endif  // SGN_ERROR_HPP_
