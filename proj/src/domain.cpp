#include "linagg/domain.hpp"

#include <cmath>
#include <numbers>

#include "linagg/error.hpp"

namespace linagg {

namespace {

bool same(double a, double b) { return std::abs(a - b) <= 1e-12; }

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid configuration:";
    for (const auto& e : errors) out += "\n  - " + e;
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

Domain Domain::zero_two_pi() { return {0.0, 2.0 * std::numbers::pi}; }
Domain Domain::minus_pi_pi() { return {-std::numbers::pi, std::numbers::pi}; }
Domain Domain::unit() { return {0.0, 1.0}; }

Domain Domain::parse(const std::string& name) {
    if (name == "0_2pi") return zero_two_pi();
    if (name == "-pi_pi") return minus_pi_pi();
    if (name == "0_1") return unit();
    throw ParameterError("unknown domain '" + name + "' (expected 0_2pi, -pi_pi or 0_1)");
}

Domain::Domain(double lower, double upper) : lower_(lower), upper_(upper) {
    if (!(lower < upper)) throw ParameterError("domain requires lower < upper");
    const bool supported = (same(lower, 0.0) && same(upper, 2.0 * std::numbers::pi)) ||
                           (same(lower, -std::numbers::pi) && same(upper, std::numbers::pi)) ||
                           (same(lower, 0.0) && same(upper, 1.0));
    if (!supported) throw ParameterError("unsupported domain; use [0,2pi], [-pi,pi] or [0,1]");
}

void Domain::require(double x) const {
    if (!contains(x)) {
        throw DomainError("point " + std::to_string(x) + " outside domain " + name());
    }
}

bool Domain::is_periodic_2pi() const noexcept { return same(length(), 2.0 * std::numbers::pi); }

std::string Domain::name() const {
    if (same(lower_, 0.0) && same(upper_, 1.0)) return "0_1";
    if (same(lower_, 0.0)) return "0_2pi";
    return "-pi_pi";
}

}  // namespace linagg
