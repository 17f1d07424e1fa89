#pragma once

#include <string>

namespace linagg {

/// Support of the uniform design. Only [0, 2pi], [-pi, pi] and [0, 1] are
/// supported.
class Domain {
  public:
    static Domain zero_two_pi();
    static Domain minus_pi_pi();
    static Domain unit();
    /// Parses "0_2pi", "-pi_pi" or "0_1".
    static Domain parse(const std::string& name);

    Domain(double lower, double upper);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    double length() const noexcept { return upper_ - lower_; }
    bool contains(double x) const noexcept { return x >= lower_ && x <= upper_; }
    /// Throws DomainError when x is outside [lower, upper].
    void require(double x) const;
    /// Affine map onto [0, 1].
    double to_unit(double x) const noexcept { return (x - lower_) / length(); }
    double from_unit(double u) const noexcept { return lower_ + u * length(); }
    /// True for the 2pi-periodic supports.
    bool is_periodic_2pi() const noexcept;
    std::string name() const;

    friend bool operator==(const Domain&, const Domain&) = default;

  private:
    double lower_;
    double upper_;
};

}  // namespace linagg
