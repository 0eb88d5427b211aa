#pragma once

#include <cmath>
#include <stdexcept>

namespace frsde::density {

/// Monotone bijections from a native support onto [0, 1], used to bring
/// arbitrary effect supports into Bernstein range. Each transform carries
/// its inverse; round trips are identities up to round-off.
class SupportTransform {
public:
    static SupportTransform affine(double lo, double hi) {
        if (!(lo < hi)) throw std::invalid_argument("affine transform: requires lo < hi");
        return SupportTransform(Kind::affine, lo, hi);
    }
    /// y in [0, inf) -> y / (1 + y).
    static SupportTransform positive() { return SupportTransform(Kind::positive, 0, 0); }
    /// y in R -> 1/2 + arctan(y) / pi.
    static SupportTransform real_line() { return SupportTransform(Kind::real_line, 0, 0); }

    double to_unit(double y) const {
        switch (kind_) {
            case Kind::affine:
                return (y - lo_) / (hi_ - lo_);
            case Kind::positive:
                if (y < 0.0) throw std::domain_error("positive transform: requires y >= 0");
                return y / (1.0 + y);
            case Kind::real_line:
                return 0.5 + std::atan(y) / M_PI;
        }
        return 0.0; // unreachable
    }

    double from_unit(double z) const {
        switch (kind_) {
            case Kind::affine:
                return lo_ + z * (hi_ - lo_);
            case Kind::positive:
                if (z < 0.0 || z >= 1.0)
                    throw std::domain_error("positive transform: inverse needs z in [0, 1)");
                return z / (1.0 - z);
            case Kind::real_line:
                if (z <= 0.0 || z >= 1.0)
                    throw std::domain_error("real_line transform: inverse needs z in (0, 1)");
                return std::tan(M_PI * (z - 0.5));
        }
        return 0.0; // unreachable
    }

private:
    enum class Kind { affine, positive, real_line };
    SupportTransform(Kind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}

    Kind kind_;
    double lo_, hi_;
};

} // namespace frsde::density
