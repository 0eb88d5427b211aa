#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace frsde::core {

/// Uniform time grid t_k = k T / N, k = 0..N.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t steps)
        : horizon_(horizon), steps_(steps) {
        if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: T must be > 0");
        if (steps < 2) throw std::invalid_argument("TimeGrid: N must be >= 2");
    }

    double horizon() const { return horizon_; }
    std::size_t steps() const { return steps_; }
    std::size_t node_count() const { return steps_ + 1; }
    double dt() const { return horizon_ / static_cast<double>(steps_); }
    double node(std::size_t k) const { return static_cast<double>(k) * horizon_ / static_cast<double>(steps_); }

    std::vector<double> nodes() const {
        std::vector<double> out(node_count());
        for (std::size_t k = 0; k <= steps_; ++k) out[k] = node(k);
        return out;
    }

    bool operator==(const TimeGrid& o) const {
        return horizon_ == o.horizon_ && steps_ == o.steps_;
    }

private:
    double horizon_;
    std::size_t steps_;
};

} // namespace frsde::core
