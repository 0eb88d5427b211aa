#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frsde/grid.hpp"
#include "frsde/hurst.hpp"
#include "frsde/rng.hpp"

namespace frsde::fbm {

/// One fractional Brownian motion path on a grid; values[0] = 0.
struct FbmPath {
    core::TimeGrid grid;
    std::vector<double> values;
    std::uint64_t seed_tag = 0;
};

/// Exact-in-distribution fBm synthesis: the node covariance
/// Cov(W_s, W_t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2 is factorized once
/// (Cholesky) and reused for every path. O(N^3) setup, O(N^2) per path.
class CholeskyFbm {
public:
    CholeskyFbm(const core::HurstModel& model, const core::TimeGrid& grid);

    FbmPath sample(core::RngStream& rng) const;

    const core::TimeGrid& grid() const { return grid_; }

    /// Hard cap on N for the dense factorization.
    static constexpr std::size_t max_steps = 4096;

private:
    core::TimeGrid grid_;
    std::size_t n_;
    std::vector<double> chol_; // packed row-major lower triangle
};

/// Davies-Harte circulant synthesis. Fast path for large grids; requires
/// N to be a power of two (minimal 2N embedding, whose eigenvalues are
/// provably nonnegative for fBm increments).
class DaviesHarteFbm {
public:
    DaviesHarteFbm(const core::HurstModel& model, const core::TimeGrid& grid);

    FbmPath sample(core::RngStream& rng) const;

    const core::TimeGrid& grid() const { return grid_; }

private:
    core::TimeGrid grid_;
    std::size_t n_;
    std::vector<double> sqrt_eigen_; // sqrt(lambda_k / (2 M)), M = 2N
};

/// One-off convenience: builds a Cholesky engine and draws a single path.
FbmPath simulate_fbm(const core::HurstModel& model, const core::TimeGrid& grid,
                     core::RngStream& rng);

/// CSV dump with columns k,t,value.
void write_path_csv(const FbmPath& path, const std::string& filename);

} // namespace frsde::fbm
