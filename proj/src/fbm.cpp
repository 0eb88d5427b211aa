#include "frsde/fbm.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>

namespace frsde::fbm {

namespace {

double fbm_cov(double s, double t, double two_h) {
    return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) -
                  std::pow(std::fabs(t - s), two_h));
}

// In-place Cholesky of a packed row-major lower triangle. Returns false
// if a pivot is not positive.
bool cholesky_packed(std::vector<double>& a, std::size_t n) {
    auto at = [&](std::size_t r, std::size_t c) -> double& {
        return a[r * (r + 1) / 2 + c];
    };
    for (std::size_t j = 0; j < n; ++j) {
        double d = at(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        at(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
            at(i, j) = s / ljj;
        }
    }
    return true;
}

} // namespace

CholeskyFbm::CholeskyFbm(const core::HurstModel& model, const core::TimeGrid& grid)
    : grid_(grid), n_(grid.steps()) {
    if (n_ > max_steps)
        throw std::invalid_argument(
            "CholeskyFbm: N exceeds the dense-factorization limit (" +
            std::to_string(max_steps) + "); use DaviesHarteFbm");
    const double two_h = 2.0 * model.h();
    chol_.resize(n_ * (n_ + 1) / 2);
    auto fill = [&](double jitter) {
        for (std::size_t i = 0; i < n_; ++i) {
            const double ti = grid.node(i + 1);
            for (std::size_t j = 0; j <= i; ++j)
                chol_[i * (i + 1) / 2 + j] = fbm_cov(grid.node(j + 1), ti, two_h) +
                                             (i == j ? jitter : 0.0);
        }
    };
    fill(0.0);
    if (!cholesky_packed(chol_, n_)) {
        // One retry with a small diagonal jitter before giving up.
        fill(1e-12);
        if (!cholesky_packed(chol_, n_))
            throw std::runtime_error(
                "CholeskyFbm: covariance factorization failed; "
                "reduce N or add jitter");
    }
}

FbmPath CholeskyFbm::sample(core::RngStream& rng) const {
    std::vector<double> z(n_);
    for (auto& v : z) v = rng.next_normal();
    FbmPath path{grid_, std::vector<double>(n_ + 1, 0.0), rng.tag()};
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = &chol_[i * (i + 1) / 2];
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += row[j] * z[j];
        path.values[i + 1] = s;
    }
    return path;
}

namespace {

// Iterative radix-2 complex FFT, power-of-two length.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? -1.0 : 1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

DaviesHarteFbm::DaviesHarteFbm(const core::HurstModel& model,
                               const core::TimeGrid& grid)
    : grid_(grid), n_(grid.steps()) {
    if (!is_pow2(n_))
        throw std::invalid_argument(
            "DaviesHarteFbm: N must be a power of two (minimal circulant embedding)");
    const double two_h = 2.0 * model.h();
    const double dt_2h = std::pow(grid.dt(), two_h);
    // Autocovariance of unit-lag fBm increments, scaled by dt^{2H}.
    auto gamma = [&](std::size_t k) {
        const double kd = static_cast<double>(k);
        return 0.5 * dt_2h *
               (std::pow(kd + 1.0, two_h) - 2.0 * std::pow(kd, two_h) +
                std::pow(std::fabs(kd - 1.0), two_h));
    };
    const std::size_t m = 2 * n_;
    std::vector<std::complex<double>> row(m);
    for (std::size_t k = 0; k <= n_; ++k) row[k] = gamma(k);
    for (std::size_t k = n_ + 1; k < m; ++k) row[k] = gamma(m - k);
    fft_pow2(row, false);
    sqrt_eigen_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lam = row[k].real();
        if (lam < 0.0) {
            if (lam < -1e-9 * std::fabs(row[0].real()))
                throw std::runtime_error("DaviesHarteFbm: negative circulant eigenvalue");
            lam = 0.0;
        }
        sqrt_eigen_[k] = std::sqrt(lam / static_cast<double>(2 * m));
    }
}

FbmPath DaviesHarteFbm::sample(core::RngStream& rng) const {
    const std::size_t m = 2 * n_;
    std::vector<std::complex<double>> v(m);
    v[0] = std::sqrt(2.0) * sqrt_eigen_[0] * rng.next_normal();
    v[n_] = std::sqrt(2.0) * sqrt_eigen_[n_] * rng.next_normal();
    for (std::size_t k = 1; k < n_; ++k) {
        const double re = rng.next_normal();
        const double im = rng.next_normal();
        v[k] = sqrt_eigen_[k] * std::complex<double>(re, im);
        v[m - k] = std::conj(v[k]);
    }
    fft_pow2(v, false);
    FbmPath path{grid_, std::vector<double>(n_ + 1, 0.0), rng.tag()};
    double acc = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
        acc += v[k].real();
        path.values[k + 1] = acc;
    }
    return path;
}

FbmPath simulate_fbm(const core::HurstModel& model, const core::TimeGrid& grid,
                     core::RngStream& rng) {
    return CholeskyFbm(model, grid).sample(rng);
}

void write_path_csv(const FbmPath& path, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("write_path_csv: cannot open " + filename);
    out << "k,t,value\n";
    char buf[64];
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g", k, path.grid.node(k),
                      path.values[k]);
        out << buf << '\n';
    }
}

} // namespace frsde::fbm
