#include "frsde/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "frsde/special.hpp"

namespace frsde::density {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double y) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), y);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double bernstein_basis(int m, int k, double x) {
    if (m < 0 || k < 0 || k > m)
        throw std::invalid_argument("bernstein_basis: k must lie in 0..m");
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("bernstein_basis: x must lie in [0, 1]");
    if (x == 0.0) return k == 0 ? 1.0 : 0.0;
    if (x == 1.0) return k == m ? 1.0 : 0.0;
    const double lg = core::log_gamma(m + 1.0) - core::log_gamma(k + 1.0) -
                      core::log_gamma(m - k + 1.0);
    return std::exp(lg + k * std::log(x) + (m - k) * std::log1p(-x));
}

std::vector<double> bernstein_basis_row(int degree, double x) {
    if (degree < 0) throw std::invalid_argument("bernstein_basis_row: negative degree");
    std::vector<double> row(degree + 1, 0.0);
    if (x <= 0.0) {
        if (x == 0.0) row[0] = 1.0;
        return row;
    }
    if (x >= 1.0) {
        if (x == 1.0) row[degree] = 1.0;
        return row;
    }
    // Anchor at the modal index, then recur outward; entries decay fast
    // away from the mode, so underflowed tails are simply zero.
    const int mode = std::clamp(static_cast<int>(std::lround(degree * x)), 0, degree);
    row[mode] = bernstein_basis(degree, mode, x);
    const double odds = x / (1.0 - x);
    for (int k = mode; k < degree; ++k) {
        row[k + 1] = row[k] * odds * (degree - k) / (k + 1.0);
        if (row[k + 1] < std::numeric_limits<double>::min()) {
            row[k + 1] = 0.0;
            break;
        }
    }
    for (int k = mode; k > 0; --k) {
        row[k - 1] = row[k] / odds * k / (degree - k + 1.0);
        if (row[k - 1] < std::numeric_limits<double>::min()) {
            row[k - 1] = 0.0;
            break;
        }
    }
    return row;
}

BernsteinDensity::BernsteinDensity(int order, std::vector<double> coeffs)
    : order_(order), coeffs_(std::move(coeffs)) {
    if (order_ < 1) throw std::invalid_argument("BernsteinDensity: order must be >= 1");
    if (coeffs_.size() != static_cast<std::size_t>(order_))
        throw std::invalid_argument("BernsteinDensity: need exactly m coefficients");
}

double BernsteinDensity::operator()(double x) const {
    if (x < 0.0 || x > 1.0) return 0.0;
    if (x == 0.0) return coeffs_.front();
    if (x == 1.0) return coeffs_.back();
    const auto basis = bernstein_basis_row(order_ - 1, x);
    double acc = 0.0;
    for (int k = 0; k < order_; ++k) acc += coeffs_[k] * basis[k];
    return acc;
}

BernsteinDensity fit_bernstein(const std::vector<double>& samples, int order) {
    if (order < 1) throw std::invalid_argument("fit_bernstein: order must be >= 1");
    const EmpiricalCdf cdf(samples);
    std::vector<double> coeffs(order);
    double prev = cdf(0.0);
    for (int k = 1; k <= order; ++k) {
        const double edge = (k == order) ? 1.0 : static_cast<double>(k) / order;
        const double cur = cdf(edge);
        coeffs[k - 1] = order * (cur - prev);
        prev = cur;
    }
    return BernsteinDensity(order, std::move(coeffs));
}

namespace {

// Bin index under the edge convention e_k < x <= e_{k+1}; -1 when x is
// outside (0, 1].
int bin_index(double x, int order) {
    if (!(x > 0.0) || x > 1.0) return -1;
    int k = std::min(static_cast<int>(std::ceil(x * order)) - 1, order - 1);
    if (k < 0) k = 0;
    // Guard against edge rounding: enforce e_k < x <= e_{k+1}.
    while (k > 0 && x <= static_cast<double>(k) / order) --k;
    while (k < order - 1 && x > static_cast<double>(k + 1) / order) ++k;
    return k;
}

double lscv_score_impl(const std::vector<double>& samples,
                       const BernsteinDensity& fit) {
    const int m = fit.order();
    const double n = static_cast<double>(samples.size());

    // Simpson on 513 nodes for int_0^1 f^2.
    constexpr int kNodes = 513;
    const double h = 1.0 / (kNodes - 1);
    double integral = 0.0;
    for (int i = 0; i < kNodes; ++i) {
        const double v = fit(i * h);
        const double wgt = (i == 0 || i == kNodes - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        integral += wgt * v * v;
    }
    integral *= h / 3.0;

    // Leave-one-out terms via the one-bin downdate:
    //   f^{(-j)}(x) = (n f(x) - m p_{bin(j)}(m-1, x)) / (n - 1).
    double cross = 0.0;
    for (const double xj : samples) {
        double fx = 0.0, pb = 0.0;
        if (xj >= 0.0 && xj <= 1.0) {
            const auto basis = bernstein_basis_row(m - 1, xj);
            for (int k = 0; k < m; ++k) fx += fit.coeffs()[k] * basis[k];
            const int bj = bin_index(xj, m);
            if (bj >= 0) pb = basis[bj];
        }
        cross += (n * fx - m * pb) / (n - 1.0);
    }
    return integral - 2.0 / n * cross;
}

} // namespace

double lscv_score(const std::vector<double>& samples, int order) {
    if (samples.size() < 3)
        throw std::invalid_argument("lscv_score: need at least 3 samples");
    return lscv_score_impl(samples, fit_bernstein(samples, order));
}

int lscv_select_m(const std::vector<double>& samples,
                  const std::vector<int>& m_grid) {
    if (samples.size() < 3)
        throw std::invalid_argument("lscv_select_m: need at least 3 samples");
    if (m_grid.empty())
        throw std::invalid_argument("lscv_select_m: empty candidate grid");
    int best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (const int m : m_grid) {
        const double score = lscv_score_impl(samples, fit_bernstein(samples, m));
        if (score < best_score || (score == best_score && m < best)) {
            best_score = score;
            best = m;
        }
    }
    return best;
}

std::vector<int> default_m_grid(std::size_t n) {
    const int top = static_cast<int>(std::ceil(4.0 * std::pow(static_cast<double>(n), 0.4)));
    std::vector<int> grid;
    for (int m = 2; m <= std::max(top, 2); ++m) grid.push_back(m);
    return grid;
}

} // namespace frsde::density
