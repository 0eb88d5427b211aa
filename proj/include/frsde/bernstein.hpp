#pragma once

#include <cstddef>
#include <vector>

namespace frsde::density {

/// Right-continuous empirical distribution function of arbitrary reals.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    /// F(y) = #{samples <= y} / n.
    double operator()(double y) const;

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

/// Single basis polynomial binomial(m,k) x^k (1-x)^{m-k}, computed in log
/// space so large orders stay finite. Throws for k outside 0..m.
double bernstein_basis(int m, int k, double x);

/// All of p_0..p_degree(degree, x) by outward recurrence from the modal
/// index; O(degree) and stable for large degrees.
std::vector<double> bernstein_basis_row(int degree, double x);

/// Histogram-on-[0,1] smoother: coefficients c_k = m (F(e_{k+1}) - F(e_k))
/// over the bin edges e_k = k/m; evaluates to sum_k c_k p_k(m-1, x).
/// Samples outside (0,1] simply never land in a bin.
class BernsteinDensity {
public:
    BernsteinDensity(int order, std::vector<double> coeffs);

    double operator()(double x) const;

    int order() const { return order_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    int order_;
    std::vector<double> coeffs_;
};

BernsteinDensity fit_bernstein(const std::vector<double>& samples, int order);

/// Least-squares cross-validation order selection: minimizes
///   int f^2 - (2/n) sum_j f^{(-j)}(x_j)
/// over the candidate orders (ties resolved toward the smaller order).
/// The squared-density integral uses Simpson's rule on 513 nodes; the
/// leave-one-out values come from the one-bin downdate of the fit.
int lscv_select_m(const std::vector<double>& samples,
                  const std::vector<int>& m_grid);

/// LSCV score of a single order (exposed for diagnostics and tests).
double lscv_score(const std::vector<double>& samples, int order);

/// Default candidate orders 2 .. ceil(4 n^{2/5}).
std::vector<int> default_m_grid(std::size_t n);

} // namespace frsde::density
