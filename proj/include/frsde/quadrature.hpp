#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "frsde/grid.hpp"
#include "frsde/hurst.hpp"

namespace frsde::core {

/// Raised when an integral fails its refinement test.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KernelQuadOptions {
    std::size_t subintervals = 2048; ///< initial midpoint panel count
    double rel_tol = 1e-6;           ///< doubling-test tolerance
    int max_refinements = 6;         ///< doublings allowed before giving up
};

/// Integral of k_H(t, .) h(.) over (0, t).
///
/// Midpoint rule applied after the substitution s = t sin^2(theta), which
/// absorbs the integrable endpoint singularities of the kernel; no endpoint
/// is ever evaluated. The panel count is doubled until two successive
/// values agree to rel_tol; failure to converge within max_refinements
/// raises QuadratureError.
double kernel_integral(const HurstModel& model, double t,
                       const std::function<double(double)>& h,
                       const KernelQuadOptions& opt = {});

/// Cell masses K[i] = integral of k_H(t_k, .) over (t_i, t_{i+1}) for
/// i = 0..k-1 on a uniform grid, evaluated through the regularized
/// incomplete beta function (exact up to its own round-off).
std::vector<double> kernel_cell_masses(const HurstModel& model,
                                       const TimeGrid& grid, std::size_t k);

/// Discrete derivative with respect to the weight w: given node values
/// g_0..g_N returns (g_{k+1} - g_k) / (w_{k+1} - w_k) per grid cell.
/// Exact for g affine in w. Throws on a degenerate (non-increasing) w.
std::vector<double> d_dw(const HurstModel& model, const TimeGrid& grid,
                         const std::vector<double>& g);

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10, int max_depth = 30);

} // namespace frsde::core
