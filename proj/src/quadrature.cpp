#include "frsde/quadrature.hpp"

#include <cmath>

#include "frsde/special.hpp"

namespace frsde::core {

namespace {

// Midpoint rule in theta for s = t sin^2(theta):
//   int_0^t s^a (t-s)^a h(s) ds
//     = t^{2a+1} int_0^{pi/2} 2 (sin th cos th)^{2a+1} h(t sin^2 th) dth.
double transformed_midpoint(const HurstModel& model, double t,
                            const std::function<double(double)>& h,
                            std::size_t panels) {
    const double a = model.exponent();
    const double half_pi = M_PI / 2.0;
    const double dth = half_pi / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double th = (static_cast<double>(i) + 0.5) * dth;
        const double sn = std::sin(th);
        const double cs = std::cos(th);
        const double s = t * sn * sn;
        sum += 2.0 * std::pow(sn * cs, 2.0 * a + 1.0) * h(s);
    }
    return std::pow(t, 2.0 * a + 1.0) * sum * dth / model.kappa();
}

} // namespace

double kernel_integral(const HurstModel& model, double t,
                       const std::function<double(double)>& h,
                       const KernelQuadOptions& opt) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_integral: requires t > 0");
    std::size_t panels = opt.subintervals;
    double coarse = transformed_midpoint(model, t, h, panels);
    for (int level = 0; level < opt.max_refinements; ++level) {
        panels *= 2;
        const double fine = transformed_midpoint(model, t, h, panels);
        const double scale = std::max(std::fabs(fine), 1e-300);
        if (std::fabs(fine - coarse) <= opt.rel_tol * scale) return fine;
        coarse = fine;
    }
    throw QuadratureError("kernel_integral: doubling test failed after maximum refinement");
}

std::vector<double> kernel_cell_masses(const HurstModel& model,
                                       const TimeGrid& grid, std::size_t k) {
    if (k == 0 || k > grid.steps())
        throw std::invalid_argument("kernel_cell_masses: node index out of range");
    const double p = 1.5 - model.h();
    const double tk = grid.node(k);
    // int_0^y k_H(t,s) ds = t^{2p-1} B(p,p) I_{y/t}(p,p) / kappa
    const double front = std::pow(tk, 2.0 * p - 1.0) * beta_fn(p, p) / model.kappa();
    std::vector<double> masses(k);
    double prev = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(k);
        const double cur = (i == k) ? 1.0 : reg_inc_beta(p, p, x);
        masses[i - 1] = front * (cur - prev);
        prev = cur;
    }
    return masses;
}

std::vector<double> d_dw(const HurstModel& model, const TimeGrid& grid,
                         const std::vector<double>& g) {
    if (g.size() != grid.node_count())
        throw std::invalid_argument("d_dw: g must be given at every grid node");
    std::vector<double> out(grid.steps());
    double w_prev = 0.0;
    for (std::size_t k = 0; k < grid.steps(); ++k) {
        const double w_next = weight_wH(model, grid.node(k + 1));
        const double dw = w_next - w_prev;
        if (!(dw > 0.0)) throw std::invalid_argument("d_dw: weight increment must be positive");
        out[k] = (g[k + 1] - g[k]) / dw;
        w_prev = w_next;
    }
    return out;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double m, double fm, double whole,
                    double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

} // namespace frsde::core
