#include "conewave/quadrature.hpp"

#include "conewave/errors.hpp"
#include "conewave/io.hpp"

#include <algorithm>
#include <cmath>

namespace conewave {

namespace {

constexpr int kGL = 16;

constexpr double kGLNode[kGL] = {
    -0.9894009349916499326, -0.94457502307323257608, -0.86563120238783174388,
    -0.7554044083550030339, -0.61787624440264374845, -0.45801677765722738634,
    -0.28160355077925891323, -0.095012509837637440185, 0.095012509837637440185,
    0.28160355077925891323, 0.45801677765722738634, 0.61787624440264374845,
    0.7554044083550030339, 0.86563120238783174388, 0.94457502307323257608,
    0.9894009349916499326};

constexpr double kGLWeight[kGL] = {
    0.027152459411754094852, 0.062253523938647892863, 0.09515851168249278481,
    0.12462897125553387205, 0.14959598881657673208, 0.16915651939500253819,
    0.18260341504492358887, 0.18945061045506849629, 0.18945061045506849629,
    0.18260341504492358887, 0.16915651939500253819, 0.14959598881657673208,
    0.12462897125553387205, 0.09515851168249278481, 0.062253523938647892863,
    0.027152459411754094852};

std::complex<double> gl16_complex(const std::function<std::complex<double>(double)>& f,
                                  double a, double b)
{
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::complex<double> acc = 0.0;
    for (int i = 0; i < kGL; ++i)
        acc += kGLWeight[i] * f(mid + half * kGLNode[i]);
    return acc * half;
}

std::complex<double> adaptive_rec(const std::function<std::complex<double>(double)>& f,
                                  double a, double b, std::complex<double> whole,
                                  double abs_tol, int depth)
{
    const double mid = 0.5 * (a + b);
    const std::complex<double> left = gl16_complex(f, a, mid);
    const std::complex<double> right = gl16_complex(f, mid, b);
    const std::complex<double> sum = left + right;
    if (std::abs(sum - whole) <= abs_tol || depth <= 0)
        return sum;
    return adaptive_rec(f, a, mid, left, 0.5 * abs_tol, depth - 1) +
           adaptive_rec(f, mid, b, right, 0.5 * abs_tol, depth - 1);
}

} // namespace

const double* gl16_nodes() { return kGLNode; }
const double* gl16_weights() { return kGLWeight; }

QuadGrid panel_grid(double a, double b, int n_panels)
{
    n_panels = std::max(1, n_panels);
    QuadGrid g;
    g.nodes.reserve(static_cast<std::size_t>(n_panels) * kGL);
    g.weights.reserve(static_cast<std::size_t>(n_panels) * kGL);
    const double h = (b - a) / n_panels;
    for (int p = 0; p < n_panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        for (int i = 0; i < kGL; ++i) {
            g.nodes.push_back(mid + 0.5 * h * kGLNode[i]);
            g.weights.push_back(0.5 * h * kGLWeight[i]);
        }
    }
    return g;
}

int panels_for_phase(double total_phase, double pts_per_period)
{
    const double periods = std::abs(total_phase) / (2.0 * M_PI);
    const double points = periods * pts_per_period;
    return std::max(1, static_cast<int>(std::ceil(points / kGL)) + 1);
}

double integrate(const QuadGrid& g, const std::function<double(double)>& f)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        acc += g.weights[i] * f(g.nodes[i]);
    return acc;
}

double integrate_checked(const std::function<double(double)>& f,
                         double a, double b, int n_panels,
                         double tol, double scale, const char* what)
{
    const double coarse = integrate(panel_grid(a, b, n_panels), f);
    const double fine = integrate(panel_grid(a, b, 2 * n_panels), f);
    const double est = std::abs(fine - coarse);
    if (est > tol * std::max(scale, std::abs(fine))) {
        throw QuadratureError(std::string(what) + ": quadrature did not converge, est_err=" +
                              fmt_double(est) + " panels=" + std::to_string(2 * n_panels) +
                              " interval=[" + fmt_double(a) + "," + fmt_double(b) + "]");
    }
    return fine;
}

std::complex<double> integrate_adaptive_complex(
    const std::function<std::complex<double>(double)>& f,
    double a, double b, double abs_tol, int max_depth)
{
    return adaptive_rec(f, a, b, gl16_complex(f, a, b), abs_tol, max_depth);
}

} // namespace conewave
