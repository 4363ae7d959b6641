#ifndef CONEWAVE_QUADRATURE_HPP
#define CONEWAVE_QUADRATURE_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace conewave {

// Nodes and weights of one composite Gauss-Legendre rule; callers that reuse
// the same abscissas (Hankel fields) precompute against this layout.
struct QuadGrid {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

// [a,b] split into n_panels panels, 16-point Gauss-Legendre on each.
QuadGrid panel_grid(double a, double b, int n_panels);

// Reference 16-point Gauss-Legendre rule on [-1, 1].
const double* gl16_nodes();
const double* gl16_weights();

// Panel count so that a phase advancing at `total_phase` radians over [a,b]
// is sampled with at least `pts_per_period` points per 2*pi of phase.
int panels_for_phase(double total_phase, double pts_per_period = 8.0);

double integrate(const QuadGrid& g, const std::function<double(double)>& f);

// Composite rule with one refinement step as error estimate.  Throws
// QuadratureError (with the estimate in the message) if the two levels
// disagree by more than tol * scale.
double integrate_checked(const std::function<double(double)>& f,
                         double a, double b, int n_panels,
                         double tol, double scale, const char* what);

// Adaptive bisection for smooth (possibly endpoint-singular but integrable)
// integrands of a complex-valued function.
std::complex<double> integrate_adaptive_complex(
    const std::function<std::complex<double>(double)>& f,
    double a, double b, double abs_tol, int max_depth = 40);

} // namespace conewave

#endif
