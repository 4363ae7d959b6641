#ifndef CONEWAVE_HANKEL_HPP
#define CONEWAVE_HANKEL_HPP

#include "conewave/solver.hpp"

#include <array>
#include <complex>
#include <memory>
#include <vector>

namespace conewave::solver {

struct QuadratureSpec {
    double pts_per_osc = 8.0;   // points per J_nu oscillation in r-integrals
    int min_panels = 12;        // floor resolving the data's own shape
    double tail_rel = 1e-10;    // lambda cutoff: |A| tail below this * peak
    double rel_tol = 1e-9;      // refinement tolerance for checked integrals
    double probe_step = 0.25;   // lambda spacing of the tail probe
    double lambda_cap = 2000.0; // probe gives up beyond this
    double forced_lambda_max = 0.0; // > 0 skips the probe (shared-grid tests)
    double validation_tol = 1e-6; // field build: |u(0,r) - u0| allowance
};

// A(lambda) = int_0^inf f(r) r^{(n-2)/2} J_nu(lambda r) r dr for compactly
// supported f; refinement-checked adaptive panels.
std::vector<double> hankel_transform(const std::function<double(double)>& f,
                                     double r_a, double r_b, double nu, int n,
                                     const std::vector<double>& lambda_grid,
                                     const QuadratureSpec& spec = {});

// Exact mode evolution through the order-nu Hankel functional calculus:
//   u(t,r) = int [cos(lambda t) A + sin(lambda t)/lambda B]
//            J_nu(lambda r) r^{-(n-2)/2} lambda d lambda,
// with A, B cached on a fixed quadrature grid chosen for a caller-declared
// frequency budget (the largest |t| + r it will be asked to evaluate).
class HankelModeField {
public:
    static HankelModeField build(const ModeInitialData& data, double max_t_plus_r,
                                 const QuadratureSpec& spec = {});

    double nu() const { return nu_; }
    int n() const { return n_; }
    double mu_sq() const;
    double lambda_max() const { return lambda_max_; }
    std::size_t nodes() const { return lambda_.size(); }
    double frequency_budget() const { return budget_; }

    double eval(double t, double r) const;
    double eval_dt(double t, double r) const;
    double eval_dr(double t, double r) const;

    ModeSolution evolve(const std::vector<double>& t_grid,
                        const std::vector<double>& r_grid) const;

    // Large-r stationary-phase limit of r^{(n-1)/2} u(s + r, r): an
    // independent closed-form route to the radiation field,
    //   R(s) = Re[ e^{i phi_nu}/sqrt(2 pi) *
    //              int sqrt(lambda) (A - i B/lambda) e^{i lambda s} d lambda ],
    // phi_nu = nu pi/2 + pi/4.
    double radiation_closed_form(double s) const;

    const std::vector<double>& lambda_nodes() const { return lambda_; }
    const std::vector<double>& quad_weights() const { return weight_; }
    const std::vector<double>& amplitude_a() const { return a_; }
    const std::vector<double>& amplitude_b() const { return b_; }

    // u(s + r, r) for r far beyond the direct grid's frequency budget.  The
    // Bessel kernel is replaced by its large-argument modulus/phase form and
    // the two oscillatory components (frequencies s and s + 2r) integrated by
    // a Filon rule whose cost does not grow with r.  Requires
    // r * lambda_max well above the asymptotic threshold.
    class Retarded {
    public:
        double operator()(double s) const;
        double r() const { return r_; }

    private:
        friend class HankelModeField;
        struct FarPanel {
            double mid, half;
            std::array<std::complex<double>, 16> c1, c2; // Legendre coefficients
        };
        const HankelModeField* field_ = nullptr;
        double r_ = 0.0, split_ = 0.0, prefactor_ = 0.0;
        std::vector<double> head_lam_, head_wl_, head_a_, head_b_, head_j_;
        std::vector<FarPanel> panels_;
    };

    Retarded retarded(double r) const;

    // Filon form of the stationary-phase radiation field, uniformly accurate
    // in s (the direct radiation_closed_form sum needs s inside the node
    // grid's frequency budget).
    class ClosedFormRadiation {
    public:
        double operator()(double s) const;

    private:
        friend class HankelModeField;
        struct Panel {
            double mid, half;
            std::array<std::complex<double>, 16> c;
        };
        double phi_ = 0.0;
        std::vector<Panel> panels_;
    };

    ClosedFormRadiation closed_form_radiation() const;

private:
    HankelModeField() = default;

    struct FilonPanel {
        double a, b;
        std::array<double, 16> lam, amp_a, amp_b;
    };

    // Sampled amplitudes on one lambda interval, from the cache when
    // available, else freshly transformed (graded panels near lambda = 0).
    FilonPanel amplitude_panel(double a, double b) const;

    double nu_ = 0.0;
    int n_ = 2;
    double lambda_max_ = 0.0;
    double budget_ = 0.0;
    std::vector<double> lambda_, weight_, a_, b_;
    std::vector<FilonPanel> filon_;
    QuadratureSpec spec_;
    std::shared_ptr<const ModeInitialData> data_;
};

ModeSolution hankel_evolve(const ModeInitialData& data,
                           const std::vector<double>& t_grid,
                           const std::vector<double>& r_grid,
                           const QuadratureSpec& spec = {});

} // namespace conewave::solver

#endif
