#ifndef CONEWAVE_SOLVER_HPP
#define CONEWAVE_SOLVER_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace conewave::solver {

// Smooth bump exp(-1/(1-y^2)) on (r_a, r_b), zero outside.
double bump_profile(double r, double r_a, double r_b);

// Initial data for one angular mode: (u, d_t u)|_{t=0}, supported away from
// the cone tip.
struct ModeInitialData {
    double nu = 0.0; // sqrt(((n-2)/2)^2 + mu^2) for the mode
    int n = 2;
    std::function<double(double)> u0;
    std::function<double(double)> u1;
    double r_a = 0.0, r_b = 0.0;

    ModeInitialData(double nu_, int n_, std::function<double(double)> u0_,
                    std::function<double(double)> u1_, double r_a_, double r_b_);

    double mu_sq() const;

    static ModeInitialData bump(double nu, int n, double r_a, double r_b,
                                double displacement_amp = 1.0,
                                double velocity_amp = 0.0);
};

// Radial-equation potential coefficient: v = r^{(n-1)/2} u satisfies
// v_tt = v_rr - c/r^2 v with c = nu^2 - 1/4.
double mode_equation_coeff(int n, double nu);

struct ModeSolution {
    enum class Method { hankel, fd };

    double nu = 0.0;
    int n = 2;
    Method method = Method::hankel;
    std::vector<double> t_grid;
    std::vector<double> r_grid;
    std::vector<double> values;    // u(t_i, r_m), row-major in t
    std::vector<double> dt_values; // d_t u at the same nodes
    std::vector<double> dr_values; // d_r u; may be empty (then energy uses FD)

    // method metadata
    double fd_dr = 0.0, fd_dt = 0.0, cfl = 0.0;
    double lambda_max = 0.0;
    std::size_t quad_nodes = 0;

    double mu_sq() const;
    double at(std::size_t ti, std::size_t rm) const { return values[ti * r_grid.size() + rm]; }
};

// E(t_i) = int (|u_t|^2 + |u_r|^2 + mu^2 |u|^2 / r^2) r^{n-1} dr on the
// solution's r_grid (trapezoid).  Stored derivatives are used when present;
// otherwise centered differences (one-sided 2nd order at the ends).
double energy(const ModeSolution& sol, std::size_t t_index);

// Leapfrog for v_tt = v_rr - c/r^2 v on the staggered grid r_m = (m+1/2) dr.
// The tip ghost encodes the boundary value v(0) = 0 at second order.
// Requires nu >= 1/2 and a stable dt (CFL 0.9 plus the tip-potential bound).  store_every = 0 picks a stride capped
// around 256 stored frames (the final step is always stored).
ModeSolution fd_evolve(const ModeInitialData& data, double dr, double dt, double T,
                       int store_every = 0);

void write_solution_csv(const ModeSolution& sol, const std::filesystem::path& csv_path);
void write_solution_sidecar(const ModeSolution& sol, const std::filesystem::path& json_path);

} // namespace conewave::solver

#endif
