#include "conewave/solver.hpp"

#include "conewave/errors.hpp"
#include "conewave/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace conewave::solver {

double bump_profile(double r, double r_a, double r_b)
{
    const double y = (2.0 * r - r_a - r_b) / (r_b - r_a);
    const double q = 1.0 - y * y;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

ModeInitialData::ModeInitialData(double nu_, int n_, std::function<double(double)> u0_,
                                 std::function<double(double)> u1_, double r_a_, double r_b_)
    : nu(nu_), n(n_), u0(std::move(u0_)), u1(std::move(u1_)), r_a(r_a_), r_b(r_b_)
{
    if (nu < 0.0) throw DomainError("ModeInitialData: nu must be >= 0");
    if (n < 2) throw DomainError("ModeInitialData: n must be >= 2");
    if (!(0.0 < r_a && r_a < r_b))
        throw DomainError("ModeInitialData: support must satisfy 0 < r_a < r_b");
}

double ModeInitialData::mu_sq() const
{
    const double half = 0.5 * (n - 2);
    return nu * nu - half * half;
}

ModeInitialData ModeInitialData::bump(double nu, int n, double r_a, double r_b,
                                      double displacement_amp, double velocity_amp)
{
    auto u0 = [=](double r) { return displacement_amp * bump_profile(r, r_a, r_b); };
    auto u1 = [=](double r) { return velocity_amp * bump_profile(r, r_a, r_b); };
    return ModeInitialData(nu, n, u0, u1, r_a, r_b);
}

double mode_equation_coeff(int n, double nu)
{
    if (n < 2) throw DomainError("mode_equation_coeff: n must be >= 2");
    if (nu < 0.0) throw DomainError("mode_equation_coeff: nu must be >= 0");
    return nu * nu - 0.25;
}

double ModeSolution::mu_sq() const
{
    const double half = 0.5 * (n - 2);
    return nu * nu - half * half;
}

double energy(const ModeSolution& sol, std::size_t t_index)
{
    const std::size_t nr = sol.r_grid.size();
    if (t_index >= sol.t_grid.size())
        throw DomainError("energy: time index out of range");
    if (nr < 3)
        throw DomainError("energy: need at least 3 radial samples");

    const double* u = &sol.values[t_index * nr];
    const double* ut = &sol.dt_values[t_index * nr];
    const double* ur_stored = sol.dr_values.empty() ? nullptr : &sol.dr_values[t_index * nr];
    const double musq = sol.mu_sq();

    auto ur_at = [&](std::size_t m) {
        if (ur_stored) return ur_stored[m];
        const auto& r = sol.r_grid;
        if (m == 0)
            return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (r[2] - r[0]);
        if (m + 1 == nr)
            return (3.0 * u[nr - 1] - 4.0 * u[nr - 2] + u[nr - 3]) / (r[nr - 1] - r[nr - 3]);
        return (u[m + 1] - u[m - 1]) / (r[m + 1] - r[m - 1]);
    };

    auto density = [&](std::size_t m) {
        const double r = sol.r_grid[m];
        const double ur = ur_at(m);
        return (ut[m] * ut[m] + ur * ur + musq * u[m] * u[m] / (r * r)) *
               std::pow(r, sol.n - 1);
    };

    double acc = 0.0;
    double prev = density(0);
    for (std::size_t m = 1; m < nr; ++m) {
        const double cur = density(m);
        acc += 0.5 * (prev + cur) * (sol.r_grid[m] - sol.r_grid[m - 1]);
        prev = cur;
    }
    return acc;
}

ModeSolution fd_evolve(const ModeInitialData& data, double dr, double dt, double T,
                       int store_every)
{
    if (data.nu < 0.5)
        throw DomainError("fd_evolve: scheme supports nu >= 1/2 only (the attractive "
                          "inverse-square range needs the exact Hankel path; use hankel_evolve)");
    if (!(dr > 0.0) || !(dt > 0.0) || !(T > 0.0))
        throw ConfigError("fd_evolve: dr, dt, T must be positive");
    if (dt / dr > 0.9)
        throw ConfigError("fd_evolve: CFL violation, dt/dr must be <= 0.9");

    const double c = mode_equation_coeff(data.n, data.nu);
    // Tip cell raises the spectral radius above the pure-CFL bound (ghost
    // closure plus the 1/r^2 potential at r = dr/2).
    const double r0 = 0.5 * dr;
    const double lam_max = (16.0 / 3.0) / (dr * dr) + std::max(c, 0.0) / (r0 * r0);
    if (dt * dt * lam_max > 3.9)
        throw ConfigError("fd_evolve: dt unstable against the tip potential; need dt <= " +
                          fmt_double(1.97 / std::sqrt(lam_max)));

    const double r_max = data.r_b + T + 3.0; // outer boundary causally out of reach
    const std::size_t cells = static_cast<std::size_t>(std::ceil(r_max / dr));
    const std::size_t steps = static_cast<std::size_t>(std::llround(T / dt));
    if (store_every <= 0)
        store_every = std::max<int>(1, static_cast<int>(steps / 256));

    const double kappa = 0.5 * (data.n - 1);
    std::vector<double> r(cells), pot(cells), rk(cells), rki(cells);
    for (std::size_t m = 0; m < cells; ++m) {
        r[m] = (m + 0.5) * dr;
        pot[m] = c / (r[m] * r[m]);
        rk[m] = std::pow(r[m], kappa);
        rki[m] = 1.0 / rk[m];
    }

    std::vector<double> vprev(cells), vcur(cells), vnext(cells);
    for (std::size_t m = 0; m < cells; ++m) vprev[m] = rk[m] * data.u0(r[m]);

    // Tip closure: the Friedrichs branch has v(0) = 0; the ghost value at
    // r = -dr/2 comes from the quadratic through zero fitted to the first two
    // cells, g = -2 v0 + v1/3, which keeps the scheme second order at the tip
    // (exact for v = a r + b r^2).
    auto lap = [&](const std::vector<double>& v, std::size_t m) {
        const double left = m == 0 ? (-2.0 * v[0] + v[1] / 3.0) : v[m - 1];
        const double right = m + 1 == cells ? 0.0 : v[m + 1];
        return (right - 2.0 * v[m] + left) / (dr * dr) - pot[m] * v[m];
    };

    // first step by Taylor expansion
    for (std::size_t m = 0; m < cells; ++m)
        vcur[m] = vprev[m] + dt * rk[m] * data.u1(r[m]) + 0.5 * dt * dt * lap(vprev, m);

    ModeSolution sol;
    sol.nu = data.nu;
    sol.n = data.n;
    sol.method = ModeSolution::Method::fd;
    sol.fd_dr = dr;
    sol.fd_dt = dt;
    sol.cfl = dt / dr;
    sol.r_grid = r;

    std::vector<std::size_t> frames;
    for (std::size_t j = 0; j <= steps; ++j)
        if (j % static_cast<std::size_t>(store_every) == 0 || j == steps) frames.push_back(j);
    sol.t_grid.reserve(frames.size());
    sol.values.reserve(frames.size() * cells);
    sol.dt_values.reserve(frames.size() * cells);

    auto store = [&](std::size_t j, const std::vector<double>& v,
                     const std::vector<double>& vdot) {
        sol.t_grid.push_back(j * dt);
        for (std::size_t m = 0; m < cells; ++m) sol.values.push_back(rki[m] * v[m]);
        for (std::size_t m = 0; m < cells; ++m) sol.dt_values.push_back(rki[m] * vdot[m]);
    };

    std::size_t next_frame = 0;
    std::vector<double> vdot(cells);

    // step 0: exact time derivative from the data
    if (frames[next_frame] == 0) {
        for (std::size_t m = 0; m < cells; ++m) vdot[m] = rk[m] * data.u1(r[m]);
        store(0, vprev, vdot);
        ++next_frame;
    }

    // Loop invariant: vprev = v^{j-1}, vcur = v^j; frame j uses the centered
    // derivative (v^{j+1} - v^{j-1}) / (2 dt), so v^{steps+1} is also computed.
    for (std::size_t j = 1; j <= steps; ++j) {
        for (std::size_t m = 0; m < cells; ++m)
            vnext[m] = 2.0 * vcur[m] - vprev[m] + dt * dt * lap(vcur, m);
        if (next_frame < frames.size() && frames[next_frame] == j) {
            for (std::size_t m = 0; m < cells; ++m)
                vdot[m] = (vnext[m] - vprev[m]) / (2.0 * dt);
            store(j, vcur, vdot);
            ++next_frame;
        }
        std::swap(vprev, vcur);
        std::swap(vcur, vnext);
    }
    return sol;
}

void write_solution_csv(const ModeSolution& sol, const std::filesystem::path& csv_path)
{
    CsvWriter csv(csv_path, {"t", "r", "u"});
    const std::size_t nr = sol.r_grid.size();
    for (std::size_t ti = 0; ti < sol.t_grid.size(); ++ti)
        for (std::size_t m = 0; m < nr; ++m)
            csv.row_doubles({sol.t_grid[ti], sol.r_grid[m], sol.at(ti, m)});
}

void write_solution_sidecar(const ModeSolution& sol, const std::filesystem::path& json_path)
{
    nlohmann::json j;
    j["method"] = sol.method == ModeSolution::Method::hankel ? "hankel" : "fd";
    j["nu"] = sol.nu;
    j["n"] = sol.n;
    j["t_count"] = sol.t_grid.size();
    j["r_count"] = sol.r_grid.size();
    j["t_max"] = sol.t_grid.empty() ? 0.0 : sol.t_grid.back();
    j["r_max"] = sol.r_grid.empty() ? 0.0 : sol.r_grid.back();
    if (sol.method == ModeSolution::Method::fd) {
        j["dr"] = sol.fd_dr;
        j["dt"] = sol.fd_dt;
        j["cfl"] = sol.cfl;
    } else {
        j["lambda_max"] = sol.lambda_max;
        j["quad_nodes"] = sol.quad_nodes;
    }
    std::ofstream out(json_path);
    out << j.dump(2) << "\n";
}

} // namespace conewave::solver
