#ifndef CONEWAVE_MELLIN_HPP
#define CONEWAVE_MELLIN_HPP

#include "conewave/radiation.hpp"

#include <complex>
#include <filesystem>
#include <functional>
#include <vector>

namespace conewave::mellin {

// Cutoff chi in M u(sigma) = int_0^inf chi(rho) u(rho) rho^{-i sigma - 1} d rho.
// sharp: indicator of [0, rho_c] (analytic answers for pure powers);
// smooth: identically 1 on [0, rho_c/2], C-infinity down to 0 at rho_c.
struct Cutoff {
    enum class Kind { sharp, smooth };
    Kind kind = Kind::sharp;
    double rho_c = 1.0;

    double operator()(double rho) const;
    std::string name() const;
};

// Numerical Mellin transform of u given on (0, rho_c].  Geometrically graded
// panels toward rho = 0; throws ConvergenceError naming the endpoint when the
// partial integrals diverge (Im sigma at or below the decay order of u).
std::complex<double> mellin(const std::function<double(double)>& u,
                            std::complex<double> sigma, const Cutoff& cutoff);

struct MellinScan {
    std::vector<std::complex<double>> sigma_samples;
    std::vector<std::complex<double>> values; // NaN where divergent
    Cutoff cutoff;
};

MellinScan mellin_scan(const std::function<double(double)>& u, const Cutoff& cutoff,
                       double re_sigma, double im_lo, double im_hi, std::size_t count);

void write_scan_csv(const MellinScan& scan, const std::filesystem::path& path);

// Locates the pole of M u nearest the convergence abscissa by tracking
// 1/|M(-i beta)| toward its (linear) vanishing.  Works directly on the
// convergent side; no analytic continuation of u is assumed.
struct PoleEstimate {
    std::complex<double> sigma;
    double reciprocal_min = 0.0; // 1/|M| at the estimate (diagnostic)
};

PoleEstimate locate_pole(const std::function<double(double)>& u, const Cutoff& cutoff,
                         double beta_lo, double beta_hi, std::size_t grid = 60);

// Pole scan of radiation-field data: converts R(s) to rho = 1/s, extends the
// unsampled tail by a power law fitted on the last trusted decade, then
// alternates pole location and subtraction of the located term so the
// accessible strip deepens.  re_window > 0 additionally scans Re sigma at
// each pole for the |M|-maximizing offset.
struct PoleScanResult {
    std::vector<PoleEstimate> poles;
    std::vector<double> subtracted_amplitudes;
};

PoleScanResult mellin_pole_scan(const radiation::RadiationSamples& R,
                                double im_min, double im_max, double re_window,
                                const Cutoff& cutoff, std::size_t max_poles = 3);

} // namespace conewave::mellin

#endif
