#ifndef CONEWAVE_RADIATION_HPP
#define CONEWAVE_RADIATION_HPP

#include "conewave/hankel.hpp"
#include "conewave/spectrum.hpp"

#include <filesystem>
#include <vector>

namespace conewave::radiation {

struct Window {
    double lo = 5.0;
    double hi = 50.0;
};

// Friedlander radiation field samples R(s) = lim_{r->inf} r^{(n-1)/2} u(s+r, r)
// with the Richardson-in-1/r extrapolation diagnostics kept per sample.
struct RadiationSamples {
    int mode_j = 0;
    double nu = 0.0;
    int n = 2;
    std::vector<double> s_grid;
    std::vector<double> values;
    std::vector<double> error_est;
    std::vector<bool> trusted;
    // raw r^{(n-1)/2} u(s+r, r) per (s, r) before extrapolation
    std::vector<double> r_list;
    std::vector<std::vector<double>> raw;

    double r_min() const;
};

// Extrapolates r^{(n-1)/2} u(s+r, r) in powers of 1/r over r_list (>= 3
// entries, polynomial order capped at 3).  Samples with s > r_min/5 or a
// non-monotone extrapolation tail are kept but flagged untrusted.
RadiationSamples extract_radiation(const solver::HankelModeField& field,
                                   const std::vector<double>& s_grid,
                                   const std::vector<double>& r_list,
                                   int mode_j = 0);

// Grid-sampled variant (finite-difference solutions): u(s+r, r) is read off
// the stored solution by bilinear interpolation.
RadiationSamples extract_radiation(const solver::ModeSolution& sol,
                                   const std::vector<double>& s_grid,
                                   const std::vector<double>& r_list,
                                   int mode_j = 0);

struct BasisTerm {
    double lambda = 0.0;
    bool include_log = false;
};

struct ExpansionFit {
    std::vector<BasisTerm> terms;
    std::vector<double> coefficients; // one per basis column (log doubles it)
    Window window;
    double residual = 0.0; // relative L2 on the window
};

// Linear least squares of R(s) against {s^-lambda} (and {s^-lambda log s}
// where include_log) over the trusted samples inside the window.
ExpansionFit fit_expansion(const RadiationSamples& R,
                           const std::vector<spectrum::ExponentEntry>& ladder,
                           std::size_t n_terms, const Window& window);

ExpansionFit fit_expansion(const RadiationSamples& R,
                           const std::vector<BasisTerm>& terms, const Window& window);

// One-parameter refinement for mode data: the basis {s^-(lambda+k)} is slid
// in its leading exponent to minimize the fit residual.  Returns the
// minimizing exponent with its fit.
struct RefinedExponent {
    double lambda = 0.0;
    ExpansionFit fit;
};

RefinedExponent refine_leading_exponent(const RadiationSamples& R, double lambda0,
                                        std::size_t n_terms, const Window& window,
                                        double search_rel = 0.15);

// Greedy blind exponent discovery: log-log slope on the top decade of the
// window, amplitude fit, subtract, repeat.
struct PeeledTerm {
    double lambda = 0.0;
    double amplitude = 0.0;
    double slope_drift = 0.0; // across the top decade
    bool mixed = false;       // drift > 0.02: overlapping exponents
};

std::vector<PeeledTerm> peel_exponents(const RadiationSamples& R,
                                       std::size_t max_terms, const Window& window);

void write_radiation_csv(const RadiationSamples& R, const std::filesystem::path& path);
void write_fit_csv(const ExpansionFit& fit, const std::filesystem::path& path);

} // namespace conewave::radiation

#endif
