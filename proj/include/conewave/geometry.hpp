#ifndef CONEWAVE_GEOMETRY_HPP
#define CONEWAVE_GEOMETRY_HPP

#include "conewave/spectrum.hpp"

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace conewave::geom {

// Cone over a link: spacetime R_t x C(Z) with g = -dt^2 + dr^2 + r^2 k,
// dim C(Z) = n.  Circle links use the angle coordinate z in [0, 2*pi) with
// k = alpha^2 dz^2 (circumference 2*pi*alpha).
struct ConeConfig {
    int n = 2;
    double circle_alpha = 1.0;

    ConeConfig(int n_, double alpha_);
};

struct InteriorPoint {
    double t = 0.0;
    double r = 1.0; // r > 0
    double z = 0.0;
};

enum class Region { I, II, III };

// Compactification (t, r) -> (t, r, 1)/sqrt(1 + t^2 + r^2); returns the cf
// and mf defining functions z2 = r/sqrt(...), z3 = 1/sqrt(...).
std::array<double, 2> compactify(const InteriorPoint& p);

// All regions whose defining inequalities hold (they overlap):
//   I: |t| <= 10 and r <= 10;  II: r >= 2 and r >= |t|/2;
//   III: |t| >= 2 and |t| >= r/2.
std::vector<Region> region_of(const InteriorPoint& p);

// Charts.  Region II carries the coordinates of the displayed short-range
// asymptotically Minkowski form: rho = 1/sqrt(t^2+r^2) (the almost-global
// rho), v = cos 2*theta.  Region III: rho = 1/t, x = r/t (t > 0).
struct RegionIIPoint { double rho, v, z; };
struct RegionIIIPoint { double rho, x, z; };
struct AlmostGlobalPoint { double rho, theta, z; };
struct BlowupPoint { double rho_bar, s, z; };

RegionIIPoint to_regionII(const InteriorPoint& p);
InteriorPoint from_regionII(const RegionIIPoint& q);
RegionIIIPoint to_regionIII(const InteriorPoint& p);
InteriorPoint from_regionIII(const RegionIIIPoint& q);
AlmostGlobalPoint to_almost_global(const InteriorPoint& p);
InteriorPoint from_almost_global(const AlmostGlobalPoint& q);
BlowupPoint to_blowup(const InteriorPoint& p);
InteriorPoint from_blowup(const BlowupPoint& q);

// Metric components in the chart coordinate basis (d rho, dv|dx, dz); the
// degenerate flag marks boundary-singular points (rho = 0, x = 0, |v| = 1).
struct MetricComponents {
    std::array<std::array<double, 3>, 3> g{};
    bool degenerate = false;
};

MetricComponents metric_components_regionII(const ConeConfig& cone, const RegionIIPoint& q);
MetricComponents metric_components_regionIII(const ConeConfig& cone, const RegionIIIPoint& q);

// Uniform 2-D grid of a single angular mode (Delta_z acts as mu^2).
struct GridSpec {
    double origin1 = 0.0, origin2 = 0.0;
    double h1 = 0.0, h2 = 0.0;
    int n1 = 0, n2 = 0;

    double coord1(int i) const { return origin1 + i * h1; }
    double coord2(int j) const { return origin2 + j * h2; }

    std::string to_json() const;
    static GridSpec from_json(const std::string& text);
};

struct Field2D {
    GridSpec grid;
    std::vector<std::complex<double>> values; // row-major [i * n2 + j]

    std::complex<double>& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.n2 + j]; }
    const std::complex<double>& at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.n2 + j]; }

    static Field2D sample(const GridSpec& g,
                          const std::function<std::complex<double>(double, double)>& f);
};

enum class Chart { II, III };

// L applied at grid node (i, j) with second-order centered differences.
// Chart II: coordinates (rho, v); chart III: (rho, x).  mu_sq is the link
// eigenvalue of the mode.
std::complex<double> apply_L(Chart chart, int n, double mu_sq,
                             const Field2D& f, int i, int j);

// Reduced normal operator P_sigma on a boundary (one-dimensional) grid in
// v or x; satisfies L (rho^{i sigma} g) = rho^{i sigma} P_sigma g.
struct Field1D {
    double origin = 0.0, h = 0.0;
    std::vector<std::complex<double>> values;

    double coord(int i) const { return origin + i * h; }
};

std::complex<double> apply_P_sigma(Chart chart, int n, double mu_sq,
                                   std::complex<double> sigma,
                                   const Field1D& g, int i);

// Wave operator Box = -d_t^2 + d_r^2 + ((n-1)/r) d_r - mu^2/r^2 on a (t, r)
// grid, same stencils; the oracle for cross-chart checks.
std::complex<double> apply_box_tr(int n, double mu_sq, const Field2D& w, int i, int j);

} // namespace conewave::geom

#endif
