#include "conewave/geometry.hpp"

#include "conewave/errors.hpp"

#include <json.hpp>

#include <cmath>

namespace conewave::geom {

ConeConfig::ConeConfig(int n_, double alpha_) : n(n_), circle_alpha(alpha_)
{
    if (n < 2) throw DomainError("ConeConfig: n must be >= 2");
    if (!(circle_alpha > 0.0)) throw DomainError("ConeConfig: alpha must be positive");
}

std::array<double, 2> compactify(const InteriorPoint& p)
{
    const double s = std::sqrt(1.0 + p.t * p.t + p.r * p.r);
    return {p.r / s, 1.0 / s};
}

std::vector<Region> region_of(const InteriorPoint& p)
{
    std::vector<Region> out;
    const double at = std::abs(p.t);
    if (at <= 10.0 && p.r <= 10.0) out.push_back(Region::I);
    if (p.r >= 2.0 && p.r >= 0.5 * at) out.push_back(Region::II);
    if (at >= 2.0 && at >= 0.5 * p.r) out.push_back(Region::III);
    return out;
}

RegionIIPoint to_regionII(const InteriorPoint& p)
{
    // v = cos 2theta folds t <-> -t, so the (rho, v) chart covers one time
    // branch; t < 0 points are reached by time reflection, as with region III.
    if (!(p.r > 0.0)) throw DomainError("to_regionII: r must be positive");
    if (p.t < 0.0) throw DomainError("to_regionII: chart covers t >= 0; time-reflect first");
    const double rr = std::sqrt(p.t * p.t + p.r * p.r);
    const double theta = std::atan2(p.r, p.t);
    return {1.0 / rr, std::cos(2.0 * theta), p.z};
}

InteriorPoint from_regionII(const RegionIIPoint& q)
{
    if (!(q.rho > 0.0)) throw DomainError("from_regionII: rho must be positive");
    if (std::abs(q.v) > 1.0) throw DomainError("from_regionII: |v| must be <= 1");
    const double theta = 0.5 * std::acos(q.v); // in [0, pi/2]: the t >= 0 branch
    const InteriorPoint p{std::cos(theta) / q.rho, std::sin(theta) / q.rho, q.z};
    if (!(p.r > 0.0)) throw DomainError("from_regionII: r must be positive (v = 1 is the t-axis)");
    return p;
}

RegionIIIPoint to_regionIII(const InteriorPoint& p)
{
    if (!(p.t > 0.0)) throw DomainError("to_regionIII: chart requires t > 0");
    if (!(p.r > 0.0)) throw DomainError("to_regionIII: r must be positive");
    return {1.0 / p.t, p.r / p.t, p.z};
}

InteriorPoint from_regionIII(const RegionIIIPoint& q)
{
    if (!(q.rho > 0.0)) throw DomainError("from_regionIII: rho must be positive");
    if (q.x < 0.0) throw DomainError("from_regionIII: x must be >= 0");
    const double t = 1.0 / q.rho;
    return {t, q.x * t, q.z};
}

AlmostGlobalPoint to_almost_global(const InteriorPoint& p)
{
    if (!(p.r > 0.0)) throw DomainError("to_almost_global: r must be positive");
    const double rr = std::sqrt(p.t * p.t + p.r * p.r);
    if (rr == 0.0) throw DomainError("to_almost_global: undefined at t = r = 0");
    return {1.0 / rr, std::atan2(p.r, p.t), p.z};
}

InteriorPoint from_almost_global(const AlmostGlobalPoint& q)
{
    if (!(q.rho > 0.0)) throw DomainError("from_almost_global: rho must be positive");
    if (q.theta < 0.0 || q.theta > M_PI)
        throw DomainError("from_almost_global: theta must lie in [0, pi]");
    const InteriorPoint p{std::cos(q.theta) / q.rho, std::sin(q.theta) / q.rho, q.z};
    if (!(p.r > 0.0)) throw DomainError("from_almost_global: interior requires theta in (0, pi)");
    return p;
}

BlowupPoint to_blowup(const InteriorPoint& p)
{
    // (rho_bar, s) is two-to-one across t + r = 0; keep the forward branch.
    if (!(p.t + p.r > 0.0))
        throw DomainError("to_blowup: chart covers t + r > 0; time-reflect first");
    const double s = std::sqrt(1.0 + p.t * p.t + p.r * p.r);
    return {1.0 / s, p.t - p.r, p.z};
}

InteriorPoint from_blowup(const BlowupPoint& q)
{
    if (!(q.rho_bar > 0.0) || q.rho_bar > 1.0)
        throw DomainError("from_blowup: rho_bar must lie in (0, 1]");
    const double sum_sq = 1.0 / (q.rho_bar * q.rho_bar) - 1.0; // t^2 + r^2
    const double tp_sq = 2.0 * sum_sq - q.s * q.s;             // (t + r)^2
    if (tp_sq <= 0.0)
        throw DomainError("from_blowup: no interior point with these coordinates");
    const double t = 0.5 * (q.s + std::sqrt(tp_sq));
    const double r = t - q.s;
    if (!(r > 0.0))
        throw DomainError("from_blowup: r must be positive");
    return {t, r, q.z};
}

MetricComponents metric_components_regionII(const ConeConfig& cone, const RegionIIPoint& q)
{
    MetricComponents m;
    const double rho = q.rho, v = q.v;
    if (rho == 0.0 || std::abs(v) >= 1.0) m.degenerate = true;
    const double rho2 = rho * rho;
    const double rho3 = rho2 * rho;
    const double rho4 = rho2 * rho2;
    m.g[0][0] = rho == 0.0 ? 0.0 : -v / rho4;
    m.g[0][1] = m.g[1][0] = rho == 0.0 ? 0.0 : 0.5 / rho3;
    m.g[1][1] = (rho == 0.0 || std::abs(v) >= 1.0)
                    ? 0.0
                    : v / (4.0 * (1.0 - v * v)) / rho2;
    m.g[2][2] = rho == 0.0 ? 0.0
                           : 0.5 * (1.0 - v) * cone.circle_alpha * cone.circle_alpha / rho2;
    return m;
}

MetricComponents metric_components_regionIII(const ConeConfig& cone, const RegionIIIPoint& q)
{
    MetricComponents m;
    const double rho = q.rho, x = q.x;
    if (rho == 0.0 || x == 0.0) m.degenerate = true;
    if (rho == 0.0) return m;
    const double rho2 = rho * rho;
    const double rho3 = rho2 * rho;
    const double rho4 = rho2 * rho2;
    m.g[0][0] = -(1.0 - x * x) / rho4;
    m.g[0][1] = m.g[1][0] = -x / rho3;
    m.g[1][1] = 1.0 / rho2;
    m.g[2][2] = x * x * cone.circle_alpha * cone.circle_alpha / rho2;
    return m;
}

std::string GridSpec::to_json() const
{
    nlohmann::json j;
    j["origin"] = {origin1, origin2};
    j["spacing"] = {h1, h2};
    j["dims"] = {n1, n2};
    return j.dump();
}

GridSpec GridSpec::from_json(const std::string& text)
{
    nlohmann::json j = nlohmann::json::parse(text);
    GridSpec g;
    g.origin1 = j.at("origin")[0].get<double>();
    g.origin2 = j.at("origin")[1].get<double>();
    g.h1 = j.at("spacing")[0].get<double>();
    g.h2 = j.at("spacing")[1].get<double>();
    g.n1 = j.at("dims")[0].get<int>();
    g.n2 = j.at("dims")[1].get<int>();
    return g;
}

Field2D Field2D::sample(const GridSpec& g,
                        const std::function<std::complex<double>(double, double)>& f)
{
    Field2D out;
    out.grid = g;
    out.values.resize(static_cast<std::size_t>(g.n1) * g.n2);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            out.at(i, j) = f(g.coord1(i), g.coord2(j));
    return out;
}

namespace {

using cplx = std::complex<double>;

struct Stencil2 {
    cplx f, d1, d2, d11, d22, d12; // value and centered derivatives
};

Stencil2 stencil(const Field2D& f, int i, int j)
{
    const auto& g = f.grid;
    if (i < 1 || j < 1 || i + 1 >= g.n1 || j + 1 >= g.n2)
        throw DomainError("apply_L: stencil exceeds the sampled grid");
    Stencil2 s;
    s.f = f.at(i, j);
    s.d1 = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * g.h1);
    s.d2 = (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * g.h2);
    s.d11 = (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) / (g.h1 * g.h1);
    s.d22 = (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) / (g.h2 * g.h2);
    s.d12 = (f.at(i + 1, j + 1) - f.at(i + 1, j - 1) - f.at(i - 1, j + 1) + f.at(i - 1, j - 1)) /
            (4.0 * g.h1 * g.h2);
    return s;
}

} // namespace

std::complex<double> apply_L(Chart chart, int n, double mu_sq,
                             const Field2D& f, int i, int j)
{
    if (n < 2) throw DomainError("apply_L: n must be >= 2");
    const Stencil2 s = stencil(f, i, j);
    const double c1 = f.grid.coord1(i); // rho

    if (chart == Chart::II) {
        const double v = f.grid.coord2(j);
        const double rho = c1;
        // v(rho D_rho)^2 - 4(1-v^2) rho D_rho D_v - 4v(1-v^2) D_v^2
        //   - (2/(1-v)) Delta_z - ((n-1)+(n+1)v) i rho D_rho
        //   + 2(2-(n-1)v-(n+3)v^2) i D_v - 2((n-1)/2)^2 - (n-1)((n+3)/4) v
        const cplx rho_drho = rho * s.d1;
        const cplx rho_drho_sq = rho * rho * s.d11 + rho * s.d1;
        const double half = 0.5 * (n - 1);
        return -v * rho_drho_sq
               + 4.0 * (1.0 - v * v) * rho * s.d12
               + 4.0 * v * (1.0 - v * v) * s.d22
               - (2.0 / (1.0 - v)) * mu_sq * s.f
               - ((n - 1) + (n + 1) * v) * rho_drho
               + 2.0 * (2.0 - (n - 1) * v - (n + 3) * v * v) * s.d2
               - (2.0 * half * half + (n - 1) * 0.25 * (n + 3) * v) * s.f;
    }

    // Chart III:
    // (rho D_rho + x D_x)^2 - n i (rho D_rho + x D_x) - D_x^2
    //   + (n-1) i D_x / x - Delta_z / x^2 - (n^2-1)/4
    const double x = f.grid.coord2(j);
    const double rho = c1;
    const cplx radial = rho * s.d1 + x * s.d2; // (rho d_rho + x d_x) f
    const cplx radial_sq = rho * rho * s.d11 + 2.0 * rho * x * s.d12 + x * x * s.d22 + radial;
    return -radial_sq
           - static_cast<double>(n) * radial
           + s.d22
           + (n - 1) / x * s.d2
           - mu_sq / (x * x) * s.f
           - 0.25 * (n * n - 1) * s.f;
}

std::complex<double> apply_P_sigma(Chart chart, int n, double mu_sq,
                                   std::complex<double> sigma,
                                   const Field1D& g, int i)
{
    if (n < 2) throw DomainError("apply_P_sigma: n must be >= 2");
    if (i < 1 || i + 1 >= static_cast<int>(g.values.size()))
        throw DomainError("apply_P_sigma: stencil exceeds the sampled grid");
    const cplx f = g.values[i];
    const cplx d = (g.values[i + 1] - g.values[i - 1]) / (2.0 * g.h);
    const cplx dd = (g.values[i + 1] - 2.0 * g.values[i] + g.values[i - 1]) / (g.h * g.h);
    const cplx I(0.0, 1.0);

    if (chart == Chart::II) {
        const double v = g.coord(i);
        // -4v(1-v^2) D_v^2 - (2/(1-v)) Delta_z + 2(2-(n-1)v-(n+3)v^2) i D_v
        //   - 4(1-v^2) sigma D_v + v sigma^2 - ((n-1)+(n+1)v) i sigma
        //   - 2((n-1)/2)^2 - (n-1)((n+3)/4) v
        const double half = 0.5 * (n - 1);
        return 4.0 * v * (1.0 - v * v) * dd
               - (2.0 / (1.0 - v)) * mu_sq * f
               + 2.0 * (2.0 - (n - 1) * v - (n + 3) * v * v) * d
               + 4.0 * I * (1.0 - v * v) * sigma * d
               + v * sigma * sigma * f
               - ((n - 1) + (n + 1) * v) * I * sigma * f
               - (2.0 * half * half + (n - 1) * 0.25 * (n + 3) * v) * f;
    }

    // Chart III:
    // (x D_x + sigma)^2 - n i (x D_x + sigma) - D_x^2 + (n-1) i D_x / x
    //   - Delta_z / x^2 - (n^2-1)/4
    const double x = g.coord(i);
    const cplx xdx = x * d;                  // (x d_x) g
    const cplx xdx_sq = x * x * dd + x * d;  // (x d_x)^2 g, via d/dx form
    return -xdx_sq
           - 2.0 * I * sigma * xdx
           + sigma * sigma * f
           - static_cast<double>(n) * xdx
           - static_cast<double>(n) * I * sigma * f
           + dd
           + (n - 1) / x * d
           - mu_sq / (x * x) * f
           - 0.25 * (n * n - 1) * f;
}

std::complex<double> apply_box_tr(int n, double mu_sq, const Field2D& w, int i, int j)
{
    const Stencil2 s = stencil(w, i, j); // coord1 = t, coord2 = r
    const double r = w.grid.coord2(j);
    if (!(r > 0.0)) throw DomainError("apply_box_tr: r must be positive");
    return -s.d11 + s.d22 + (n - 1) / r * s.d2 - mu_sq / (r * r) * s.f;
}

} // namespace conewave::geom
