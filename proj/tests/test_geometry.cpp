#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conewave/errors.hpp"
#include "conewave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

using namespace conewave;
using namespace conewave::geom;

namespace {

double urand(unsigned long long& state)
{
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(state >> 11) / 9007199254740992.0;
}

bool has(const std::vector<Region>& rs, Region r)
{
    return std::find(rs.begin(), rs.end(), r) != rs.end();
}

// Smooth compactly supported bump in two variables, used as the physical
// field w(t, r) for operator checks.
double bump1(double y)
{
    const double q = 1.0 - y * y;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

double wfield(double t, double r)
{
    return bump1((t - 4.0) / 1.5) * bump1((r - 3.0) / 1.2);
}

double bump1_d1(double y)
{
    const double q = 1.0 - y * y;
    return q > 0.0 ? bump1(y) * (-2.0 * y / (q * q)) : 0.0;
}

double bump1_d2(double y)
{
    const double q = 1.0 - y * y;
    if (q <= 0.0) return 0.0;
    const double a = -2.0 * y / (q * q);
    const double da = -2.0 / (q * q) - 8.0 * y * y / (q * q * q);
    return bump1(y) * (a * a + da);
}

// analytic Box w for the product bump: the reference is exact, so the chart
// evaluations own the whole convergence error.
double box_exact(int n, double mu_sq, double t, double r)
{
    const double yt = (t - 4.0) / 1.5, yr = (r - 3.0) / 1.2;
    const double w = bump1(yt) * bump1(yr);
    const double wtt = bump1_d2(yt) / (1.5 * 1.5) * bump1(yr);
    const double wr = bump1(yt) * bump1_d1(yr) / 1.2;
    const double wrr = bump1(yt) * bump1_d2(yr) / (1.2 * 1.2);
    return -wtt + wrr + (n - 1) / r * wr - mu_sq / (r * r) * w;
}

} // namespace

TEST_CASE("compactify")
{
    auto near_pole = compactify({0.0, 1e-12, 0.0});
    CHECK(near_pole[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(near_pole[1] == doctest::Approx(1.0).epsilon(1e-10));

    auto p = compactify({1.0, 1.0, 0.0});
    CHECK(p[0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));

    auto q = compactify({3.0, 4.0, 0.0});
    CHECK(q[0] == doctest::Approx(4.0 / std::sqrt(26.0)).epsilon(1e-15));
    CHECK(q[1] == doctest::Approx(1.0 / std::sqrt(26.0)).epsilon(1e-15));
}

TEST_CASE("region_of follows the defining inequalities")
{
    auto r1 = region_of({1.0, 1.0, 0.0});
    CHECK(r1.size() == 1);
    CHECK(has(r1, Region::I));

    // all three inequality sets hold here: |t|,r <= 10; r >= 2, r >= |t|/2;
    // |t| >= 2, |t| >= r/2
    auto r2 = region_of({4.0, 4.0, 0.0});
    CHECK(r2.size() == 3);

    auto r3 = region_of({100.0, 1.0, 0.0});
    CHECK(r3.size() == 1);
    CHECK(has(r3, Region::III));

    // r >= 2|t| with everything large: II only
    auto r4 = region_of({3.0, 20.0, 0.0});
    CHECK(r4.size() == 1);
    CHECK(has(r4, Region::II));
}

TEST_CASE("chart values at pinned points")
{
    auto q3 = to_regionIII({2.0, 1.0, 0.0});
    CHECK(q3.rho == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q3.x == doctest::Approx(0.5).epsilon(1e-15));

    auto q2 = to_regionII({0.0, 5.0, 0.0});
    CHECK(q2.rho == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(q2.v == doctest::Approx(-1.0).epsilon(1e-12));

    auto qb = to_blowup({10.0, 9.0, 0.0});
    CHECK(qb.s == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(qb.rho_bar == doctest::Approx(1.0 / std::sqrt(182.0)).epsilon(1e-15));

    CHECK_THROWS_AS(to_regionIII({-1.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(to_regionIII({0.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(to_regionII({-3.0, 1.0, 0.0}), DomainError);
}

TEST_CASE("chart round trips on 1000 random points each")
{
    unsigned long long state = 7;
    auto check_pt = [](const InteriorPoint& a, const InteriorPoint& b) {
        const double scale = std::abs(a.t) + a.r + 1.0;
        CHECK(std::abs(a.t - b.t) <= 1e-10 * scale);
        CHECK(std::abs(a.r - b.r) <= 1e-10 * scale);
        CHECK(std::abs(a.z - b.z) <= 1e-10);
    };

    for (int i = 0; i < 1000; ++i) {
        const double z = 2.0 * M_PI * urand(state);
        {
            InteriorPoint p{20.0 * urand(state), 0.05 + 30.0 * urand(state), z};
            check_pt(p, from_regionII(to_regionII(p)));
        }
        {
            InteriorPoint p{0.2 + 40.0 * urand(state), 0.05 + 30.0 * urand(state), z};
            check_pt(p, from_regionIII(to_regionIII(p)));
        }
        {
            InteriorPoint p{-20.0 + 40.0 * urand(state), 0.05 + 30.0 * urand(state), z};
            check_pt(p, from_almost_global(to_almost_global(p)));
        }
        {
            const double r = 0.05 + 30.0 * urand(state);
            InteriorPoint p{-r + 0.1 + 40.0 * urand(state), r, z};
            check_pt(p, from_blowup(to_blowup(p)));
        }
    }
}

TEST_CASE("metric components at pinned points")
{
    ConeConfig cone(2, 1.0);

    SUBCASE("region III direct substitution")
    {
        auto m = metric_components_regionIII(cone, {0.5, 0.5, 0.0});
        CHECK_FALSE(m.degenerate);
        CHECK(m.g[0][0] == doctest::Approx(-12.0).epsilon(1e-14));
        CHECK(m.g[0][1] == doctest::Approx(-4.0).epsilon(1e-14));
        CHECK(m.g[1][1] == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(m.g[2][2] == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("region II: d rho^2 coefficient is -v")
    {
        auto m = metric_components_regionII(cone, {0.3, 0.0, 0.0});
        CHECK(m.g[0][0] == 0.0);
        auto m2 = metric_components_regionII(cone, {0.3, 0.25, 0.0});
        CHECK(m2.g[0][0] == doctest::Approx(-0.25 / std::pow(0.3, 4)).epsilon(1e-13));
    }

    SUBCASE("degenerate flags")
    {
        CHECK(metric_components_regionIII(cone, {0.5, 0.0, 0.0}).degenerate);
        CHECK(metric_components_regionII(cone, {0.5, 1.0, 0.0}).degenerate);
    }
}

TEST_CASE("metric pullback consistency with -dt^2 + dr^2 + r^2 k on overlap")
{
    // Chain-rule oracle: pull the chart metrics back through finite-difference
    // Jacobians and compare with the interior metric.
    ConeConfig cone(2, 0.7);
    const double a2 = 0.7 * 0.7;
    unsigned long long state = 21;
    const double h = 1e-6;

    for (int trial = 0; trial < 50; ++trial) {
        // region II cap III sample box
        const double t = 2.5 + 5.0 * urand(state);
        const double r = std::max(2.0 + 0.5 * t * urand(state), 0.51 * t);
        if (!(r >= 2.0 && r >= 0.5 * t && t >= 2.0 && t >= 0.5 * r)) continue;

        const double gtr[3][3] = {{-1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, r * r * a2}};

        auto check_chart = [&](auto to_chart, auto metric_at) {
            // J[a][b] = d chart_a / d interior_b, centered differences
            double J[3][3];
            const double base[3] = {t, r, 0.3};
            for (int b = 0; b < 3; ++b) {
                double up[3] = {base[0], base[1], base[2]};
                double dn[3] = {base[0], base[1], base[2]};
                up[b] += h;
                dn[b] -= h;
                auto cu = to_chart(InteriorPoint{up[0], up[1], up[2]});
                auto cd = to_chart(InteriorPoint{dn[0], dn[1], dn[2]});
                J[0][b] = (cu[0] - cd[0]) / (2.0 * h);
                J[1][b] = (cu[1] - cd[1]) / (2.0 * h);
                J[2][b] = (cu[2] - cd[2]) / (2.0 * h);
            }
            auto m = metric_at(InteriorPoint{base[0], base[1], base[2]});
            // pullback = J^T g J
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    double acc = 0.0;
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j) acc += J[i][a] * m.g[i][j] * J[j][b];
                    CHECK(std::abs(acc - gtr[a][b]) <= 1e-8 * (1.0 + r * r));
                }
            }
        };

        check_chart(
            [](const InteriorPoint& p) {
                auto q = to_regionII(p);
                return std::array<double, 3>{q.rho, q.v, q.z};
            },
            [&](const InteriorPoint& p) { return metric_components_regionII(cone, to_regionII(p)); });

        check_chart(
            [](const InteriorPoint& p) {
                auto q = to_regionIII(p);
                return std::array<double, 3>{q.rho, q.x, q.z};
            },
            [&](const InteriorPoint& p) { return metric_components_regionIII(cone, to_regionIII(p)); });
    }
}

TEST_CASE("defining-function equivalence on region III")
{
    unsigned long long state = 5;
    for (int i = 0; i < 400; ++i) {
        const double t = 2.0 + 60.0 * urand(state);
        const double x = 0.5 * urand(state);
        const InteriorPoint p{t, std::max(x * t, 1e-8), 0.0};
        const double z3 = compactify(p)[1];
        const double ratio = z3 / (1.0 / t);
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 2.0);
    }
}

TEST_CASE("apply_L constant-field values")
{
    SUBCASE("region III: only the constant term survives")
    {
        GridSpec g{0.4, 0.4, 0.01, 0.01, 5, 5};
        auto f = Field2D::sample(g, [](double, double) { return 1.0; });
        auto val = apply_L(Chart::III, 2, 0.0, f, 2, 2);
        CHECK(val.real() == doctest::Approx(-0.75).epsilon(1e-12));
        CHECK(std::abs(val.imag()) <= 1e-14);
    }

    SUBCASE("region II constants at v = 0.5")
    {
        GridSpec g{0.2, 0.5 - 0.02, 0.01, 0.01, 5, 5};
        auto f = Field2D::sample(g, [](double, double) { return 1.0; });
        // -2((n-1)/2)^2 - (n-1)((n+3)/4) v at n=2, v=1/2
        auto val = apply_L(Chart::II, 2, 0.0, f, 2, 2);
        CHECK(val.real() == doctest::Approx(-1.125).epsilon(1e-12));
    }

    SUBCASE("stencil bounds")
    {
        GridSpec g{0.2, 0.2, 0.01, 0.01, 5, 5};
        auto f = Field2D::sample(g, [](double, double) { return 1.0; });
        CHECK_THROWS_AS(apply_L(Chart::III, 2, 0.0, f, 0, 2), DomainError);
        CHECK_THROWS_AS(apply_L(Chart::III, 2, 0.0, f, 2, 4), DomainError);
    }
}

TEST_CASE("apply_P_sigma constant-field values")
{
    Field1D g;
    g.origin = 0.4;
    g.h = 0.01;
    g.values.assign(5, 1.0);

    SUBCASE("chart III constants")
    {
        // sigma^2 - n i sigma - (n^2-1)/4 at sigma = -0.5i, n = 2 -> -2
        auto val = apply_P_sigma(Chart::III, 2, 0.0, {0.0, -0.5}, g, 2);
        CHECK(val.real() == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(std::abs(val.imag()) <= 1e-13);
    }

    SUBCASE("chart II constants at v = 0, sigma = 0")
    {
        Field1D gv;
        gv.origin = -0.02;
        gv.h = 0.01;
        gv.values.assign(5, 1.0);
        auto val = apply_P_sigma(Chart::II, 2, 0.0, {0.0, 0.0}, gv, 2);
        CHECK(val.real() == doctest::Approx(-0.5).epsilon(1e-12));
    }
}

namespace {

// L f at a chart point, with f = rho^{-(n-1)/2} w pulled into the chart, and
// the result mapped back to Box w = rho^{2+(n-1)/2} L f.
double box_via_chart(Chart chart, int n, double mu_sq, double t0, double r0, double h)
{
    const double kappa = 0.5 * (n - 1);
    GridSpec g;
    g.n1 = g.n2 = 5;
    g.h1 = g.h2 = h;
    double rho0;
    if (chart == Chart::II) {
        auto q = to_regionII({t0, r0, 0.0});
        rho0 = q.rho;
        g.origin1 = q.rho - 2 * h;
        g.origin2 = q.v - 2 * h;
    } else {
        auto q = to_regionIII({t0, r0, 0.0});
        rho0 = q.rho;
        g.origin1 = q.rho - 2 * h;
        g.origin2 = q.x - 2 * h;
    }
    auto f = Field2D::sample(g, [&](double rho, double c2) {
        InteriorPoint p = chart == Chart::II ? from_regionII({rho, c2, 0.0})
                                             : from_regionIII({rho, c2, 0.0});
        return std::pow(rho, -kappa) * wfield(p.t, p.r);
    });
    const auto Lf = apply_L(chart, n, mu_sq, f, 2, 2);
    return std::pow(rho0, 2.0 + kappa) * Lf.real();
}

double box_direct(int n, double mu_sq, double t0, double r0, double h)
{
    GridSpec g{t0 - 2 * h, r0 - 2 * h, h, h, 5, 5};
    auto w = Field2D::sample(g, [](double t, double r) { return wfield(t, r); });
    return apply_box_tr(n, mu_sq, w, 2, 2).real();
}

} // namespace

TEST_CASE("cross-chart operator identity with observed order >= 1.8")
{
    const double t0 = 4.0, r0 = 3.0; // in region II cap III
    for (int n : {2, 3}) {
        for (double mu_sq : {0.0, 1.7}) {
            const double ref = box_exact(n, mu_sq, t0, r0);
            // the direct (t,r) stencil itself converges to the same value
            CHECK(std::abs(box_direct(n, mu_sq, t0, r0, 1e-3) - ref) <= 1e-4);

            double err2[3], err3[3];
            double h = 0.002;
            for (int lev = 0; lev < 3; ++lev, h *= 0.5) {
                err2[lev] = std::abs(box_via_chart(Chart::II, n, mu_sq, t0, r0, h) - ref);
                err3[lev] = std::abs(box_via_chart(Chart::III, n, mu_sq, t0, r0, h) - ref);
            }
            for (int lev = 0; lev < 2; ++lev) {
                CHECK(std::log2(err2[lev] / err2[lev + 1]) >= 1.8);
                CHECK(std::log2(err3[lev] / err3[lev + 1]) >= 1.8);
            }
            // and the two charts agree with each other at fixed h
            CHECK(std::abs(box_via_chart(Chart::II, n, mu_sq, t0, r0, 0.0005) -
                           box_via_chart(Chart::III, n, mu_sq, t0, r0, 0.0005)) <=
                  5.0 * (err2[2] + err3[2]));
        }
    }
}

TEST_CASE("reduced normal operator identity: L(rho^{i sigma} g) = rho^{i sigma} P_sigma g")
{
    const std::complex<double> I(0.0, 1.0);
    for (Chart chart : {Chart::II, Chart::III}) {
        for (std::complex<double> sigma : {std::complex<double>(0.7, -0.4),
                                           std::complex<double>(0.0, -1.5)}) {
            const int n = 2;
            const double mu_sq = 1.3;
            const double c2c = chart == Chart::II ? 0.35 : 0.6; // v or x
            auto gfun = [](double c) { return std::cos(1.7 * c) + 0.3 * c * c; };

            double h = 0.002;
            double err[3];
            for (int lev = 0; lev < 3; ++lev, h *= 0.5) {
                GridSpec g{0.5 - 2 * h, c2c - 2 * h, h, h, 5, 5};
                auto f = Field2D::sample(g, [&](double rho, double c) {
                    return std::pow(rho, I * sigma) * gfun(c);
                });
                Field1D g1;
                g1.origin = c2c - 2 * h;
                g1.h = h;
                g1.values.resize(5);
                for (int i = 0; i < 5; ++i) g1.values[i] = gfun(g1.coord(i));

                const auto lhs = apply_L(chart, n, mu_sq, f, 2, 2);
                const auto rhs = std::pow(0.5, I * sigma) *
                                 apply_P_sigma(chart, n, mu_sq, sigma, g1, 2);
                err[lev] = std::abs(lhs - rhs);
            }
            CHECK(err[2] <= 1e-4);
            CHECK(std::log2(err[0] / err[1]) >= 1.8); // O(h^2)
            CHECK(std::log2(err[1] / err[2]) >= 1.8);
        }
    }
}

TEST_CASE("grid spec serializes to JSON and back")
{
    GridSpec g{0.1, -0.3, 0.01, 0.02, 11, 7};
    auto g2 = GridSpec::from_json(g.to_json());
    CHECK(g2.origin1 == g.origin1);
    CHECK(g2.origin2 == g.origin2);
    CHECK(g2.h1 == g.h1);
    CHECK(g2.h2 == g.h2);
    CHECK(g2.n1 == g.n1);
    CHECK(g2.n2 == g.n2);
}
