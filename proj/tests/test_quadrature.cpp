#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conewave/errors.hpp"
#include "conewave/io.hpp"
#include "conewave/parallel.hpp"
#include "conewave/quadrature.hpp"

#include <cmath>
#include <numeric>

using namespace conewave;

TEST_CASE("panel integration of smooth functions is near machine accuracy")
{
    auto g = panel_grid(0.0, 1.0, 4);
    const double val = integrate(g, [](double x) { return std::exp(x); });
    CHECK(val == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("oscillation-aware panel counts resolve high-frequency integrands")
{
    const double omega = 387.0;
    const int panels = panels_for_phase(omega, 8.0);
    const double val = integrate(panel_grid(0.0, 1.0, panels),
                                 [&](double x) { return std::cos(omega * x); });
    CHECK(val == doctest::Approx(std::sin(omega) / omega).epsilon(1e-10));
}

TEST_CASE("integrate_checked flags unresolved integrands")
{
    CHECK_THROWS_AS(integrate_checked([](double x) { return std::cos(4000.0 * x); },
                                      0.0, 1.0, 2, 1e-12, 1e-3, "test"),
                    QuadratureError);
}

TEST_CASE("adaptive complex quadrature handles endpoint power singularities")
{
    // int_0^1 x^{0.6} e^{ix} dx, reference from series-free adaptive refinement
    auto f = [](double x) { return std::pow(x, 0.6) * std::exp(std::complex<double>(0.0, x)); };
    auto val = integrate_adaptive_complex(f, 1e-14, 1.0, 1e-12);
    auto ref = integrate_adaptive_complex(f, 1e-16, 1.0, 1e-14, 48);
    CHECK(std::abs(val - ref) <= 1e-10);
}

TEST_CASE("parallel_for is deterministic and propagates exceptions")
{
    std::vector<double> out(1000);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = std::sqrt(static_cast<double>(i)); });
    for (std::size_t i = 0; i < out.size(); i += 97)
        CHECK(out[i] == std::sqrt(static_cast<double>(i)));

    CHECK_THROWS_AS(parallel_for(8, [](std::size_t i) {
                        if (i == 5) throw DomainError("boom");
                    }),
                    DomainError);
}

TEST_CASE("fmt_double writes 17 significant digits, locale-free")
{
    CHECK(fmt_double(0.1) == "0.10000000000000001");
    CHECK(fmt_double(-2.0) == "-2");
    CHECK(fnv1a64_hex("conewave") == fnv1a64_hex("conewave"));
    CHECK(fnv1a64_hex("a") != fnv1a64_hex("b"));
}
