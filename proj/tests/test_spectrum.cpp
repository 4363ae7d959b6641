#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conewave/errors.hpp"
#include "conewave/io.hpp"
#include "conewave/spectrum.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace conewave;
using namespace conewave::spectrum;

TEST_CASE("circle_spectrum basic values")
{
    auto s1 = LinkSpectrum::circle(1.0, 2);
    REQUIRE(s1.entries().size() == 3);
    CHECK(s1.entries()[0].mu_sq == 0.0);
    CHECK(s1.entries()[0].multiplicity == 1);
    CHECK(s1.entries()[1].mu_sq == 1.0);
    CHECK(s1.entries()[1].multiplicity == 2);
    CHECK(s1.entries()[2].mu_sq == 4.0);
    CHECK(s1.entries()[2].multiplicity == 2);

    auto s2 = LinkSpectrum::circle(2.0, 1);
    REQUIRE(s2.entries().size() == 2);
    CHECK(s2.entries()[1].mu_sq == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s2.entries()[1].multiplicity == 2);

    CHECK_THROWS_AS(LinkSpectrum::circle(0.0, 1), DomainError);
    CHECK_THROWS_AS(LinkSpectrum::circle(-0.5, 1), DomainError);
}

TEST_CASE("nu_of direct substitutions")
{
    CHECK(nu_of(2, 0.0) == 0.0);
    CHECK(nu_of(4, 0.0) == 1.0);
    CHECK(nu_of(3, 2.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK_THROWS_AS(nu_of(1, 0.0), DomainError);
    CHECK_THROWS_AS(nu_of(2, -1.0), DomainError);
}

TEST_CASE("nu_of inverts to mu_sq exactly enough")
{
    unsigned long long state = 99;
    auto next = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) / 9007199254740992.0;
    };
    for (int n = 2; n <= 6; ++n) {
        for (int i = 0; i < 200; ++i) {
            const double mu_sq = 30.0 * next();
            const double nu = nu_of(n, mu_sq);
            const double half_sq = 0.25 * (n - 2) * (n - 2);
            CHECK(std::abs(nu * nu - mu_sq - half_sq) <=
                  1e-12 * std::max(1.0, std::abs(nu * nu)));
        }
    }
}

TEST_CASE("resonances: circle alpha=1 strip of depth 2")
{
    auto ladder = resonances(2, LinkSpectrum::circle(1.0, 8), 2.0);
    REQUIRE(ladder.items.size() == 3);

    CHECK(ladder.items[0].j == 0);
    CHECK(ladder.items[0].k == 0);
    CHECK(ladder.items[0].sigma == std::complex<double>(0.0, -0.5));
    CHECK(ladder.items[0].multiplicity == 1);
    CHECK_FALSE(ladder.items[0].excluded);

    // the two lambda = 1.5 members: (j=0,k=1) and (j=1,k=0) with mult 2
    CHECK(ladder.items[1].sigma == std::complex<double>(0.0, -1.5));
    CHECK(ladder.items[2].sigma == std::complex<double>(0.0, -1.5));
    CHECK(ladder.items[1].j == 0);
    CHECK(ladder.items[1].k == 1);
    CHECK(ladder.items[2].j == 1);
    CHECK(ladder.items[2].multiplicity == 2);
}

TEST_CASE("resonances: exclusion flag at half-integer nu")
{
    auto ladder = resonances(3, LinkSpectrum::explicit_list({{0.0, 1}}), 2.0);
    REQUIRE(ladder.items.size() == 1);
    CHECK(ladder.items[0].nu == 0.5);
    CHECK(ladder.items[0].sigma == std::complex<double>(0.0, -1.0));
    CHECK(ladder.items[0].excluded);
}

TEST_CASE("resonances: alpha=0.7 exponent, frozen from independent arithmetic")
{
    // nu_1 = 1/0.7, sigma_{1,0} = -i(1/2 + 1/0.7); evaluated with long-double
    // arithmetic independently of the implementation path.
    const long double nu1 = 1.0L / 0.7L;
    const long double rate = 0.5L + nu1;

    auto ladder = resonances(2, LinkSpectrum::circle(0.7, 6), 3.0);
    bool found = false;
    for (const auto& r : ladder.items) {
        if (r.j == 1 && r.k == 0) {
            found = true;
            CHECK(std::abs(r.nu - static_cast<double>(nu1)) <= 1e-14);
            CHECK(std::abs(r.sigma.imag() + static_cast<double>(rate)) <= 1e-14);
            CHECK(r.multiplicity == 2);
        }
    }
    CHECK(found);
}

TEST_CASE("resonance count matches a brute-force double loop")
{
    for (double alpha : {0.7, 1.0, 1.31}) {
        for (int n : {2, 3, 5}) {
            for (double depth : {0.9, 2.5, 7.3}) {
                auto spec = LinkSpectrum::circle(alpha, 40);
                auto ladder = resonances(n, spec, depth);

                std::size_t count = 0; // independent enumeration
                for (const auto& e : spec.entries()) {
                    const double nu = std::sqrt(0.25 * (n - 2) * (n - 2) + e.mu_sq);
                    for (int k = 0; 0.5 + k + nu < depth; ++k) ++count;
                }
                CHECK(ladder.items.size() == count);
            }
        }
    }
}

TEST_CASE("resonances are prefix-stable in strip_depth")
{
    auto spec = LinkSpectrum::circle(0.83, 30);
    auto shallow = resonances(2, spec, 3.1);
    auto deep = resonances(2, spec, 6.4);
    REQUIRE(deep.items.size() >= shallow.items.size());
    for (std::size_t i = 0; i < shallow.items.size(); ++i) {
        CHECK(deep.items[i].j == shallow.items[i].j);
        CHECK(deep.items[i].k == shallow.items[i].k);
        CHECK(deep.items[i].sigma == shallow.items[i].sigma);
    }
}

TEST_CASE("spectrum representation invariance: duplicates merge")
{
    auto merged = LinkSpectrum::explicit_list({{0.0, 1}, {2.5, 2}});
    auto split = LinkSpectrum::explicit_list({{0.0, 1}, {2.5, 1}, {2.5, 1}});
    auto la = resonances(2, merged, 4.0);
    auto lb = resonances(2, split, 4.0);
    REQUIRE(la.items.size() == lb.items.size());
    for (std::size_t i = 0; i < la.items.size(); ++i) {
        CHECK(la.items[i].sigma == lb.items[i].sigma);
        CHECK(la.items[i].multiplicity == lb.items[i].multiplicity);
    }
}

TEST_CASE("exponent_ladder collisions and log flags")
{
    SUBCASE("alpha=1 collision at lambda=1.5")
    {
        auto entries = exponent_ladder(resonances(2, LinkSpectrum::circle(1.0, 8), 2.0));
        REQUIRE(entries.size() == 2);
        CHECK(entries[0].lambda == 0.5);
        CHECK(entries[0].multiplicity == 1);
        CHECK_FALSE(entries[0].log_flag);
        CHECK(entries[1].lambda == 1.5);
        CHECK(entries[1].multiplicity == 3);
        CHECK(entries[1].log_flag);
    }

    SUBCASE("alpha=0.7 has no collisions below depth 2")
    {
        auto entries = exponent_ladder(resonances(2, LinkSpectrum::circle(0.7, 8), 2.0));
        REQUIRE(entries.size() == 3);
        CHECK(entries[0].lambda == 0.5);
        CHECK(entries[1].lambda == 1.5);
        CHECK(entries[2].lambda == doctest::Approx(0.5 + 1.0 / 0.7).epsilon(1e-15));
        CHECK(entries[2].multiplicity == 2);
        for (const auto& e : entries) CHECK_FALSE(e.log_flag);
    }

    SUBCASE("generic irrational alpha: no flags")
    {
        auto entries = exponent_ladder(resonances(2, LinkSpectrum::circle(std::sqrt(2.0), 12), 4.0));
        for (const auto& e : entries) CHECK_FALSE(e.log_flag);
    }

    SUBCASE("excluded resonance raises the flag")
    {
        auto entries = exponent_ladder(resonances(3, LinkSpectrum::explicit_list({{0.0, 1}}), 2.0));
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].log_flag);
    }
}

TEST_CASE("ladder CSV and JSON round trips")
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "conewave_spectrum_test";
    fs::create_directories(dir);

    SUBCASE("csv export")
    {
        auto ladder = resonances(2, LinkSpectrum::circle(1.0, 4), 3.0);
        const fs::path p = dir / "ladder.csv";
        write_ladder_csv(ladder, p);
        auto table = read_csv(p);
        CHECK(table.header == std::vector<std::string>{"j", "k", "nu", "im_sigma",
                                                       "multiplicity", "excluded"});
        REQUIRE(table.rows.size() == ladder.items.size());
        CHECK(table.rows[0][3] == -0.5);
    }

    SUBCASE("explicit spectrum from JSON")
    {
        const fs::path p = dir / "spec.json";
        std::ofstream(p) << "[[0.0, 1], [2.25, 2], [2.25, 1]]";
        auto spec = LinkSpectrum::from_json_file(p);
        REQUIRE(spec.entries().size() == 2);
        CHECK(spec.entries()[1].mu_sq == 2.25);
        CHECK(spec.entries()[1].multiplicity == 3);
        CHECK_THROWS_AS(LinkSpectrum::from_json_file(dir / "missing.json"), ConfigError);
    }

    fs::remove_all(dir);
}

TEST_CASE("invalid spectra are rejected")
{
    CHECK_THROWS_AS(LinkSpectrum::explicit_list({{1.0, 1}}), DomainError); // no mu^2=0
    CHECK_THROWS_AS(LinkSpectrum::explicit_list({{0.0, 2}}), DomainError); // mult of 0 wrong
    CHECK_THROWS_AS(LinkSpectrum::explicit_list({{0.0, 1}, {-1.0, 1}}), DomainError);
    CHECK_THROWS_AS(resonances(2, LinkSpectrum::circle(1.0, 2), 0.0), DomainError);
    CHECK_THROWS_AS(resonances(1, LinkSpectrum::circle(1.0, 2), 1.0), DomainError);
}
