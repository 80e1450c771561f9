#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "spider/env.hpp"
#include "spider/random_instances.hpp"

using namespace spider;

namespace {

EnvironmentSpec spec_08_04() { return EnvironmentSpec({{0.5, 0.8}, {0.5, 0.4}}, 0.1); }
EnvironmentSpec spec_09_045() { return EnvironmentSpec({{0.5, 0.9}, {0.5, 0.45}}, 0.05); }

}  // namespace

TEST_CASE("validate_spec: drifting nestling env passes everything") {
    auto rep = validate_spec(spec_08_04());
    CHECK(rep.drift_ok);
    CHECK(rep.elliptic_ok);
    CHECK(rep.nestling_ok);
    CHECK(rep.all_ok());
    double expected = 0.5 * (std::log(0.25) + std::log(1.5));
    CHECK(rep.mean_log_rho == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rep.mean_log_rho == doctest::Approx(-0.4904146265058631));
}

TEST_CASE("validate_spec: deterministic 0.7 is not nestling") {
    EnvironmentSpec spec({{1.0, 0.7}}, 0.1);
    auto rep = validate_spec(spec);
    CHECK(rep.drift_ok);
    CHECK_FALSE(rep.nestling_ok);
    CHECK_FALSE(rep.all_ok());
}

TEST_CASE("validate_spec: symmetric atoms have zero drift") {
    EnvironmentSpec spec({{0.5, 0.6}, {0.5, 0.4}}, 0.1);
    auto rep = validate_spec(spec);
    CHECK(rep.mean_log_rho == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_FALSE(rep.drift_ok);
    CHECK(rep.nestling_ok);
}

TEST_CASE("spec construction: bad mass and bad ellipticity throw") {
    CHECK_THROWS_AS(EnvironmentSpec({{0.5, 0.8}, {0.4, 0.4}}, 0.1), ProbabilityMassError);
    CHECK_THROWS_AS(EnvironmentSpec({{0.5, 0.95}, {0.5, 0.4}}, 0.1), EllipticityError);
    CHECK_THROWS_AS(EnvironmentSpec({{1.0, 0.7}}, 0.6), std::invalid_argument);
}

TEST_CASE("kappa_solve: frozen brackets and residual") {
    double k1 = kappa_solve(spec_08_04(), 1e-13);
    CHECK(k1 > 1.55);
    CHECK(k1 < 1.60);
    CHECK(spec_08_04().expect_rho_pow(k1) == doctest::Approx(1.0).epsilon(1e-12));

    double k2 = kappa_solve(spec_09_045(), 1e-13);
    CHECK(k2 > 3.4);
    CHECK(k2 < 3.5);
    CHECK(spec_09_045().expect_rho_pow(k2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kappa_solve: non-nestling has no root") {
    CHECK_THROWS_AS(kappa_solve(EnvironmentSpec({{1.0, 0.7}}, 0.1)), NoRootError);
}

TEST_CASE("kappa_solve: enlarging the high atom weakly increases kappa") {
    double prev = 0.0;
    for (double hi : {0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95}) {
        EnvironmentSpec s({{0.5, hi}, {0.5, 0.4}}, 0.04);
        double k = kappa_solve(s, 1e-12);
        CHECK(k >= prev);
        prev = k;
    }
}

TEST_CASE("sample_site: deterministic, atoms only, frequencies match the law") {
    Environment env(spec_08_04(), 1);
    double first = env.omega_plus(0);
    CHECK(env.omega_plus(0) == first);
    Environment copy(spec_08_04(), 1);
    // materialize in a different order; values must agree site for site
    for (int64_t x = 50; x >= -50; --x) CHECK(copy.omega_plus(x) == env.omega_plus(x));

    Environment single(EnvironmentSpec({{1.0, 0.55}}, 0.2), 9);
    for (int64_t x = -5; x <= 5; ++x) CHECK(single.omega_plus(x) == 0.55);

    size_t high = 0;
    const int64_t n = 100000;
    for (int64_t x = 0; x < n; ++x) {
        double v = env.omega_plus(x);
        CHECK((v == 0.8 || v == 0.4));
        if (v == 0.8) ++high;
    }
    CHECK(std::abs(static_cast<double>(high) / n - 0.5) < 0.01);
}

TEST_CASE("potential: constant env gives a linear ramp on both sides") {
    Environment env(EnvironmentSpec({{1.0, 0.7}}, 0.1), 3);
    auto p = potential(env, -10, 10);
    double slope = std::log(0.3 / 0.7);
    for (int64_t x = -10; x <= 10; ++x)
        CHECK(p.at(x) == doctest::Approx(x * slope).epsilon(1e-12));
    CHECK(p.at(0) == 0.0);
}

TEST_CASE("potential: frozen two-site values") {
    auto p = PotentialProfile::from_omegas(0, {0.8, 0.4});
    CHECK(p.at(0) == 0.0);
    CHECK(p.at(1) == doctest::Approx(std::log(0.25)).epsilon(1e-14));
    CHECK(p.at(1) == doctest::Approx(-1.3862943611198906));
    CHECK(p.at(2) == doctest::Approx(-0.9808292530117262));
}

TEST_CASE("potential: telescoping and increment bound on a random environment") {
    Environment env(spec_08_04(), 42);
    auto p = potential(env, -200, 200);
    double bound = std::log((1.0 - 0.1) / 0.1);
    double sum = 0.0;
    for (int64_t x = -200; x < 200; ++x) {
        double inc = p.at(x + 1) - p.at(x);
        CHECK(std::abs(inc) <= bound + 1e-12);
        double direct = std::log(env.omega_minus(x) / env.omega_plus(x));
        CHECK(inc == doctest::Approx(direct).epsilon(1e-12));
        sum += direct;
    }
    CHECK(p.at(200) - p.at(-200) == doctest::Approx(sum).epsilon(1e-10));
}

TEST_CASE("hill_height: descent, bump, flat") {
    // strictly decreasing with slope -c: the best rise is a single step, -c
    double c = 0.9;
    std::vector<double> v;
    for (int i = 0; i <= 20; ++i) v.push_back(-c * i);
    PotentialProfile desc(0, v);
    CHECK(hill_height(desc, 0, 20) == doctest::Approx(-c).epsilon(1e-12));
    CHECK(hill_height(desc, 0, 20) == doctest::Approx(oracle::hill(desc, 0, 20)));

    PotentialProfile bump(0, {0.0, 1.0, 0.0});
    CHECK(hill_height(bump, 0, 2) == doctest::Approx(1.0));
    CHECK(oracle::hill(bump, 0, 2) == doctest::Approx(1.0));

    PotentialProfile flat(0, std::vector<double>(9, 0.0));
    CHECK(hill_height(flat, 0, 8) == doctest::Approx(0.0));
}

TEST_CASE("hill_height: window of length <= 1 is an error") {
    PotentialProfile p(0, {0.0, 1.0});
    CHECK_THROWS_AS(hill_height(p, 0, 0), EmptyRangeError);
}

TEST_CASE("hill_height equals the double-loop oracle on random windows") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        Environment env(random_env_spec(seed), seed);
        auto p = potential(env, -100, 100);
        Xoshiro256pp rng(seed, 7);
        int64_t a = -100 + static_cast<int64_t>(rng.next() % 60);
        int64_t b1 = std::min<int64_t>(100, a + 2 + static_cast<int64_t>(rng.next() % 150));
        CHECK(hill_height(p, a, b1) == doctest::Approx(oracle::hill(p, a, b1)).epsilon(1e-13));
    }
}
