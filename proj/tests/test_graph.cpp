#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spider/graph.hpp"
#include "spider/random_instances.hpp"

using namespace spider;

namespace {

LocalConfigSet rope2() { return LocalConfigSet::validate({{0, 1}, {0, 2}}); }

Environment flat_env() {
    // oracle environment: p = 1/2 everywhere, fails drift/nestling on purpose
    return Environment(EnvironmentSpec({{1.0, 0.5}}, 0.25), 7);
}

}  // namespace

TEST_CASE("theta and pi on the flat oracle environment") {
    Environment env = flat_env();
    for (int64_t x = -5; x <= 5; ++x) CHECK(theta(env, x) == doctest::Approx(2.0));
    auto L = rope2();
    SpiderState s = make_state(L, 0, 0);
    CHECK(pi_weight(env, s) == doctest::Approx(4.0));
}

TEST_CASE("theta: frozen value next to a 0.8 site") {
    // V(1) = ln(0.25) when w+_0 = 0.8, so the site-0 weight is 1 + 4 = 5
    auto vp = PotentialProfile::from_omegas(0, {0.8, 0.4});
    CHECK(theta(vp, 0) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(theta(vp, 0) == doctest::Approx(1.0 / 0.2).epsilon(1e-14));  // e^{-V(0)}/w-_0
    CHECK(std::exp(log_theta(vp, 0)) == doctest::Approx(5.0));
}

TEST_CASE("theta satisfies the one-step balance identity") {
    Environment env(EnvironmentSpec({{0.5, 0.8}, {0.5, 0.4}}, 0.1), 11);
    auto vp = potential(env, -30, 31);
    for (int64_t x = -29; x < 29; ++x) {
        double lhs = theta(vp, x) * env.omega_plus(x);
        double rhs = theta(vp, x + 1) * env.omega_minus(x + 1);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
}

TEST_CASE("neighbors: rope-2 moves and rates") {
    auto L = rope2();
    Environment env(EnvironmentSpec({{0.5, 0.8}, {0.5, 0.4}}, 0.1), 5);
    SpiderState s01 = make_state(L, 0, 0);  // (0,1)
    auto n1 = neighbors(s01, env, L);
    REQUIRE(n1.size() == 2);
    bool up = false, down = false;
    for (const auto& [st, r] : n1) {
        if (st.positions == std::vector<int64_t>{0, 2}) {
            CHECK(r == env.omega_plus(1));
            up = true;
        }
        if (st.positions == std::vector<int64_t>{-1, 1}) {
            CHECK(r == env.omega_minus(0));
            down = true;
        }
    }
    CHECK(up);
    CHECK(down);

    SpiderState s02 = make_state(L, 0, 1);  // (0,2)
    auto n2 = neighbors(s02, env, L);
    REQUIRE(n2.size() == 2);
    for (const auto& [st, r] : n2) {
        if (st.positions == std::vector<int64_t>{1, 2}) CHECK(r == env.omega_plus(0));
        if (st.positions == std::vector<int64_t>{0, 1}) CHECK(r == env.omega_minus(2));
    }
}

TEST_CASE("neighbors: single walker is the unconstrained chain") {
    auto L = LocalConfigSet::validate({{0}});
    Environment env(EnvironmentSpec({{0.5, 0.8}, {0.5, 0.4}}, 0.1), 5);
    SpiderState s;
    s.positions = {4};
    auto ns = neighbors(s, env, L);
    REQUIRE(ns.size() == 2);
    double total = 0.0;
    for (const auto& [st, r] : ns) {
        total += r;
        if (st.positions == std::vector<int64_t>{5}) CHECK(r == env.omega_plus(4));
        if (st.positions == std::vector<int64_t>{3}) CHECK(r == env.omega_minus(4));
    }
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("neighbors: invalid state throws") {
    auto L = rope2();
    Environment env = flat_env();
    SpiderState bad;
    bad.positions = {0, 5};
    CHECK_THROWS_AS(neighbors(bad, env, L), InvalidStateError);
}

TEST_CASE("neighbors: shift equivariance") {
    auto L = LocalConfigSet::validate({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {0, 2, 4}});
    Environment env(EnvironmentSpec({{0.5, 0.8}, {0.5, 0.4}}, 0.1), 23);
    for (int s = 0; s < L.size(); ++s) {
        auto base = neighbors(make_state(L, 2, s), env, L);
        auto shifted = neighbors(make_state(L, 3, s), env, L);
        REQUIRE(base.size() == shifted.size());
        for (size_t i = 0; i < base.size(); ++i) {
            // the same move list, one level up; rates read one site up
            for (size_t k = 0; k < base[i].first.positions.size(); ++k)
                CHECK(shifted[i].first.positions[k] == base[i].first.positions[k] + 1);
            const Move& m = L.moves(s)[i];
            int64_t site = 3 + m.leg_offset;
            double expect = m.dir > 0 ? env.omega_plus(site) : env.omega_minus(site);
            CHECK(shifted[i].second == expect);
        }
    }
}

TEST_CASE("build_graph: vertex counts and single-level windows") {
    Environment env(EnvironmentSpec({{0.5, 0.8}, {0.5, 0.4}}, 0.1), 3);
    SpiderGraphWindow g(rope2(), env, 0, 3);
    CHECK(g.vertex_count() == 8);

    auto L3 = LocalConfigSet::validate({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {0, 2, 4}});
    SpiderGraphWindow g3(L3, env, 0, 1);
    CHECK(g3.vertex_count() == 8);
    // cross-level edges are exactly the leg-0 moves allowed by the set:
    // (0,2,3)->(1,2,3)=(0,1,2)+1 and (0,2,4)->(1,2,4)=(0,1,3)+1, both ways
    int cross = 0;
    for (int u = 0; u < g3.vertex_count(); ++u)
        for (const auto& e : g3.out(u))
            if (g3.level_of(u) != g3.level_of(e.to)) ++cross;
    CHECK(cross == 4);

    SpiderGraphWindow single(L3, env, 5, 5);
    for (int u = 0; u < single.vertex_count(); ++u)
        for (const auto& e : single.out(u)) CHECK(single.level_of(e.to) == 5);
}

TEST_CASE("build_graph: rates bounded by ellipticity, out-degree by 2N") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        auto spec = random_env_spec(seed);
        Environment env(spec, seed);
        auto L = random_config_set(seed);
        SpiderGraphWindow g(L, env, -2, 4);
        for (int u = 0; u < g.vertex_count(); ++u) {
            CHECK(static_cast<int>(g.out(u).size()) <= 2 * L.legs());
            for (const auto& e : g.out(u)) {
                CHECK(e.rate >= spec.delta());
                CHECK(e.rate <= 1.0 - spec.delta());
            }
        }
    }
}

TEST_CASE("detailed balance holds exactly on random windows") {
    for (uint64_t seed = 1; seed <= 40; ++seed) {
        Environment env(random_env_spec(seed), seed * 31 + 7);
        auto L = random_config_set(seed + 1000);
        SpiderGraphWindow g(L, env, -3, 5);
        CHECK(g.detailed_balance_error() < 1e-12);
    }
}

TEST_CASE("normalized measure sums to one") {
    Environment env(EnvironmentSpec({{0.5, 0.8}, {0.5, 0.4}}, 0.1), 17);
    SpiderGraphWindow g(rope2(), env, -4, 6);
    double total = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v) total += g.pi_hat(v);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measure sandwich constants: closed forms and collapse near 1/2") {
    auto L1 = LocalConfigSet::validate({{0}});
    auto [k3, k4] = measure_sandwich_constants(L1, 0.25, 1);
    CHECK(k3 == doctest::Approx((4.0 / 3.0) * (1.0 / 3.0)));
    CHECK(k4 == doctest::Approx(4.0 * 3.0));

    auto [k3f, k4f] = measure_sandwich_constants(L1, 0.4999999, 1);
    CHECK(k3f == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(k4f == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("measure sandwich holds on random states") {
    auto L = rope2();
    EnvironmentSpec spec({{0.5, 0.8}, {0.5, 0.4}}, 0.1);
    auto [k3, k4] = measure_sandwich_constants(L, spec.delta(), L.legs());
    Xoshiro256pp rng(99, 0);
    for (int i = 0; i < 10000; ++i) {
        Environment env(spec, rng.next());
        int64_t level = static_cast<int64_t>(rng.next() % 41) - 20;
        int shape = static_cast<int>(rng.next() % 2);
        SpiderState s = make_state(L, level, shape);
        auto vp = potential(env, std::min<int64_t>(0, level - 1),
                            std::max<int64_t>(1, level + 3));
        double p = pi_weight(vp, s);
        double anchor = std::exp(-L.legs() * vp.at(level));
        CHECK(p >= k3 * anchor * (1.0 - 1e-12));
        CHECK(p <= k4 * anchor * (1.0 + 1e-12));
    }
}
