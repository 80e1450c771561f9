#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spider/sim.hpp"

using namespace spider;

namespace {

LocalConfigSet rope2() { return LocalConfigSet::validate({{0, 1}, {0, 2}}); }
LocalConfigSet walker1() { return LocalConfigSet::validate({{0}}); }

EnvironmentSpec drift_spec() { return EnvironmentSpec({{0.5, 0.8}, {0.5, 0.4}}, 0.1); }
EnvironmentSpec flat_spec() { return EnvironmentSpec({{1.0, 0.5}}, 0.25); }
EnvironmentSpec fast_spec() { return EnvironmentSpec({{1.0, 0.9}}, 0.1); }

}  // namespace

TEST_CASE("jump_law: rope-2 normalizes the two available rates") {
    auto L = rope2();
    Environment env(drift_spec(), 5);
    auto law = jump_law(make_state(L, 0, 0), env, L);  // state (0,1)
    REQUIRE(law.targets.size() == 2);
    double wp1 = env.omega_plus(1), wm0 = env.omega_minus(0);
    CHECK(law.total_rate == doctest::Approx(wp1 + wm0));
    for (const auto& [st, p] : law.targets) {
        if (st.positions == std::vector<int64_t>{0, 2})
            CHECK(p == doctest::Approx(wp1 / (wp1 + wm0)));
        else
            CHECK(p == doctest::Approx(wm0 / (wp1 + wm0)));
    }
}

TEST_CASE("jump_law: single walker rates already sum to one") {
    auto L = walker1();
    Environment env(drift_spec(), 5);
    SpiderState s;
    s.positions = {3};
    auto law = jump_law(s, env, L);
    CHECK(law.total_rate == doctest::Approx(1.0));
    for (const auto& [st, p] : law.targets) {
        if (st.positions == std::vector<int64_t>{4}) CHECK(p == env.omega_plus(3));
        if (st.positions == std::vector<int64_t>{2}) CHECK(p == env.omega_minus(3));
    }
}

TEST_CASE("step: mean holding time matches the exponential rate") {
    auto L = rope2();
    Environment env(drift_spec(), 5);
    SpiderState s = make_state(L, 0, 0);
    double total = env.omega_plus(1) + env.omega_minus(0);
    Xoshiro256pp rng(2024, 0);
    double sum = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) sum += step(s, env, L, ClockMode::RateExact, rng).holding;
    CHECK(sum / n == doctest::Approx(1.0 / total).epsilon(0.02));

    Xoshiro256pp rng2(2024, 1);
    sum = 0.0;
    for (int i = 0; i < n; ++i) sum += step(s, env, L, ClockMode::UnitJumps, rng2).holding;
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("modes share the embedded jump chain for a fixed seed") {
    auto L = rope2();
    Environment env(drift_spec(), 5);
    RunOptions opt;
    opt.budget = 5000;
    opt.record_path = true;
    opt.mode = ClockMode::RateExact;
    auto a = run_trajectory(L, env, 0, 99, 3, opt);
    opt.mode = ClockMode::UnitJumps;
    auto b = run_trajectory(L, env, 0, 99, 3, opt);
    CHECK(a.traj.path == b.traj.path);
    CHECK(a.traj.final_time != b.traj.final_time);
}

TEST_CASE("identical (seed, config) gives bit-identical trajectories") {
    auto L = rope2();
    Environment env(drift_spec(), 5);
    RunOptions opt;
    opt.budget = 3000;
    opt.record_path = true;
    auto a = run_trajectory(L, env, 0, 7, 1, opt);
    auto b = run_trajectory(L, env, 0, 7, 1, opt);
    CHECK(a.traj.path == b.traj.path);
    CHECK(a.traj.holdings == b.traj.holdings);
    CHECK(a.traj.final_time == b.traj.final_time);
}

TEST_CASE("trajectory invariants: unit position steps, bounded legs, increasing time") {
    auto L = LocalConfigSet::validate({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {0, 2, 4}});
    Environment env(drift_spec(), 41);
    RunOptions opt;
    opt.budget = 20000;
    opt.record_path = true;
    auto r = run_trajectory(L, env, 0, 11, 0, opt);
    int64_t prev_level = 0;
    for (size_t n = 0; n < r.traj.path.size(); ++n) {
        auto [level, shape] = r.traj.path[n];
        CHECK(std::abs(level - prev_level) <= 1);  // leg-1 jumps move by one
        for (int off : L.config(shape)) {
            CHECK(off >= L.min_offset());
            CHECK(off <= L.max_offset());
        }
        CHECK(r.traj.holdings[n] > 0.0);
        prev_level = level;
    }
}

TEST_CASE("hitting_time: starting at y means first return") {
    auto L = walker1();
    Environment env(flat_spec(), 1);
    SpiderState s;
    s.positions = {0};
    Xoshiro256pp rng(5, 0);
    auto hit = hitting_time(s, env, L, 0, 100000, ClockMode::RateExact, rng);
    REQUIRE(hit.status == StopStatus::Reached);
    CHECK(hit.time > 0.0);
    CHECK(hit.jumps >= 2);  // must leave level 0 first
    CHECK(hit.state.level() == 0);
}

TEST_CASE("hitting_time: unreachable target within budget times out") {
    auto L = walker1();
    Environment env(fast_spec(), 1);  // strong right drift
    SpiderState s;
    s.positions = {0};
    Xoshiro256pp rng(5, 0);
    auto hit = hitting_time(s, env, L, -500000, 1000, ClockMode::RateExact, rng);
    CHECK(hit.status == StopStatus::TimedOut);
    CHECK(hit.jumps == 1000);
}

TEST_CASE("hitting_time: strong drift reaches +10 in every replica") {
    auto L = walker1();
    Environment env(fast_spec(), 2);
    SpiderState s;
    s.positions = {0};
    for (uint64_t r = 0; r < 1000; ++r) {
        Xoshiro256pp rng(909, r);
        auto hit = hitting_time(s, env, L, 10, 100000, ClockMode::RateExact, rng);
        REQUIRE(hit.status == StopStatus::Reached);
    }
}

TEST_CASE("exit_time: precondition and one-jump right exits") {
    auto L = rope2();
    Environment env(drift_spec(), 5);
    SpiderState s = make_state(L, 0, 1);  // (0,2): leg 0 can move up
    Xoshiro256pp rng(1, 0);
    CHECK_THROWS_AS(exit_time(s, env, L, 5, 9, 10, ClockMode::RateExact, rng),
                    std::invalid_argument);
    size_t one_jump_right = 0;
    for (uint64_t r = 0; r < 200; ++r) {
        Xoshiro256pp rr(17, r);
        auto ex = exit_time(s, env, L, -50, 1, 100000, ClockMode::RateExact, rr);
        REQUIRE(ex.status == StopStatus::Reached);
        if (ex.jumps == 1 && ex.side == 1) ++one_jump_right;
    }
    CHECK(one_jump_right > 0);
}

TEST_CASE("exit_time: symmetric environment leaves through either side evenly") {
    auto L = walker1();
    Environment env(flat_spec(), 3);
    SpiderState s;
    s.positions = {0};
    size_t right = 0;
    const size_t n = 10000;
    for (uint64_t r = 0; r < n; ++r) {
        Xoshiro256pp rng(4242, r);
        auto ex = exit_time(s, env, L, -10, 10, 1000000, ClockMode::RateExact, rng);
        REQUIRE(ex.status == StopStatus::Reached);
        if (ex.side == 10) ++right;
    }
    CHECK(std::abs(static_cast<double>(right) / n - 0.5) < 0.02);
}

TEST_CASE("regeneration: an up-first walk has its first epoch at jump one") {
    auto L = walker1();
    Environment env(fast_spec(), 8);
    RunOptions opt;
    opt.budget = 10;
    opt.record_path = true;
    // find a stream whose first move is up
    for (uint64_t sid = 0; sid < 32; ++sid) {
        auto r = run_trajectory(L, env, 0, 3131, sid, opt);
        if (r.traj.path[0].first == 1) {
            REQUIRE_FALSE(r.regen.epochs.empty());
            CHECK(r.regen.epochs[0].jump == 1);
            CHECK(r.regen.epochs[0].s1 == 1);
            CHECK(r.regen.epochs[0].time == doctest::Approx(r.traj.holdings[0]));
            CHECK(r.regen.upsilon_jump == 1);
            return;
        }
    }
    FAIL("no up-first stream found in 32 tries");
}

TEST_CASE("regeneration: live tracking equals the recorded-path scan") {
    auto L = rope2();
    Environment env(drift_spec(), 5);
    RunOptions opt;
    opt.budget = 20000;
    opt.record_path = true;
    for (uint64_t sid = 0; sid < 5; ++sid) {
        auto r = run_trajectory(L, env, 0, 777, sid, opt);
        auto scanned = regeneration_scan(r.traj);
        REQUIRE(scanned.epochs.size() == r.regen.epochs.size());
        for (size_t i = 0; i < scanned.epochs.size(); ++i) {
            CHECK(scanned.epochs[i].jump == r.regen.epochs[i].jump);
            CHECK(scanned.epochs[i].s1 == r.regen.epochs[i].s1);
            CHECK(scanned.epochs[i].time == doctest::Approx(r.regen.epochs[i].time));
        }
        CHECK(scanned.upsilon_jump == r.regen.upsilon_jump);
    }
}

TEST_CASE("regeneration: epochs track strictly increasing record positions") {
    auto L = rope2();
    Environment env(EnvironmentSpec({{0.5, 0.9}, {0.5, 0.45}}, 0.05), 21);
    RunOptions opt;
    opt.budget = 100000;
    size_t total_epochs = 0;
    for (uint64_t sid = 0; sid < 100; ++sid) {
        auto r = run_trajectory(L, env, 0, 555, sid, opt);
        int64_t prev = 0;
        for (const auto& ep : r.regen.epochs) {
            CHECK(ep.s1 > prev);
            prev = ep.s1;
        }
        total_epochs += r.regen.epochs.size();
    }
    CHECK(total_epochs > 1000);  // ballistic regime regenerates steadily
}

TEST_CASE("regeneration: record stays empty when the walk never tops level zero") {
    auto L = walker1();
    Environment env(flat_spec(), 10);
    RunOptions opt;
    opt.budget = 50;
    opt.record_path = true;
    for (uint64_t sid = 0; sid < 50; ++sid) {
        auto r = run_trajectory(L, env, 0, 808, sid, opt);
        bool topped = r.traj.final_max_s1 > 0;
        CHECK(r.regen.epochs.empty() == !topped);
    }
}

TEST_CASE("speed: deterministic fast walker moves at 1 - 2 delta") {
    auto L = walker1();
    Environment env(fast_spec(), 1);
    RunOptions opt;
    opt.budget = 20000;
    std::vector<RunResult> runs;
    for (uint64_t sid = 0; sid < 40; ++sid)
        runs.push_back(run_trajectory(L, env, 0, 10101, sid, opt));
    auto sum = speed_estimators(runs);
    CHECK(sum.v_time.value == doctest::Approx(0.8).epsilon(0.02));
    CHECK(sum.v_time.lo <= 0.8);
    CHECK(sum.v_time.hi >= 0.8);
    REQUIRE(sum.v_regen.has_value());
    CHECK(sum.v_regen->value == doctest::Approx(0.8).epsilon(0.02));
    CHECK(sum.censored_fraction < 0.01);
}

TEST_CASE("speed: flat rope has speed zero within its interval") {
    auto L = rope2();
    Environment env(flat_spec(), 2);
    RunOptions opt;
    opt.budget = 20000;
    std::vector<RunResult> runs;
    for (uint64_t sid = 0; sid < 40; ++sid)
        runs.push_back(run_trajectory(L, env, 0, 2222, sid, opt));
    auto sum = speed_estimators(runs);
    CHECK(sum.v_time.lo < 0.0);
    CHECK(sum.v_time.hi > 0.0);
    CHECK(std::abs(sum.v_time.value) < 0.02);
}

TEST_CASE("speed: too few replicas is an error") {
    auto L = walker1();
    Environment env(fast_spec(), 1);
    RunOptions opt;
    opt.budget = 100;
    std::vector<RunResult> runs;
    for (uint64_t sid = 0; sid < 5; ++sid)
        runs.push_back(run_trajectory(L, env, 0, 1, sid, opt));
    CHECK_THROWS_AS(speed_estimators(runs), InsufficientDataError);
}

TEST_CASE("displacement grows with budget in a drifting environment") {
    auto L = walker1();
    Environment env(drift_spec(), 31);
    double prev = 0.0;
    for (int64_t budget : {1000, 10000, 100000}) {
        RunOptions opt;
        opt.budget = budget;
        double mean_max = 0.0;
        for (uint64_t sid = 0; sid < 50; ++sid)
            mean_max += static_cast<double>(
                run_trajectory(L, env, 0, 616, sid, opt).traj.final_max_s1);
        mean_max /= 50.0;
        CHECK(mean_max > prev);
        prev = mean_max;
    }
}

TEST_CASE("occupation: s = 0 cannot be hit, adjacent levels are") {
    auto L = walker1();
    Environment env(flat_spec(), 6);
    SpiderState s;
    s.positions = {0};
    auto zero = occupation_estimate(s, env, L, 1, 0.0, 200, 51);
    CHECK(zero.p_hit.value == 0.0);
    auto adj = occupation_estimate(s, env, L, 1, 50.0, 200, 52);
    CHECK(adj.p_hit.value > 0.5);
    CHECK(adj.occupation.value > 0.0);
    CHECK_THROWS_AS(occupation_estimate(s, env, L, 1, 1.0, 10, 53), InsufficientDataError);
}
