#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spider/config_set.hpp"
#include "spider/env.hpp"
#include "spider/rng.hpp"

namespace spider {

// RateExact: hold for Exp(total exit rate), jump proportional to rates.
// UnitJumps: same embedded chain, jump epochs at i.i.d. Exp(1) times.
// Both modes consume the random stream identically, so the sequence of
// visited states agrees jump for jump for a fixed seed.
enum class ClockMode { RateExact, UnitJumps };

// One continuous-time step.
struct Step {
    SpiderState next;
    double holding;
};

Step step(const SpiderState& s, const Environment& env, const LocalConfigSet& L,
          ClockMode mode, Xoshiro256pp& rng);

// Normalized jump probabilities out of a state, with the total exit rate.
struct JumpLaw {
    std::vector<std::pair<SpiderState, double>> targets;  // (state, probability)
    double total_rate;
};
JumpLaw jump_law(const SpiderState& s, const Environment& env, const LocalConfigSet& L);

// Fast stepping core on (level, shape). All higher-level runs are built on it.
class Walker {
public:
    Walker(const LocalConfigSet& L, const Environment& env, ClockMode mode,
           Xoshiro256pp rng, int64_t level, int shape);

    void jump();

    int64_t level() const { return level_; }
    int shape() const { return shape_; }
    double time() const { return time_; }
    int64_t jumps() const { return jumps_; }
    int64_t max_level() const { return max_level_; }
    double last_holding() const { return last_holding_; }

private:
    const LocalConfigSet& L_;
    const Environment& env_;
    ClockMode mode_;
    Xoshiro256pp rng_;
    int64_t level_;
    int shape_;
    double time_ = 0.0;
    int64_t jumps_ = 0;
    int64_t max_level_;
    double last_holding_ = 0.0;
    std::vector<double> scratch_;
};

struct Checkpoint {
    int64_t jumps;
    double time;
    int64_t s1;
    int64_t max_s1;
};

struct Trajectory {
    int64_t x0_level = 0;
    int x0_shape = 0;
    uint64_t stream_id = 0;
    std::vector<Checkpoint> checkpoints;  // requested grid plus the final state
    int64_t final_jumps = 0;
    double final_time = 0.0;
    int64_t final_s1 = 0;
    int64_t final_max_s1 = 0;
    int final_shape = 0;
    // populated only when recording is requested (tests, small runs)
    std::vector<std::pair<int64_t, int>> path;  // (level, shape) after each jump
    std::vector<double> holdings;
};

struct RegenerationEpoch {
    int64_t jump;
    double time;
    int64_t s1;
};

// Epochs where the spider re-enters its initial local configuration at a
// strictly larger position than at the previous epoch, plus the first return
// to the initial configuration anywhere.
struct RegenerationRecord {
    std::vector<RegenerationEpoch> epochs;
    int64_t upsilon_jump = -1;  // -1 when the shape was never revisited
    double upsilon_time = 0.0;
};

struct RunResult {
    Trajectory traj;
    RegenerationRecord regen;
};

struct RunOptions {
    ClockMode mode = ClockMode::RateExact;
    int64_t budget = 100000;                // jumps
    std::vector<int64_t> checkpoints = {};  // ascending jump counts
    bool record_path = false;
    bool track_regeneration = true;
};

RunResult run_trajectory(const LocalConfigSet& L, const Environment& env, int x0_shape,
                         uint64_t master_seed, uint64_t stream_id, const RunOptions& opt);

// Scan an already-recorded path for regeneration epochs; equivalent to the
// live tracking above. Requires the trajectory to carry the full path.
RegenerationRecord regeneration_scan(const Trajectory& traj);

enum class StopStatus { Reached, TimedOut };

struct HitResult {
    StopStatus status;
    double time;       // continuous time of the hit (or of the budget end)
    int64_t jumps;
    SpiderState state;  // state at the stop
};

// First time the spider position equals y. When the start already sits at y,
// this is the first re-hit after leaving level y (inf over s > 0).
HitResult hitting_time(const SpiderState& start, const Environment& env,
                       const LocalConfigSet& L, int64_t y, int64_t budget, ClockMode mode,
                       Xoshiro256pp& rng);

struct ExitResult {
    StopStatus status;
    double time;
    int64_t jumps;
    int64_t side;  // a or b when reached
};

// First time the spider position hits a or b; requires a < S1(start) < b.
ExitResult exit_time(const SpiderState& start, const Environment& env,
                     const LocalConfigSet& L, int64_t a, int64_t b, int64_t budget,
                     ClockMode mode, Xoshiro256pp& rng);

struct Estimate {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

struct SpeedSummary {
    Estimate v_time;
    std::optional<Estimate> v_regen;  // absent when no replica completed an epoch
    size_t regen_increments = 0;
    double censored_fraction = 0.0;
    size_t replicas = 0;
};

struct BootstrapOptions {
    size_t resamples = 1000;
    double confidence = 0.95;
    uint64_t seed = 0x626f6f74;
    size_t min_replicas = 30;
};

SpeedSummary speed_estimators(const std::vector<RunResult>& runs,
                              const BootstrapOptions& opt = {});

struct OccupationEstimate {
    Estimate p_hit;       // P[tau_y < s]
    Estimate occupation;  // integral over [0, s+1] of time spent at level y
    size_t replicas = 0;
};

OccupationEstimate occupation_estimate(const SpiderState& start, const Environment& env,
                                       const LocalConfigSet& L, int64_t y, double s,
                                       size_t replicas, uint64_t master_seed,
                                       ClockMode mode = ClockMode::RateExact,
                                       int64_t jump_cap = 50000000);

}  // namespace spider
