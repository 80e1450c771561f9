#include "spider/sim.hpp"

#include <algorithm>
#include <cmath>

#include "spider/graph.hpp"

namespace spider {

namespace {

// selection and holding draws happen in this order in every mode
template <typename RateFn>
int pick_move(const std::vector<Move>& mv, RateFn&& rate_of, Xoshiro256pp& rng,
              std::vector<double>& scratch, double& total_out) {
    size_t n = mv.size();
    if (n == 0) throw DeadlockError("state has no legal move");
    scratch.resize(n);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        total += rate_of(mv[i]);
        scratch[i] = total;
    }
    double u = rng.uniform() * total;
    size_t pick = 0;
    while (pick + 1 < n && u >= scratch[pick]) ++pick;
    total_out = total;
    return static_cast<int>(pick);
}

double draw_holding(ClockMode mode, double total, Xoshiro256pp& rng) {
    double u = rng.uniform_pos();
    return mode == ClockMode::RateExact ? -std::log(u) / total : -std::log(u);
}

}  // namespace

Step step(const SpiderState& s, const Environment& env, const LocalConfigSet& L,
          ClockMode mode, Xoshiro256pp& rng) {
    int shape = L.shape_of(s.shape());
    if (shape < 0 || s.positions.size() != static_cast<size_t>(L.legs()))
        throw InvalidStateError("state is not a vertex of the spider graph");
    const auto& mv = L.moves(shape);
    std::vector<double> scratch;
    double total = 0.0;
    int64_t level = s.level();
    int pick = pick_move(
        mv,
        [&](const Move& m) {
            int64_t site = level + m.leg_offset;
            return m.dir > 0 ? env.omega_plus(site) : env.omega_minus(site);
        },
        rng, scratch, total);
    const Move& m = mv[static_cast<size_t>(pick)];
    return Step{make_state(L, level + m.dlevel, m.to_shape), draw_holding(mode, total, rng)};
}

JumpLaw jump_law(const SpiderState& s, const Environment& env, const LocalConfigSet& L) {
    JumpLaw law;
    law.total_rate = 0.0;
    for (auto& [state, rate] : neighbors(s, env, L)) {
        law.total_rate += rate;
        law.targets.emplace_back(state, rate);
    }
    for (auto& t : law.targets) t.second /= law.total_rate;
    return law;
}

Walker::Walker(const LocalConfigSet& L, const Environment& env, ClockMode mode,
               Xoshiro256pp rng, int64_t level, int shape)
    : L_(L), env_(env), mode_(mode), rng_(rng), level_(level), shape_(shape),
      max_level_(level) {
    scratch_.reserve(static_cast<size_t>(2 * L.legs()));
}

void Walker::jump() {
    const auto& mv = L_.moves(shape_);
    double total = 0.0;
    int pick = pick_move(
        mv,
        [&](const Move& m) {
            int64_t site = level_ + m.leg_offset;
            return m.dir > 0 ? env_.omega_plus(site) : env_.omega_minus(site);
        },
        rng_, scratch_, total);
    const Move& m = mv[static_cast<size_t>(pick)];
    last_holding_ = draw_holding(mode_, total, rng_);
    time_ += last_holding_;
    level_ += m.dlevel;
    shape_ = m.to_shape;
    ++jumps_;
    max_level_ = std::max(max_level_, level_);
}

RunResult run_trajectory(const LocalConfigSet& L, const Environment& env, int x0_shape,
                         uint64_t master_seed, uint64_t stream_id, const RunOptions& opt) {
    RunResult res;
    res.traj.x0_level = 0;
    res.traj.x0_shape = x0_shape;
    res.traj.stream_id = stream_id;

    Walker w(L, env, opt.mode, Xoshiro256pp(master_seed, stream_id), 0, x0_shape);
    std::vector<int64_t> grid = opt.checkpoints;
    std::sort(grid.begin(), grid.end());
    size_t next_ck = 0;

    int64_t last_epoch_level = 0;
    while (w.jumps() < opt.budget) {
        w.jump();
        if (opt.record_path) {
            res.traj.path.emplace_back(w.level(), w.shape());
            res.traj.holdings.push_back(w.last_holding());
        }
        if (opt.track_regeneration && w.shape() == x0_shape) {
            if (res.regen.upsilon_jump < 0) {
                res.regen.upsilon_jump = w.jumps();
                res.regen.upsilon_time = w.time();
            }
            if (w.level() > last_epoch_level) {
                res.regen.epochs.push_back(RegenerationEpoch{w.jumps(), w.time(), w.level()});
                last_epoch_level = w.level();
            }
        }
        if (next_ck < grid.size() && w.jumps() == grid[next_ck]) {
            res.traj.checkpoints.push_back(
                Checkpoint{w.jumps(), w.time(), w.level(), w.max_level()});
            ++next_ck;
        }
    }
    if (res.traj.checkpoints.empty() || res.traj.checkpoints.back().jumps != w.jumps())
        res.traj.checkpoints.push_back(
            Checkpoint{w.jumps(), w.time(), w.level(), w.max_level()});
    res.traj.final_jumps = w.jumps();
    res.traj.final_time = w.time();
    res.traj.final_s1 = w.level();
    res.traj.final_max_s1 = w.max_level();
    res.traj.final_shape = w.shape();
    return res;
}

RegenerationRecord regeneration_scan(const Trajectory& traj) {
    RegenerationRecord rec;
    double t = 0.0;
    int64_t last_epoch_level = traj.x0_level;
    for (size_t n = 0; n < traj.path.size(); ++n) {
        t += traj.holdings[n];
        auto [level, shape] = traj.path[n];
        if (shape != traj.x0_shape) continue;
        if (rec.upsilon_jump < 0) {
            rec.upsilon_jump = static_cast<int64_t>(n + 1);
            rec.upsilon_time = t;
        }
        if (level > last_epoch_level) {
            rec.epochs.push_back(RegenerationEpoch{static_cast<int64_t>(n + 1), t, level});
            last_epoch_level = level;
        }
    }
    return rec;
}

HitResult hitting_time(const SpiderState& start, const Environment& env,
                       const LocalConfigSet& L, int64_t y, int64_t budget, ClockMode mode,
                       Xoshiro256pp& rng) {
    int shape = L.shape_of(start.shape());
    if (shape < 0) throw InvalidStateError("start is not a vertex");
    Walker w(L, env, mode, rng, start.level(), shape);
    bool armed = start.level() != y;  // must leave level y before a hit counts
    while (w.jumps() < budget) {
        w.jump();
        if (!armed) {
            if (w.level() != y) armed = true;
            continue;
        }
        if (w.level() == y)
            return HitResult{StopStatus::Reached, w.time(), w.jumps(),
                             make_state(L, w.level(), w.shape())};
    }
    return HitResult{StopStatus::TimedOut, w.time(), w.jumps(),
                     make_state(L, w.level(), w.shape())};
}

ExitResult exit_time(const SpiderState& start, const Environment& env,
                     const LocalConfigSet& L, int64_t a, int64_t b, int64_t budget,
                     ClockMode mode, Xoshiro256pp& rng) {
    if (!(a < start.level() && start.level() < b))
        throw std::invalid_argument("exit_time needs a < S1(start) < b");
    int shape = L.shape_of(start.shape());
    if (shape < 0) throw InvalidStateError("start is not a vertex");
    Walker w(L, env, mode, rng, start.level(), shape);
    while (w.jumps() < budget) {
        w.jump();
        if (w.level() == a || w.level() == b)
            return ExitResult{StopStatus::Reached, w.time(), w.jumps(), w.level()};
    }
    return ExitResult{StopStatus::TimedOut, w.time(), w.jumps(), 0};
}

namespace {

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

Estimate bootstrap_mean(const std::vector<double>& xs, const BootstrapOptions& opt) {
    Estimate e;
    e.value = mean_of(xs);
    Xoshiro256pp rng(opt.seed, 0);
    std::vector<double> stats(opt.resamples);
    std::vector<double> draw(xs.size());
    for (size_t b = 0; b < opt.resamples; ++b) {
        for (size_t i = 0; i < xs.size(); ++i)
            draw[i] = xs[static_cast<size_t>(rng.next() % xs.size())];
        stats[b] = mean_of(draw);
    }
    std::sort(stats.begin(), stats.end());
    double alpha = (1.0 - opt.confidence) / 2.0;
    e.lo = stats[static_cast<size_t>(alpha * (opt.resamples - 1))];
    e.hi = stats[static_cast<size_t>((1.0 - alpha) * (opt.resamples - 1))];
    return e;
}

}  // namespace

SpeedSummary speed_estimators(const std::vector<RunResult>& runs, const BootstrapOptions& opt) {
    if (runs.size() < opt.min_replicas)
        throw InsufficientDataError("need at least " + std::to_string(opt.min_replicas) +
                                    " replicas, got " + std::to_string(runs.size()));
    SpeedSummary out;
    out.replicas = runs.size();

    std::vector<double> vt(runs.size());
    for (size_t i = 0; i < runs.size(); ++i)
        vt[i] = static_cast<double>(runs[i].traj.final_s1) / runs[i].traj.final_time;
    out.v_time = bootstrap_mean(vt, opt);

    // per-replica completed regeneration sums (displacement, elapsed time)
    std::vector<std::pair<double, double>> sums(runs.size(), {0.0, 0.0});
    size_t completed = 0;
    for (size_t i = 0; i < runs.size(); ++i) {
        const auto& ep = runs[i].regen.epochs;
        if (!ep.empty()) {
            sums[i] = {static_cast<double>(ep.back().s1 - runs[i].traj.x0_level),
                       ep.back().time};
            completed += ep.size();
        }
    }
    out.regen_increments = completed;
    out.censored_fraction =
        static_cast<double>(runs.size()) / static_cast<double>(completed + runs.size());

    if (completed > 0) {
        auto pooled = [&](const std::vector<std::pair<double, double>>& ss) {
            double ds = 0.0, dt = 0.0;
            for (const auto& [a, b] : ss) {
                ds += a;
                dt += b;
            }
            return dt > 0.0 ? ds / dt : 0.0;
        };
        Estimate vr;
        vr.value = pooled(sums);
        Xoshiro256pp rng(opt.seed, 1);
        std::vector<double> stats;
        stats.reserve(opt.resamples);
        std::vector<std::pair<double, double>> draw(sums.size());
        for (size_t b = 0; b < opt.resamples; ++b) {
            for (size_t i = 0; i < sums.size(); ++i)
                draw[i] = sums[static_cast<size_t>(rng.next() % sums.size())];
            stats.push_back(pooled(draw));
        }
        std::sort(stats.begin(), stats.end());
        double alpha = (1.0 - opt.confidence) / 2.0;
        vr.lo = stats[static_cast<size_t>(alpha * (stats.size() - 1))];
        vr.hi = stats[static_cast<size_t>((1.0 - alpha) * (stats.size() - 1))];
        out.v_regen = vr;
    }
    return out;
}

OccupationEstimate occupation_estimate(const SpiderState& start, const Environment& env,
                                       const LocalConfigSet& L, int64_t y, double s,
                                       size_t replicas, uint64_t master_seed, ClockMode mode,
                                       int64_t jump_cap) {
    if (replicas < 100) throw InsufficientDataError("occupation_estimate needs >= 100 replicas");
    int shape0 = L.shape_of(start.shape());
    if (shape0 < 0) throw InvalidStateError("start is not a vertex");

    double horizon = s + 1.0;
    std::vector<double> hits(replicas), occs(replicas);
    for (size_t r = 0; r < replicas; ++r) {
        Walker w(L, env, mode, Xoshiro256pp(master_seed, r), start.level(), shape0);
        bool armed = start.level() != y;
        bool hit = false;
        double occ = 0.0;
        double prev_time = 0.0;
        int64_t prev_level = start.level();
        while (w.time() < horizon && w.jumps() < jump_cap) {
            w.jump();
            double seg_end = std::min(w.time(), horizon);
            if (prev_level == y && seg_end > prev_time) occ += seg_end - prev_time;
            if (!armed && w.level() != y) armed = true;
            else if (armed && !hit && w.level() == y && w.time() < s) hit = true;
            prev_time = w.time();
            prev_level = w.level();
        }
        if (prev_level == y && horizon > prev_time) occ += horizon - prev_time;
        hits[r] = hit ? 1.0 : 0.0;
        occs[r] = occ;
    }
    OccupationEstimate out;
    BootstrapOptions bopt;
    bopt.min_replicas = 1;
    out.p_hit = bootstrap_mean(hits, bopt);
    out.occupation = bootstrap_mean(occs, bopt);
    out.replicas = replicas;
    return out;
}

}  // namespace spider
