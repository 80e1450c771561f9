#include "spider/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "spider/parallel.hpp"

namespace spider {

uint64_t env_seed_for(uint64_t master, bool quenched, size_t replica) {
    uint64_t base = mix64(master ^ 0x656e76ULL);
    return quenched ? base : counter_hash(base, replica + 1);
}

void require_valid(const ExperimentConfig& cfg) {
    auto spec = cfg.env_spec();  // throws on mass / ellipticity problems
    LocalConfigSet::validate(cfg.l_configs);
    if (cfg.enforce_validation) {
        auto rep = validate_spec(spec);
        if (!rep.all_ok())
            throw std::invalid_argument("environment fails model conditions: " +
                                        to_json(rep).dump());
    }
}

ReplicaBatch run_replicas(const ExperimentConfig& cfg) {
    auto spec = cfg.env_spec();
    LocalConfigSet L = LocalConfigSet::validate(cfg.l_configs);
    RunOptions opt;
    opt.mode = cfg.mode;
    opt.budget = cfg.budget;
    opt.checkpoints = cfg.checkpoints;
    ReplicaBatch batch;
    batch.runs.resize(cfg.replicas);
    parallel_for(cfg.replicas, cfg.threads, [&](size_t r) {
        Environment env(spec, env_seed_for(cfg.seed, cfg.quenched, r));
        batch.runs[r] = run_trajectory(L, env, cfg.x0_shape, cfg.seed, r, opt);
    });
    return batch;
}

std::string checkpoints_csv(const ExperimentConfig& cfg, const ReplicaBatch& batch) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(cfg.hash()));
    std::string csv;
    csv += "# config_hash ";
    csv += hash;
    csv += "\n# config ";
    csv += cfg.canonical();
    csv += "\nreplica,jumps,t,S1,max_S1\n";
    for (size_t r = 0; r < batch.runs.size(); ++r)
        for (const auto& ck : batch.runs[r].traj.checkpoints)
            csv += std::to_string(r) + "," + std::to_string(ck.jumps) + "," + g17(ck.time) +
                   "," + std::to_string(ck.s1) + "," + std::to_string(ck.max_s1) + "\n";
    return csv;
}

ExperimentConfig config_from_csv(const std::string& csv) {
    const std::string tag = "# config ";
    size_t pos = csv.find(tag);
    if (pos == std::string::npos) throw ParseError("CSV carries no embedded config");
    size_t end = csv.find('\n', pos);
    std::string line = csv.substr(pos + tag.size(), end - pos - tag.size());
    return ExperimentConfig::from_json(json::parse(line));
}

std::vector<CheckpointSummary> checkpoint_stats(const std::vector<RunResult>& runs) {
    std::vector<CheckpointSummary> out;
    if (runs.empty()) return out;
    size_t n_ck = runs.front().traj.checkpoints.size();
    for (size_t c = 0; c < n_ck; ++c) {
        CheckpointSummary st;
        st.jumps = runs.front().traj.checkpoints[c].jumps;
        std::vector<double> vt(runs.size());
        double mx = 0.0;
        for (size_t r = 0; r < runs.size(); ++r) {
            const auto& ck = runs[r].traj.checkpoints[c];
            vt[r] = static_cast<double>(ck.s1) / ck.time;
            mx += static_cast<double>(ck.max_s1);
        }
        st.mean_max_s1 = mx / static_cast<double>(runs.size());
        double m = 0.0;
        for (double v : vt) m += v;
        st.v_time.value = m / static_cast<double>(vt.size());
        double var = 0.0;
        for (double v : vt) var += (v - st.v_time.value) * (v - st.v_time.value);
        var /= static_cast<double>(vt.size() > 1 ? vt.size() - 1 : 1);
        double half = 1.96 * std::sqrt(var / static_cast<double>(vt.size()));
        st.v_time.lo = st.v_time.value - half;
        st.v_time.hi = st.v_time.value + half;
        out.push_back(st);
    }
    return out;
}

ExponentFit displacement_exponent_fit(const std::vector<RunResult>& runs, uint64_t seed) {
    ExponentFit fit;
    if (runs.empty()) return fit;
    size_t n_ck = runs.front().traj.checkpoints.size();
    if (n_ck < 2) return fit;
    std::vector<double> lx(n_ck);
    for (size_t c = 0; c < n_ck; ++c)
        lx[c] = std::log(static_cast<double>(runs.front().traj.checkpoints[c].jumps));

    auto slope_of = [&](const std::vector<size_t>& idx) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        size_t n = lx.size();
        for (size_t c = 0; c < n; ++c) {
            double mean_mx = 0.0;
            for (size_t r : idx) {
                int64_t m = runs[r].traj.checkpoints[c].max_s1;
                mean_mx += static_cast<double>(m > 0 ? m : 1);
            }
            mean_mx /= static_cast<double>(idx.size());
            double y = std::log(mean_mx);
            sx += lx[c];
            sy += y;
            sxx += lx[c] * lx[c];
            sxy += lx[c] * y;
        }
        double dn = static_cast<double>(n);
        return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    };

    std::vector<size_t> all(runs.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    fit.slope = slope_of(all);

    Xoshiro256pp rng(seed, 0x66697421);
    std::vector<double> stats(1000);
    std::vector<size_t> draw(all.size());
    for (auto& s : stats) {
        for (auto& d : draw) d = static_cast<size_t>(rng.next() % all.size());
        s = slope_of(draw);
    }
    std::sort(stats.begin(), stats.end());
    fit.lo = stats[static_cast<size_t>(0.025 * (stats.size() - 1))];
    fit.hi = stats[static_cast<size_t>(0.975 * (stats.size() - 1))];
    fit.ok = true;
    return fit;
}

json summary_json(const ExperimentConfig& cfg, const ReplicaBatch& batch) {
    BootstrapOptions bopt;
    bopt.seed = mix64(cfg.seed ^ 0x626f6f74);
    SpeedSummary sum = speed_estimators(batch.runs, bopt);
    json j;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(cfg.hash()));
    j["config_hash"] = hash;
    j["mode"] = cfg.mode == ClockMode::RateExact ? "rate-exact" : "unit-jumps";
    j["quenched"] = cfg.quenched;
    j["budget"] = cfg.budget;
    j["speed"] = to_json(sum);
    try {
        double kappa = kappa_solve(cfg.env_spec(), 1e-12);
        j["kappa"] = kappa;
        size_t legs = cfg.l_configs.front().size();
        j["kappa_over_N"] = kappa / static_cast<double>(legs);
    } catch (const std::exception&) {
        j["kappa"] = nullptr;
    }
    json cks = json::array();
    for (const auto& st : checkpoint_stats(batch.runs))
        cks.push_back({{"jumps", st.jumps},
                       {"v_time", to_json(st.v_time)},
                       {"mean_max_s1", st.mean_max_s1}});
    j["checkpoints"] = cks;
    ExponentFit fit = displacement_exponent_fit(batch.runs, cfg.seed);
    if (fit.ok)
        j["displacement_exponent"] = {{"slope", fit.slope}, {"lo", fit.lo}, {"hi", fit.hi}};
    return j;
}

}  // namespace spider
