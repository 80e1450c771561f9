#pragma once

// Shared machinery of the experiment commands: replica batches, per-checkpoint
// aggregation, the displacement-exponent fit, and the CSV/JSON emitters.

#include <string>
#include <vector>

#include "spider/io.hpp"
#include "spider/sim.hpp"

namespace spider {

// The environment stream is separate from the trajectory streams; quenched
// runs reuse one realization across replicas, annealed runs redraw per
// replica.
uint64_t env_seed_for(uint64_t master, bool quenched, size_t replica);

struct ReplicaBatch {
    std::vector<RunResult> runs;
};

ReplicaBatch run_replicas(const ExperimentConfig& cfg);

// header lines with the config hash plus one row per checkpoint:
// replica,jumps,t,S1,max_S1
std::string checkpoints_csv(const ExperimentConfig& cfg, const ReplicaBatch& batch);

// parse the "# config ..." line back out of a checkpoints CSV
ExperimentConfig config_from_csv(const std::string& csv);

struct CheckpointSummary {
    int64_t jumps = 0;
    Estimate v_time;
    double mean_max_s1 = 0.0;
};

std::vector<CheckpointSummary> checkpoint_stats(const std::vector<RunResult>& runs);

// least-squares slope of ln(mean max_S1) against ln(jumps) across the
// checkpoint grid, with a bootstrap interval over replicas
struct ExponentFit {
    double slope = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool ok = false;
};

ExponentFit displacement_exponent_fit(const std::vector<RunResult>& runs, uint64_t seed);

json summary_json(const ExperimentConfig& cfg, const ReplicaBatch& batch);

// throws when the environment or the restriction set is unusable; model
// conditions are enforced only when the config demands it
void require_valid(const ExperimentConfig& cfg);

}  // namespace spider
