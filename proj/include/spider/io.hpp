#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "spider/analysis.hpp"
#include "spider/config_set.hpp"
#include "spider/env.hpp"
#include "spider/landscape.hpp"
#include "spider/sim.hpp"

namespace spider {

using json = nlohmann::json;

// --- text formats ---------------------------------------------------------
// Environment spec file: header "delta <value>", then one atom per line
// "prob value".
EnvironmentSpec parse_env_spec_text(const std::string& text);
EnvironmentSpec load_env_spec(const std::string& path);
std::string env_spec_to_text(const EnvironmentSpec& spec);

// Restriction set file: header "N <int>", then one configuration per line as
// N space-separated integers with the first one 0.
std::vector<Config> parse_config_set_text(const std::string& text);
std::vector<Config> load_config_set(const std::string& path);
std::string config_set_to_text(const std::vector<Config>& configs);

// Graph dump for golden tests: one line per directed edge,
// "x-tuple y-tuple rate" with tuples comma-separated.
std::string graph_edge_dump(const SpiderGraphWindow& g);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// shortest-percision-independent float formatting for CSV (17 significant digits)
std::string g17(double v);

uint64_t fnv1a64(const std::string& s);

// --- experiment configuration ---------------------------------------------
struct SweepCell {
    std::string label;
    std::vector<Atom> atoms;
    double delta = 0.1;
    std::vector<Config> l_configs;
    uint64_t seed = 0;  // 0 -> inherit master seed
};

struct ExperimentConfig {
    std::vector<Atom> atoms;
    double delta = 0.1;
    std::vector<Config> l_configs;

    uint64_t seed = 1;
    size_t replicas = 200;
    int64_t budget = 1000000;
    std::vector<int64_t> checkpoints;
    ClockMode mode = ClockMode::RateExact;
    bool quenched = true;
    bool enforce_validation = true;
    unsigned threads = 0;
    int x0_shape = 0;

    // analysis / landscape parameters
    double t = 100.0;
    double eps = 0.1;
    double k7 = 0.0;  // 0 -> default 8 / (N |E ln rho0|)
    double nu = 0.0;  // 0 -> midpoint of (kappa/N, 1)
    double gamma2 = 1.0;
    double k5 = 1.0;
    double tol = 1e-10;
    int64_t window = 500;
    int64_t batch = 20;

    std::vector<int64_t> sweep_budgets;
    std::vector<SweepCell> cells;

    EnvironmentSpec env_spec() const { return EnvironmentSpec(atoms, delta); }

    json to_json() const;
    static ExperimentConfig from_json(const json& j);
    std::string canonical() const;  // stable single-line serialization
    uint64_t hash() const { return fnv1a64(canonical()); }
};

// --- report serialization ---------------------------------------------------
json to_json(const SpecValidationReport& r);
json to_json(const GoodEnvReport& r);
json to_json(const ValleyDecomposition& d);
json to_json(const DeepValleyCensus& c);
json to_json(const GapBoundReport& r);
json to_json(const ResistanceSeries& r);
json to_json(const Estimate& e);
json to_json(const SpeedSummary& s);

}  // namespace spider
