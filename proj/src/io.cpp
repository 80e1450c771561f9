#include "spider/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spider {

namespace {

std::vector<std::string> nonempty_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = line.find_last_not_of(" \t\r");
        std::string trimmed = line.substr(a, b - a + 1);
        if (!trimmed.empty() && trimmed[0] != '#') out.push_back(trimmed);
    }
    return out;
}

}  // namespace

EnvironmentSpec parse_env_spec_text(const std::string& text) {
    auto lines = nonempty_lines(text);
    if (lines.empty()) throw ParseError("empty environment spec");
    std::istringstream head(lines[0]);
    std::string kw;
    double delta = 0.0;
    head >> kw >> delta;
    if (kw != "delta" || head.fail())
        throw ParseError("environment spec must start with 'delta <value>'");
    std::vector<Atom> atoms;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        Atom a{};
        row >> a.prob >> a.value;
        if (row.fail()) throw ParseError("bad atom line: " + lines[i]);
        atoms.push_back(a);
    }
    return EnvironmentSpec(atoms, delta);
}

EnvironmentSpec load_env_spec(const std::string& path) {
    return parse_env_spec_text(read_file(path));
}

std::string env_spec_to_text(const EnvironmentSpec& spec) { return spec.canonical_string(); }

std::vector<Config> parse_config_set_text(const std::string& text) {
    auto lines = nonempty_lines(text);
    if (lines.empty()) throw ParseError("empty restriction set");
    std::istringstream head(lines[0]);
    std::string kw;
    int n = 0;
    head >> kw >> n;
    if (kw != "N" || head.fail() || n < 1)
        throw ParseError("restriction set must start with 'N <legs>'");
    std::vector<Config> configs;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        Config c;
        int v;
        while (row >> v) c.push_back(v);
        if (static_cast<int>(c.size()) != n)
            throw ParseError("configuration has wrong number of legs: " + lines[i]);
        configs.push_back(c);
    }
    return configs;
}

std::vector<Config> load_config_set(const std::string& path) {
    return parse_config_set_text(read_file(path));
}

std::string config_set_to_text(const std::vector<Config>& configs) {
    std::string s;
    if (!configs.empty()) s = "N " + std::to_string(configs.front().size()) + "\n";
    for (const auto& c : configs) {
        for (size_t k = 0; k < c.size(); ++k) {
            if (k) s += ' ';
            s += std::to_string(c[k]);
        }
        s += '\n';
    }
    return s;
}

std::string graph_edge_dump(const SpiderGraphWindow& g) {
    auto tuple_str = [&](int v) {
        SpiderState s = g.state_of(v);
        std::string out;
        for (size_t i = 0; i < s.positions.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(s.positions[i]);
        }
        return out;
    };
    std::string out;
    for (int u = 0; u < g.vertex_count(); ++u)
        for (const auto& e : g.out(u))
            out += tuple_str(u) + " " + tuple_str(e.to) + " " + g17(e.rate) + "\n";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << content;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

json atoms_to_json(const std::vector<Atom>& atoms) {
    json arr = json::array();
    for (const auto& a : atoms) arr.push_back({a.prob, a.value});
    return arr;
}

std::vector<Atom> atoms_from_json(const json& j) {
    std::vector<Atom> atoms;
    for (const auto& row : j) atoms.push_back(Atom{row.at(0), row.at(1)});
    return atoms;
}

json env_block(const std::vector<Atom>& atoms, double delta) {
    return json{{"delta", delta}, {"atoms", atoms_to_json(atoms)}};
}

void read_env_block(const json& j, std::vector<Atom>& atoms, double& delta) {
    if (j.is_string()) {
        auto spec = load_env_spec(j.get<std::string>());
        atoms = spec.atoms();
        delta = spec.delta();
    } else {
        delta = j.at("delta");
        atoms = atoms_from_json(j.at("atoms"));
    }
}

void read_l_block(const json& j, std::vector<Config>& configs) {
    if (j.is_string()) {
        configs = load_config_set(j.get<std::string>());
    } else {
        configs.clear();
        for (const auto& row : j) configs.push_back(row.get<Config>());
    }
}

}  // namespace

json ExperimentConfig::to_json() const {
    json j;
    j["env"] = env_block(atoms, delta);
    j["L"] = l_configs;
    j["seed"] = seed;
    j["replicas"] = replicas;
    j["budget"] = budget;
    j["checkpoints"] = checkpoints;
    j["mode"] = mode == ClockMode::RateExact ? "rate-exact" : "unit-jumps";
    j["quenched"] = quenched;
    j["enforce_validation"] = enforce_validation;
    j["threads"] = threads;
    j["x0_shape"] = x0_shape;
    j["params"] = {{"t", t},   {"eps", eps},       {"k7", k7},   {"nu", nu},
                   {"gamma2", gamma2}, {"k5", k5}, {"tol", tol}, {"window", window},
                   {"batch", batch}};
    if (!cells.empty() || !sweep_budgets.empty()) {
        json cs = json::array();
        for (const auto& c : cells)
            cs.push_back({{"label", c.label},
                          {"env", env_block(c.atoms, c.delta)},
                          {"L", c.l_configs},
                          {"seed", c.seed}});
        j["sweep"] = {{"budgets", sweep_budgets}, {"cells", cs}};
    }
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    read_env_block(j.at("env"), c.atoms, c.delta);
    read_l_block(j.at("L"), c.l_configs);
    c.seed = j.value("seed", c.seed);
    c.replicas = j.value("replicas", c.replicas);
    c.budget = j.value("budget", c.budget);
    c.checkpoints = j.value("checkpoints", c.checkpoints);
    std::string m = j.value("mode", std::string("rate-exact"));
    if (m != "rate-exact" && m != "unit-jumps") throw ParseError("unknown clock mode " + m);
    c.mode = m == "rate-exact" ? ClockMode::RateExact : ClockMode::UnitJumps;
    c.quenched = j.value("quenched", c.quenched);
    c.enforce_validation = j.value("enforce_validation", c.enforce_validation);
    c.threads = j.value("threads", c.threads);
    c.x0_shape = j.value("x0_shape", c.x0_shape);
    if (j.contains("params")) {
        const json& p = j["params"];
        c.t = p.value("t", c.t);
        c.eps = p.value("eps", c.eps);
        c.k7 = p.value("k7", c.k7);
        c.nu = p.value("nu", c.nu);
        c.gamma2 = p.value("gamma2", c.gamma2);
        c.k5 = p.value("k5", c.k5);
        c.tol = p.value("tol", c.tol);
        c.window = p.value("window", c.window);
        c.batch = p.value("batch", c.batch);
    }
    if (j.contains("sweep")) {
        c.sweep_budgets = j["sweep"].value("budgets", std::vector<int64_t>{});
        for (const auto& cj : j["sweep"].value("cells", json::array())) {
            SweepCell cell;
            cell.label = cj.value("label", std::string());
            read_env_block(cj.at("env"), cell.atoms, cell.delta);
            read_l_block(cj.at("L"), cell.l_configs);
            cell.seed = cj.value("seed", uint64_t{0});
            c.cells.push_back(std::move(cell));
        }
    }
    return c;
}

std::string ExperimentConfig::canonical() const { return to_json().dump(); }

json to_json(const SpecValidationReport& r) {
    return json{{"drift_ok", r.drift_ok},
                {"elliptic_ok", r.elliptic_ok},
                {"nestling_ok", r.nestling_ok},
                {"mean_log_rho", r.mean_log_rho},
                {"all_ok", r.all_ok()}};
}

json to_json(const GoodEnvReport& r) {
    return json{{"t", r.t},
                {"eps", r.eps},
                {"k7", r.k7},
                {"legs", r.legs},
                {"x_left", r.x_left},
                {"x_right", r.x_right},
                {"lookahead_edge", r.lookahead_edge},
                {"clause_left", r.clause_left},
                {"clause_right", r.clause_right},
                {"clause_hills", r.clause_hills},
                {"worst_rise", r.worst_rise},
                {"good", r.good()}};
}

json to_json(const ValleyDecomposition& d) {
    return json{{"t", d.t},
                {"kappa", d.kappa},
                {"window", d.window},
                {"margin", d.margin},
                {"depth_threshold", d.depth_threshold},
                {"boundaries", d.boundaries},
                {"depths", d.depths},
                {"truncated", d.truncated}};
}

json to_json(const DeepValleyCensus& c) {
    return json{{"t", c.t},
                {"eps", c.eps},
                {"nu", c.nu},
                {"nu0", c.nu0},
                {"depth_cut", c.depth_cut},
                {"horizon", c.horizon},
                {"deep_indices", c.deep_indices},
                {"census", c.census},
                {"psi_threshold", c.psi_threshold},
                {"psi", c.psi},
                {"small_t", c.small_t}};
}

json to_json(const GapBoundReport& r) {
    json j{{"congestion", r.congestion},
           {"gap_lower_bound", r.gap_lower_bound},
           {"vertices", r.vertices},
           {"level_lo", r.level_lo},
           {"level_hi", r.level_hi},
           {"env_hash", r.env_hash}};
    if (r.exact_gap) j["exact_gap"] = *r.exact_gap;
    return j;
}

json to_json(const ResistanceSeries& r) {
    return json{{"levels", r.levels},
                {"log_total", r.log_total()},
                {"tail_fraction", r.tail_fraction},
                {"tail_threshold", r.tail_threshold},
                {"converged", r.converged}};
}

json to_json(const Estimate& e) { return json{{"value", e.value}, {"lo", e.lo}, {"hi", e.hi}}; }

json to_json(const SpeedSummary& s) {
    json j{{"v_time", to_json(s.v_time)},
           {"regen_increments", s.regen_increments},
           {"censored_fraction", s.censored_fraction},
           {"replicas", s.replicas}};
    if (s.v_regen) j["v_regen"] = to_json(*s.v_regen);
    return j;
}

}  // namespace spider
