#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "spider/analysis.hpp"
#include "spider/experiment.hpp"
#include "spider/landscape.hpp"
#include "spider/random_instances.hpp"

namespace {

using namespace spider;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::string env_path;
    std::string l_path;
    std::optional<uint64_t> seed;
    std::optional<size_t> replicas;
    std::optional<int64_t> budget;
    std::optional<std::string> mode;
    std::optional<bool> quenched;
    std::optional<unsigned> threads;
    bool allow_oracle_env = false;
};

void attach_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "experiment config (JSON)");
    cmd->add_option("--out", f.out_path, "output path or prefix");
    cmd->add_option("--env", f.env_path, "environment spec file");
    cmd->add_option("--L", f.l_path, "restriction set file");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--replicas", f.replicas, "replica count");
    cmd->add_option("--budget", f.budget, "jump budget per replica");
    cmd->add_option("--mode", f.mode, "clock mode: rate-exact | unit-jumps")
        ->check(CLI::IsMember({"rate-exact", "unit-jumps"}));
    cmd->add_flag("--quenched,!--annealed", f.quenched,
                  "fix one environment across replicas (default) or redraw per replica");
    cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)");
    cmd->add_flag("--allow-oracle-env", f.allow_oracle_env,
                  "accept environments that fail the drift/nestling conditions");
}

ExperimentConfig effective_config(const CommonFlags& f) {
    ExperimentConfig cfg;
    bool have_base = false;
    if (!f.config_path.empty()) {
        cfg = ExperimentConfig::from_json(json::parse(read_file(f.config_path)));
        have_base = true;
    }
    if (!f.env_path.empty()) {
        auto spec = load_env_spec(f.env_path);
        cfg.atoms = spec.atoms();
        cfg.delta = spec.delta();
        have_base = true;
    }
    if (!f.l_path.empty()) cfg.l_configs = load_config_set(f.l_path);
    if (!have_base) throw ParseError("need --config or --env");
    if (cfg.l_configs.empty()) cfg.l_configs = {Config{0}};  // single walker default
    if (f.seed) cfg.seed = *f.seed;
    if (f.replicas) cfg.replicas = *f.replicas;
    if (f.budget) cfg.budget = *f.budget;
    if (f.mode) cfg.mode = *f.mode == "rate-exact" ? ClockMode::RateExact : ClockMode::UnitJumps;
    if (f.quenched) cfg.quenched = *f.quenched;
    if (f.threads) cfg.threads = *f.threads;
    if (f.allow_oracle_env) cfg.enforce_validation = false;
    return cfg;
}

void emit(const std::string& out_path, const json& j) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

int cmd_validate(const CommonFlags& f) {
    ExperimentConfig cfg = effective_config(f);
    json out;
    bool ok = true;
    try {
        auto spec = cfg.env_spec();
        auto rep = validate_spec(spec);
        out["environment"] = to_json(rep);
        if (rep.all_ok()) out["kappa"] = kappa_solve(spec, 1e-12);
        ok = ok && rep.all_ok();
    } catch (const std::exception& e) {
        out["environment"] = {{"error", e.what()}};
        ok = false;
    }
    try {
        LocalConfigSet L = LocalConfigSet::validate(cfg.l_configs);
        out["restriction_set"] = {{"size", L.size()},
                                  {"legs", L.legs()},
                                  {"diameter", L.diameter()},
                                  {"anchor_r1", L.config(L.anchor_r1())},
                                  {"anchor_r2", L.config(L.anchor_r2())}};
        if (out.contains("kappa"))
            out["kappa_over_N"] = out["kappa"].get<double>() / L.legs();
    } catch (const std::exception& e) {
        out["restriction_set"] = {{"error", e.what()}};
        ok = false;
    }
    out["ok"] = ok;
    emit(f.out_path, out);
    return ok ? kExitOk : kExitValidation;
}

int cmd_kappa(const CommonFlags& f) {
    ExperimentConfig cfg = effective_config(f);
    json out;
    double kappa = kappa_solve(cfg.env_spec(), cfg.tol > 0 ? cfg.tol : 1e-12);
    out["kappa"] = kappa;
    out["mean_log_rho"] = cfg.env_spec().mean_log_rho();
    if (!cfg.l_configs.empty())
        out["kappa_over_N"] = kappa / static_cast<double>(cfg.l_configs.front().size());
    emit(f.out_path, out);
    return kExitOk;
}

int cmd_simulate(const CommonFlags& f) {
    ExperimentConfig cfg = effective_config(f);
    require_valid(cfg);
    ReplicaBatch batch = run_replicas(cfg);
    json sum = summary_json(cfg, batch);
    if (!f.out_path.empty()) {
        write_file(f.out_path + ".csv", checkpoints_csv(cfg, batch));
        write_file(f.out_path + ".json", sum.dump(2) + "\n");
    } else {
        std::cout << sum.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const CommonFlags& f) {
    ExperimentConfig cfg = effective_config(f);
    if (cfg.sweep_budgets.empty())
        cfg.sweep_budgets = {cfg.budget / 100, cfg.budget / 10, cfg.budget};

    struct Row {
        double kappa_over_n = 0.0;
        std::string text;
    };
    std::vector<Row> rows;
    for (const auto& cell : cfg.cells) {
        Row row;
        std::string label = cell.label;
        try {
            ExperimentConfig c = cfg;
            c.atoms = cell.atoms;
            c.delta = cell.delta;
            c.l_configs = cell.l_configs;
            if (cell.seed) c.seed = cell.seed;
            c.budget = cfg.sweep_budgets.back();
            c.checkpoints.assign(cfg.sweep_budgets.begin(), cfg.sweep_budgets.end() - 1);
            require_valid(c);
            double kappa = kappa_solve(c.env_spec(), 1e-12);
            size_t legs = c.l_configs.front().size();
            row.kappa_over_n = kappa / static_cast<double>(legs);

            ReplicaBatch batch = run_replicas(c);
            BootstrapOptions bopt;
            bopt.seed = mix64(c.seed ^ 0x626f6f74);
            SpeedSummary sum = speed_estimators(batch.runs, bopt);
            ExponentFit fit = displacement_exponent_fit(batch.runs, c.seed);
            auto num = [&](double v) { return g17(v); };
            row.text = label + "," + num(kappa) + "," + std::to_string(legs) + "," +
                       num(row.kappa_over_n) + "," + num(sum.v_time.value) + "," +
                       num(sum.v_time.lo) + "," + num(sum.v_time.hi) + "," +
                       (sum.v_regen ? num(sum.v_regen->value) : "") + "," +
                       (sum.v_regen ? num(sum.v_regen->lo) : "") + "," +
                       (sum.v_regen ? num(sum.v_regen->hi) : "") + "," +
                       num(sum.censored_fraction) + "," + std::to_string(sum.replicas) + "," +
                       (fit.ok ? num(fit.slope) : "") + "," + (fit.ok ? num(fit.lo) : "") +
                       "," + (fit.ok ? num(fit.hi) : "") + ",ok";
        } catch (const std::exception& e) {
            std::string msg = e.what();
            for (auto& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            row.text = label + ",,,,,,,,,,,,,,," + ("error: " + msg);
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.kappa_over_n < b.kappa_over_n; });

    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(cfg.hash()));
    std::string csv;
    csv += "# config_hash ";
    csv += hash;
    csv += "\n# config ";
    csv += cfg.canonical();
    csv += "\nlabel,kappa,N,kappa_over_N,v_time,v_time_lo,v_time_hi,v_regen,v_regen_lo,"
           "v_regen_hi,censored_fraction,replicas,exponent,exponent_lo,exponent_hi,status\n";
    for (const auto& r : rows) csv += r.text + "\n";
    if (!f.out_path.empty())
        write_file(f.out_path, csv);
    else
        std::cout << csv;
    return kExitOk;
}

int cmd_landscape(const CommonFlags& f, size_t sigma_replicas) {
    ExperimentConfig cfg = effective_config(f);
    auto spec = cfg.env_spec();
    LocalConfigSet L = LocalConfigSet::validate(cfg.l_configs);
    int legs = L.legs();

    json out;
    double t = cfg.t;
    double lt = std::log(t);
    double k7 = cfg.k7;
    double drift = spec.mean_log_rho();
    if (k7 <= 0.0) {
        if (drift >= 0.0)
            throw std::invalid_argument("K7 default needs E[ln rho] < 0; pass params.k7");
        k7 = 8.0 / (legs * std::abs(drift));
    }

    Environment env(spec, env_seed_for(cfg.seed, true, 0));
    int64_t xl = static_cast<int64_t>(std::floor(-k7 * lt));
    int64_t xr = static_cast<int64_t>(std::ceil(k7 * lt));
    int64_t lookahead = 4 * (xr - xl > 0 ? xr - xl : 1);
    int64_t w = cfg.window;
    auto profile = potential(env, std::min<int64_t>(xl, 0),
                             std::max<int64_t>({w, xr + lookahead, 1}));

    out["t"] = t;
    out["k7"] = k7;
    out["t_good"] = to_json(is_t_good(profile, t, cfg.eps, k7, legs));

    double kappa = 0.0;
    bool have_kappa = false;
    try {
        kappa = kappa_solve(spec, 1e-12);
        have_kappa = true;
        out["kappa"] = kappa;
    } catch (const std::exception& e) {
        out["kappa_error"] = e.what();
    }

    if (have_kappa) {
        double dthr = 3.0 / std::min(1.0, kappa) * lt;
        int64_t margin = default_suffix_margin(dthr, spec.mean_abs_log_rho());
        if (margin >= w) margin = w / 4;
        try {
            ValleyDecomposition dec = valleys(profile, t, kappa, w, margin);
            out["valleys"] = to_json(dec);
            double nu0 = kappa / legs;
            double nu = cfg.nu > 0.0 ? cfg.nu : 0.5 * (nu0 + 1.0);
            if (nu0 < nu && nu < 1.0) {
                try {
                    DeepValleyCensus cen =
                        deep_valley_census(dec, t, census_eps(t), kappa, nu, legs);
                    out["census"] = to_json(cen);
                } catch (const WindowTooSmallError& e) {
                    out["census_error"] = e.what();
                }
            }
            double s0 = t / (4.0 * cfg.gamma2 * std::pow(lt, 4));
            out["s0"] = s0;
            // slow-regime experiment: crossing times of the deep valleys
            if (sigma_replicas > 0 && out.contains("census")) {
                json sig = json::array();
                size_t shown = 0;
                for (size_t idx : out["census"]["deep_indices"].get<std::vector<size_t>>()) {
                    if (shown++ >= 10) break;
                    int64_t from = dec.boundaries[idx] + 1;
                    int64_t to = dec.boundaries[idx + 1] + 1;
                    size_t crossed = 0;
                    for (size_t r = 0; r < sigma_replicas; ++r) {
                        Xoshiro256pp rng(mix64(cfg.seed ^ 0x7369676d), r * 1000 + idx);
                        auto hit = hitting_time(make_state(L, from, cfg.x0_shape), env, L, to,
                                                cfg.budget, cfg.mode, rng);
                        if (hit.status == StopStatus::Reached && hit.time < s0) ++crossed;
                    }
                    sig.push_back({{"valley", idx},
                                   {"from", from},
                                   {"to", to},
                                   {"p_sigma_below_s0",
                                    static_cast<double>(crossed) /
                                        static_cast<double>(sigma_replicas)}});
                }
                out["sigma"] = sig;
            }
        } catch (const WindowTooSmallError& e) {
            out["valleys_error"] = e.what();
        }
    }
    emit(f.out_path, out);
    return kExitOk;
}

int cmd_gapcheck(const CommonFlags& f) {
    ExperimentConfig cfg = effective_config(f);
    json inst = json::array();
    size_t satisfied = 0;
    for (int64_t k = 0; k < cfg.batch; ++k) {
        uint64_t s = counter_hash(cfg.seed, static_cast<uint64_t>(k));
        EnvironmentSpec spec = random_env_spec(s);
        LocalConfigSet L = random_config_set(s, 3, 4);
        Environment env(spec, mix64(s));
        int64_t a = static_cast<int64_t>(counter_hash(s, 77) % 7) - 3;
        int64_t width = 1 + static_cast<int64_t>(counter_hash(s, 78) % 8);
        SpiderGraphWindow g(L, env, a, a + width - 1);
        if (g.vertex_count() < 2) continue;
        CanonicalPathSet paths(g);
        GapBoundReport rep = congestion_bound(
            paths, g, fnv1a64(spec.canonical_string() + std::to_string(env.seed())));
        rep.exact_gap = exact_gap(g);
        bool ok = *rep.exact_gap >= rep.gap_lower_bound;
        satisfied += ok ? 1 : 0;
        json ji = to_json(rep);
        ji["bound_holds"] = ok;
        inst.push_back(ji);
    }
    json out{{"instances", inst},
             {"satisfied", satisfied},
             {"total", inst.size()},
             {"all_hold", satisfied == inst.size()}};
    emit(f.out_path, out);
    return kExitOk;
}

int cmd_transience(const CommonFlags& f) {
    ExperimentConfig cfg = effective_config(f);
    auto spec = cfg.env_spec();
    LocalConfigSet L = LocalConfigSet::validate(cfg.l_configs);
    if (cfg.enforce_validation) {
        auto rep = validate_spec(spec);
        if (!rep.all_ok())
            throw std::invalid_argument("environment fails model conditions: " +
                                        to_json(rep).dump());
    }
    json list = json::array();
    size_t converged = 0;
    for (int64_t k = 0; k < cfg.batch; ++k) {
        Environment env(spec, counter_hash(mix64(cfg.seed ^ 0x7472616eULL),
                                           static_cast<uint64_t>(k)));
        ResistanceSeries rs = resistance_series(L, env, cfg.window);
        converged += rs.converged ? 1 : 0;
        json jr = to_json(rs);
        jr["env_seed"] = env.seed();
        list.push_back(jr);
    }
    json out{{"series", list},
             {"converged", converged},
             {"total", cfg.batch},
             {"all_converged", converged == static_cast<size_t>(cfg.batch)}};
    emit(f.out_path, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"N-leg spider walks in random environments on Z: simulation and analysis"};
    app.require_subcommand(1);

    CommonFlags fv, fk, fs, fw, fl, fg, ft;
    size_t sigma_replicas = 0;

    attach_common(app.add_subcommand("validate", "check environment and restriction set"), fv);
    attach_common(app.add_subcommand("kappa", "solve E[rho^kappa] = 1"), fk);
    attach_common(app.add_subcommand("simulate", "run replicas, estimate the speed"), fs);
    attach_common(app.add_subcommand("sweep", "run a grid of cells across kappa/N"), fw);
    auto* lc = app.add_subcommand("landscape", "potential landscape: t-good + valleys");
    attach_common(lc, fl);
    lc->add_option("--sigma-replicas", sigma_replicas,
                   "Monte Carlo replicas for valley crossing times (0 = skip)");
    attach_common(app.add_subcommand("gapcheck", "spectral gap bound on random instances"), fg);
    attach_common(app.add_subcommand("transience", "resistance series diagnostic"), ft);

    try {
        app.parse(argc, argv);
        if (app.got_subcommand("validate")) return cmd_validate(fv);
        if (app.got_subcommand("kappa")) return cmd_kappa(fk);
        if (app.got_subcommand("simulate")) return cmd_simulate(fs);
        if (app.got_subcommand("sweep")) return cmd_sweep(fw);
        if (app.got_subcommand("landscape")) return cmd_landscape(fl, sigma_replicas);
        if (app.got_subcommand("gapcheck")) return cmd_gapcheck(fg);
        if (app.got_subcommand("transience")) return cmd_transience(ft);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ProbabilityMassError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const EllipticityError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NotAnchoredError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DisconnectedError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NoForwardEdgeError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NoRootError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
