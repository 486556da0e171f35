#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "repeaterlab/analytic_bounds.hpp"
#include "repeaterlab/sweep.hpp"

namespace {

using namespace repeaterlab;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitBoundInapplicable = 4;

struct io_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CliState {
    std::string config_path;
    double alpha_db = 0.0, length_km = 0.0, c_fib = 0.0, tau_ns = 0.0;
    double mu = 0.0, q = 0.0, lambda_t_db = 0.0, lambda_mem = 0.0;
    double detector_eff = 0.0;
    int channels = 0, n = 0, m = 0, workers = 0;
    long long trials = 0;
    std::uint64_t seed = 0;
    double l_start = 0.0, l_stop = 0.0, l_step = 0.0;
    std::vector<double> l_list;
    std::string model, protocol, output, format;
    bool per_mode = false;
};

void add_common_options(CLI::App* cmd, CliState& s) {
    cmd->add_option("--config", s.config_path,
                    "JSON config file; flags override file values");
    cmd->add_option("--alpha-db", s.alpha_db, "fiber attenuation (dB/km)");
    cmd->add_option("--length-km", s.length_km, "end-to-end distance (km)");
    cmd->add_option("--c-fib", s.c_fib, "signal speed in fiber (km/s)");
    cmd->add_option("--tau-ns", s.tau_ns, "source repetition period (ns)");
    cmd->add_option("--channels", s.channels, "parallel channels M");
    cmd->add_option("--mu", s.mu, "linear-optical BSM efficiency");
    cmd->add_option("--q", s.q, "QM swap success probability");
    cmd->add_option("--lambda-t-db", s.lambda_t_db, "per-switch loss (dB)");
    cmd->add_option("--lambda-mem", s.lambda_mem,
                    "per-time-step memory survival probability");
    cmd->add_option("--detector-eff", s.detector_eff,
                    "detector efficiency eta_d (mu = eta_d^2/2)");
    cmd->add_option("--n", s.n, "repeater stations");
    cmd->add_option("--m", s.m, "time-multiplexing block length");
    cmd->add_option("--model", s.model,
                    "loss model: ideal | switch-loss | worst-decoherence");
}

// Effective config: file values first, set flags on top. `provided` collects
// the union of config keys and flags for required-parameter checks.
RunConfig merge_config(const CLI::App* cmd, const CliState& s,
                       std::set<std::string>& provided) {
    RunConfig rc;
    if (cmd->count("--config") > 0) {
        std::ifstream in(s.config_path);
        if (!in)
            throw config_error("cannot read config file: " + s.config_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        apply_config_json(rc, buf.str());
        const json j = json::parse(buf.str());
        for (const auto& [key, value] : j.items()) {
            (void)value;
            provided.insert(key);
        }
    }

    const auto set = [&](const char* flag) {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    if (set("--alpha-db")) { rc.ch.alpha_db = s.alpha_db; provided.insert("alpha_db"); }
    if (set("--length-km")) { rc.ch.length_km = s.length_km; provided.insert("length_km"); }
    if (set("--c-fib")) { rc.ch.c_fib = s.c_fib; provided.insert("c_fib"); }
    if (set("--tau-ns")) { rc.hw.tau_s = s.tau_ns * 1e-9; provided.insert("tau_ns"); }
    if (set("--channels")) { rc.hw.channels = s.channels; provided.insert("channels"); }
    if (set("--mu")) { rc.hw.mu = s.mu; provided.insert("mu"); }
    if (set("--lambda-t-db")) {
        rc.hw.lambda_t = db_to_transmissivity(s.lambda_t_db);
        provided.insert("lambda_t_db");
    }
    if (set("--lambda-mem")) { rc.hw.lambda_mem = s.lambda_mem; provided.insert("lambda_mem"); }
    if (set("--detector-eff")) {
        rc.hw.detector_eff = s.detector_eff;
        if (!set("--mu") && provided.count("mu") == 0)
            rc.hw.mu = s.detector_eff * s.detector_eff / 2.0;
        provided.insert("detector_eff");
        provided.insert("mu");
    }
    if (set("--q")) { rc.hw.q = s.q; provided.insert("q"); }
    if (set("--n")) { rc.cfg.n = s.n; provided.insert("n"); }
    if (set("--m")) { rc.cfg.m = s.m; provided.insert("m"); }
    if (set("--model")) { rc.model = parse_loss_model(s.model); provided.insert("model"); }
    if (set("--l-start")) { rc.sweep.l_start = s.l_start; provided.insert("l_start"); }
    if (set("--l-stop")) { rc.sweep.l_stop = s.l_stop; provided.insert("l_stop"); }
    if (set("--l-step")) { rc.sweep.l_step = s.l_step; provided.insert("l_step"); }
    if (set("--l-list")) { rc.sweep.l_list = s.l_list; provided.insert("l_list"); }
    if (set("--seed")) { rc.sim.seed = s.seed; provided.insert("seed"); }
    if (set("--trials")) { rc.sim.trials = s.trials; provided.insert("trials"); }
    if (set("--workers")) { rc.sim.workers = s.workers; provided.insert("workers"); }
    if (set("--protocol")) { rc.protocol = parse_protocol(s.protocol); provided.insert("protocol"); }
    if (set("--output")) { rc.output = s.output; provided.insert("output"); }
    if (set("--format")) { rc.format = s.format; provided.insert("format"); }
    if (set("--per-mode")) { rc.per_mode = true; provided.insert("per_mode"); }
    if (rc.format != "csv" && rc.format != "json")
        throw config_error("format must be 'csv' or 'json'");
    return rc;
}

void require_keys(const std::set<std::string>& provided,
                  std::initializer_list<const char*> keys) {
    std::string missing;
    for (const char* key : keys) {
        if (provided.count(key) == 0)
            missing += std::string(missing.empty() ? "" : ", ") + key;
    }
    if (!missing.empty())
        throw config_error("missing required parameter(s): " + missing);
}

void emit(const RunConfig& rc, const std::string& text) {
    if (rc.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(rc.output, std::ios::binary);
    if (!out)
        throw io_failure("cannot write output file: " + rc.output);
    out << text;
    if (!out.good())
        throw io_failure("write failed: " + rc.output);
}

int cmd_rate(const RunConfig& rc) {
    const DerivedProbabilities d = link_success_prob(rc.ch, rc.hw, rc.cfg);
    const double q_eff = effective_swap_prob(rc.hw, rc.cfg.m, rc.model);
    double rate = end_to_end_rate(rc.ch, rc.hw, rc.cfg, rc.model);
    if (rc.per_mode)
        rate /= rc.hw.channels / rc.hw.tau_s;
    const ResourceRequirements rr = resource_requirements(rc.ch, rc.hw, rc.cfg);

    std::ostringstream os;
    os << "rate" << (rc.per_mode ? "_ebits_per_mode" : "_ebits_per_s") << " = "
       << format_double(rate) << '\n'
       << "p_attempt = " << format_double(d.p_attempt) << '\n'
       << "p_link = " << format_double(d.p_link) << '\n'
       << "q_eff = " << format_double(q_eff) << '\n'
       << "t_latency_s = " << format_double(rr.t_latency_s) << '\n'
       << "t1_s = " << format_double(rr.t1_s) << '\n'
       << "t2_s = " << format_double(rr.t2_s) << '\n'
       << "j_slots = " << rr.j_slots << '\n'
       << "t_coherence_min_s = " << format_double(rr.t_coherence_min_s) << '\n'
       << "n_mem_min = " << rr.n_mem_min << '\n'
       << "occupancy_at_meas = " << rr.occupancy_at_meas << '\n';
    emit(rc, os.str());
    return 0;
}

int cmd_envelope(const RunConfig& rc) {
    const std::vector<SweepRecord> rows = run_sweep(rc);
    if (rc.format == "json") {
        emit(rc, sweep_json(rows) + "\n");
    } else {
        std::ostringstream os;
        write_sweep_csv(os, rows);
        emit(rc, os.str());
    }
    return 0;
}

int cmd_optimal_params(const RunConfig& rc) {
    const OptimalParams p = optimal_params(rc.ch, rc.hw, rc.ch.length_km);
    std::ostringstream os;
    os << "n_star = " << format_double(p.n_star) << '\n'
       << "m_star = " << format_double(p.m_star) << '\n'
       << "n_int = " << p.n_int << '\n'
       << "m_int = " << p.m_int << '\n'
       << "feasible = " << (p.feasible ? "true" : "false") << '\n';
    emit(rc, os.str());
    return 0;
}

int cmd_resources(const RunConfig& rc) {
    const ResourceRequirements rr = resource_requirements(rc.ch, rc.hw, rc.cfg);
    std::ostringstream os;
    os << "t_latency_s = " << format_double(rr.t_latency_s) << '\n'
       << "t1_s = " << format_double(rr.t1_s) << '\n'
       << "t2_s = " << format_double(rr.t2_s) << '\n'
       << "j_slots = " << rr.j_slots << '\n'
       << "t_coherence_min_s = " << format_double(rr.t_coherence_min_s) << '\n'
       << "n_mem_min = " << rr.n_mem_min << '\n'
       << "occupancy_at_meas = " << rr.occupancy_at_meas << '\n';
    emit(rc, os.str());
    return 0;
}

int cmd_bounds(const RunConfig& rc) {
    const double L = rc.ch.length_km;
    const double al = rc.ch.alpha_natural() * L;
    json report;
    report["length_km"] = L;
    report["ub"] = subexp_upper_bound(rc.ch, rc.hw, L);
    report["lb"] = subexp_lower_bound(rc.ch, rc.hw, L);
    report["plob"] = plob_rate(rc.ch, rc.hw);
    try {
        const LossyBound lossy = lossy_lower_bound(rc.ch, rc.hw, L);
        report["lossy_lb"] = lossy.rate;
        report["c_exp"] = lossy.constants.c_exp;
        report["c_sub"] = lossy.constants.c_sub;
        report["c0"] = lossy.constants.c0;
        report["prefactor"] = lossy.constants.prefactor;
        report["regime"] =
            lossy_regime(lossy.constants, al) == LossyRegime::exponential_dominant
                ? "exponential"
                : "subexponential";
    } catch (const bound_inapplicable_error& e) {
        report["lossy_lb_error"] = e.what();
    }
    try {
        const DecoherenceBoundSolution sol =
            decoherence_lower_bound(rc.ch, rc.hw, L);
        report["decoh_lb"] = sol.rate_lb;
        report["v0"] = sol.v0;
        report["v0_residual"] = sol.residual;
    } catch (const std::runtime_error& e) {
        report["decoh_lb_error"] = e.what();
    }
    try {
        const OptimalParams p = optimal_params(rc.ch, rc.hw, L);
        report["n_star"] = p.n_star;
        report["m_star"] = p.m_star;
        report["feasible"] = p.feasible;
    } catch (const bound_inapplicable_error& e) {
        report["optimal_params_error"] = e.what();
    }
    emit(rc, report.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const RunConfig& rc, bool protocol_given) {
    json report;
    report["seed"] = rc.sim.seed;
    report["trials"] = rc.sim.trials;
    report["model"] = loss_model_name(rc.model);
    report["length_km"] = rc.ch.length_km;
    report["n"] = rc.cfg.n;
    report["m"] = rc.cfg.m;
    report["channels"] = rc.hw.channels;

    double analytic = 0.0;
    RateEstimate mc;
    if (protocol_given) {
        const ProtocolRateResult res = rate_with_protocol_decoherence(
            rc.ch, rc.hw, rc.cfg, rc.protocol, rc.sim);
        analytic = res.analytic_rate;
        mc = res.mc;
        report["protocol"] = protocol_name(rc.protocol);
        const WaitTimeStats st =
            simulate_wait_times(rc.ch, rc.hw, rc.cfg, rc.protocol, rc.sim);
        report["mean_Y"] = st.mean_y;
        report["mean_x_left"] = st.mean_x_left;
        report["mean_x_right"] = st.mean_x_right;
        report["delta1_analytic"] = st.delta1_analytic;
        report["mean_x_analytic"] = st.mean_x_analytic;
        report["s_mean"] = st.s_mean;
        report["wait_time_samples"] = st.samples;
    } else {
        analytic = end_to_end_rate(rc.ch, rc.hw, rc.cfg, rc.model);
        mc = simulate_rate(rc.ch, rc.hw, rc.cfg, rc.model, rc.sim);
    }
    report["estimate"] = mc.rate;
    report["stderr"] = mc.std_error;
    report["delivered"] = mc.delivered;
    report["delivered_fraction"] = mc.delivered_fraction;
    report["analytic"] = analytic;
    const double diff = mc.rate - analytic;
    report["z_score"] = mc.std_error > 0.0 ? diff / mc.std_error
                                           : (diff == 0.0 ? 0.0 : diff);
    if (mc.unreliable_errors)
        report["warning"] = "fewer than 100 trials; error bars unreliable";
    emit(rc, report.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement-distribution rates of time-multiplexed "
                 "quantum repeater chains"};
    app.require_subcommand(1);
    CliState s;

    CLI::App* rate = app.add_subcommand("rate", "single-point rate evaluation");
    CLI::App* envelope =
        app.add_subcommand("envelope", "rate-vs-distance sweep (CSV/JSON)");
    CLI::App* optimal =
        app.add_subcommand("optimal-params", "continuous optimal n*, m*");
    CLI::App* resources =
        app.add_subcommand("resources", "latency, coherence and buffer needs");
    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo rate and wait times");
    CLI::App* bounds =
        app.add_subcommand("bounds", "analytic bounds and constants at L");

    for (CLI::App* cmd : {rate, envelope, optimal, resources, simulate, bounds}) {
        add_common_options(cmd, s);
        cmd->add_option("--output", s.output, "output path (default stdout)");
        cmd->add_flag("--per-mode", s.per_mode,
                      "report ebits/mode instead of ebits/s");
    }
    envelope->add_option("--l-start", s.l_start, "sweep start (km)");
    envelope->add_option("--l-stop", s.l_stop, "sweep stop (km)");
    envelope->add_option("--l-step", s.l_step, "sweep step (km)");
    envelope->add_option("--l-list", s.l_list, "explicit list of L values");
    envelope->add_option("--format", s.format, "csv | json");
    simulate->add_option("--seed", s.seed, "RNG seed");
    simulate->add_option("--trials", s.trials, "Monte Carlo trials");
    simulate->add_option("--workers", s.workers, "parallel workers");
    simulate->add_option("--protocol", s.protocol,
                         "first-success | least-wait");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    CLI::App* cmd = app.get_subcommands().front();
    try {
        std::set<std::string> provided;
        const RunConfig rc = merge_config(cmd, s, provided);
        rc.ch.validate();
        rc.hw.validate();
        if (cmd == rate) {
            require_keys(provided, {"alpha_db", "length_km", "tau_ns",
                                    "channels", "mu", "q", "n", "m"});
            return cmd_rate(rc);
        }
        if (cmd == envelope) {
            require_keys(provided,
                         {"alpha_db", "tau_ns", "channels", "mu", "q"});
            return cmd_envelope(rc);
        }
        if (cmd == optimal) {
            require_keys(provided, {"alpha_db", "length_km", "tau_ns",
                                    "channels", "mu", "q"});
            return cmd_optimal_params(rc);
        }
        if (cmd == resources) {
            require_keys(provided, {"length_km", "tau_ns", "n", "m"});
            return cmd_resources(rc);
        }
        if (cmd == bounds) {
            require_keys(provided, {"alpha_db", "length_km", "tau_ns",
                                    "channels", "mu", "q"});
            return cmd_bounds(rc);
        }
        if (cmd == simulate) {
            require_keys(provided, {"alpha_db", "length_km", "tau_ns",
                                    "channels", "mu", "q", "n", "m",
                                    "trials"});
            return cmd_simulate(rc, cmd->count("--protocol") > 0 ||
                                        provided.count("protocol") > 0);
        }
        throw config_error("unknown subcommand");
    } catch (const io_failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const bound_inapplicable_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBoundInapplicable;
    } catch (const root_not_found_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBoundInapplicable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
