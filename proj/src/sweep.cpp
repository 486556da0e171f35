#include "repeaterlab/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "repeaterlab/analytic_bounds.hpp"

namespace repeaterlab {

using nlohmann::json;

std::vector<double> SweepSpec::grid() const {
    if (!l_list.empty())
        return l_list;
    std::vector<double> out;
    if (l_step > 0.0 && l_stop >= l_start) {
        const long long steps =
            static_cast<long long>(std::floor((l_stop - l_start) / l_step + 1e-9));
        for (long long i = 0; i <= steps; ++i)
            out.push_back(l_start + static_cast<double>(i) * l_step);
    }
    if (out.empty())
        throw config_error("sweep range is empty");
    return out;
}

std::vector<SweepRecord> run_sweep(const RunConfig& rc) {
    rc.ch.validate();
    rc.hw.validate();
    const std::vector<double> grid = rc.sweep.grid();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double mode_div =
        rc.per_mode ? rc.hw.channels / rc.hw.tau_s : 1.0;

    std::vector<SweepRecord> rows;
    rows.reserve(grid.size());
    for (const double length : grid) {
        SweepRecord row;
        row.length_km = length;
        const EnvelopePoint pt =
            exact_envelope(rc.ch, rc.hw, length, rc.model);
        row.rate = pt.rate / mode_div;
        row.n_opt = pt.n_opt;
        row.m_opt = pt.m_opt;
        row.plob = pt.plob / mode_div;
        row.ub = subexp_upper_bound(rc.ch, rc.hw, length) / mode_div;
        row.lb = subexp_lower_bound(rc.ch, rc.hw, length) / mode_div;
        try {
            row.lossy_lb = lossy_lower_bound(rc.ch, rc.hw, length).rate / mode_div;
        } catch (const bound_inapplicable_error&) {
            row.lossy_lb = nan;
        }
        try {
            row.decoh_lb =
                decoherence_lower_bound(rc.ch, rc.hw, length).rate_lb / mode_div;
        } catch (const std::runtime_error&) {
            row.decoh_lb = nan;
        }
        try {
            row.feasible = optimal_params(rc.ch, rc.hw, length).feasible;
        } catch (const bound_inapplicable_error&) {
            row.feasible = false;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& rows) {
    os << kSweepCsvHeader << '\n';
    for (const SweepRecord& r : rows) {
        os << format_double(r.length_km) << ',' << format_double(r.rate) << ','
           << r.n_opt << ',' << r.m_opt << ',' << format_double(r.ub) << ','
           << format_double(r.lb) << ',' << format_double(r.lossy_lb) << ','
           << format_double(r.decoh_lb) << ',' << format_double(r.plob) << ','
           << (r.feasible ? 1 : 0) << '\n';
    }
}

std::vector<SweepRecord> parse_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kSweepCsvHeader)
        throw config_error("sweep CSV: missing or unexpected header");
    std::vector<SweepRecord> rows;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ','))
            fields.push_back(field);
        if (fields.size() != 10)
            throw config_error("sweep CSV: malformed row: " + line);
        SweepRecord r;
        r.length_km = std::stod(fields[0]);
        r.rate = std::stod(fields[1]);
        r.n_opt = std::stoi(fields[2]);
        r.m_opt = std::stoi(fields[3]);
        r.ub = std::stod(fields[4]);
        r.lb = std::stod(fields[5]);
        r.lossy_lb = std::stod(fields[6]);
        r.decoh_lb = std::stod(fields[7]);
        r.plob = std::stod(fields[8]);
        r.feasible = std::stoi(fields[9]) != 0;
        rows.push_back(r);
    }
    return rows;
}

std::string sweep_json(const std::vector<SweepRecord>& rows) {
    json arr = json::array();
    for (const SweepRecord& r : rows) {
        arr.push_back({{"length_km", r.length_km},
                       {"rate", r.rate},
                       {"n_opt", r.n_opt},
                       {"m_opt", r.m_opt},
                       {"ub", r.ub},
                       {"lb", r.lb},
                       {"lossy_lb", r.lossy_lb},
                       {"decoh_lb", r.decoh_lb},
                       {"plob", r.plob},
                       {"feasible", r.feasible}});
    }
    return arr.dump(2);
}

LossModel parse_loss_model(const std::string& name) {
    if (name == "ideal")
        return LossModel::ideal;
    if (name == "switch-loss" || name == "switch_loss")
        return LossModel::switch_loss;
    if (name == "worst-decoherence" || name == "switch_plus_worst_decoherence")
        return LossModel::switch_plus_worst_decoherence;
    throw config_error("unknown loss model: " + name);
}

std::string loss_model_name(LossModel model) {
    switch (model) {
    case LossModel::ideal:
        return "ideal";
    case LossModel::switch_loss:
        return "switch-loss";
    case LossModel::switch_plus_worst_decoherence:
        return "worst-decoherence";
    }
    return "unknown";
}

Protocol parse_protocol(const std::string& name) {
    if (name == "first-success" || name == "first_success")
        return Protocol::first_success;
    if (name == "least-wait" || name == "least_wait_end_of_block")
        return Protocol::least_wait_end_of_block;
    throw config_error("unknown protocol: " + name);
}

std::string protocol_name(Protocol protocol) {
    return protocol == Protocol::first_success ? "first-success" : "least-wait";
}

namespace {

double as_number(const json& v, const std::string& key) {
    if (!v.is_number())
        throw config_error("config key '" + key + "' must be a number");
    return v.get<double>();
}

long long as_integer(const json& v, const std::string& key) {
    if (!v.is_number_integer())
        throw config_error("config key '" + key + "' must be an integer");
    return v.get<long long>();
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string())
        throw config_error("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

} // namespace

void apply_config_json(RunConfig& rc, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object())
        throw config_error("config must be a JSON object");

    for (const auto& [key, value] : j.items()) {
        if (key == "alpha_db")
            rc.ch.alpha_db = as_number(value, key);
        else if (key == "length_km")
            rc.ch.length_km = as_number(value, key);
        else if (key == "c_fib")
            rc.ch.c_fib = as_number(value, key);
        else if (key == "tau_ns")
            rc.hw.tau_s = as_number(value, key) * 1e-9;
        else if (key == "channels")
            rc.hw.channels = static_cast<int>(as_integer(value, key));
        else if (key == "mu")
            rc.hw.mu = as_number(value, key);
        else if (key == "q")
            rc.hw.q = as_number(value, key);
        else if (key == "lambda_t_db")
            rc.hw.lambda_t = db_to_transmissivity(as_number(value, key));
        else if (key == "lambda_mem")
            rc.hw.lambda_mem = as_number(value, key);
        else if (key == "detector_eff")
            rc.hw.detector_eff = as_number(value, key);
        else if (key == "model")
            rc.model = parse_loss_model(as_string(value, key));
        else if (key == "n")
            rc.cfg.n = static_cast<int>(as_integer(value, key));
        else if (key == "m")
            rc.cfg.m = static_cast<int>(as_integer(value, key));
        else if (key == "l_start")
            rc.sweep.l_start = as_number(value, key);
        else if (key == "l_stop")
            rc.sweep.l_stop = as_number(value, key);
        else if (key == "l_step")
            rc.sweep.l_step = as_number(value, key);
        else if (key == "l_list") {
            if (!value.is_array())
                throw config_error("config key 'l_list' must be an array");
            rc.sweep.l_list.clear();
            for (const auto& item : value)
                rc.sweep.l_list.push_back(as_number(item, key));
        } else if (key == "seed")
            rc.sim.seed = static_cast<std::uint64_t>(as_integer(value, key));
        else if (key == "trials")
            rc.sim.trials = as_integer(value, key);
        else if (key == "workers")
            rc.sim.workers = static_cast<int>(as_integer(value, key));
        else if (key == "protocol")
            rc.protocol = parse_protocol(as_string(value, key));
        else if (key == "output")
            rc.output = as_string(value, key);
        else if (key == "format")
            rc.format = as_string(value, key);
        else if (key == "per_mode") {
            if (!value.is_boolean())
                throw config_error("config key 'per_mode' must be a boolean");
            rc.per_mode = value.get<bool>();
        } else
            throw config_error("unknown config key: " + key);
    }
    if (rc.format != "csv" && rc.format != "json")
        throw config_error("format must be 'csv' or 'json'");
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig rc;
    apply_config_json(rc, buf.str());
    return rc;
}

} // namespace repeaterlab
