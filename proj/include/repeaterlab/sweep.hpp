#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "repeaterlab/envelope.hpp"
#include "repeaterlab/stochastic.hpp"

namespace repeaterlab {

struct SweepSpec {
    double l_start = 0.0;
    double l_stop = 0.0;
    double l_step = 0.0;
    std::vector<double> l_list;  // explicit list wins over start/stop/step

    std::vector<double> grid() const;  // throws config_error when empty
};

struct RunConfig {
    ChannelParams ch;
    HardwareParams hw;
    RepeaterConfig cfg;
    LossModel model = LossModel::ideal;
    SweepSpec sweep;
    SimConfig sim;
    Protocol protocol = Protocol::first_success;
    std::string output;          // empty: stdout
    std::string format = "csv";  // csv | json
    bool per_mode = false;       // report ebits/mode instead of ebits/s
};

// One row per L. Column set is fixed and versioned; see kSweepCsvHeader.
struct SweepRecord {
    double length_km = 0.0;
    double rate = 0.0;
    int n_opt = 0;
    int m_opt = 0;
    double ub = 0.0;
    double lb = 0.0;
    double lossy_lb = 0.0;
    double decoh_lb = 0.0;  // NaN when the Theorem-4 solve is inapplicable
    double plob = 0.0;
    bool feasible = false;
};

inline constexpr const char* kSweepCsvHeader =
    "length_km,rate,n_opt,m_opt,ub,lb,lossy_lb,decoh_lb,plob,feasible";

std::vector<SweepRecord> run_sweep(const RunConfig& rc);

// Numbers are serialized with 17 significant digits so re-parsing recovers
// the exact doubles.
std::string format_double(double v);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& rows);
std::string sweep_json(const std::vector<SweepRecord>& rows);
std::vector<SweepRecord> parse_sweep_csv(std::istream& is);

LossModel parse_loss_model(const std::string& name);
std::string loss_model_name(LossModel model);
Protocol parse_protocol(const std::string& name);
std::string protocol_name(Protocol protocol);

// JSON config file with a flat key namespace mirroring the CLI flag names.
// Unknown keys and type mismatches throw config_error. Values already
// changed on the command line are meant to be applied on top by the CLI.
RunConfig load_config(const std::string& path);
void apply_config_json(RunConfig& rc, const std::string& json_text);

} // namespace repeaterlab
