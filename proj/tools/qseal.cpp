// Copyright 2026 The qseal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qseal: detector-node simulator, monitor, and offline estimate/ROC tools.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qseal/config.hpp"
#include "qseal/decision.hpp"
#include "qseal/error.hpp"
#include "qseal/estimator.hpp"
#include "qseal/node.hpp"

namespace {

using namespace qseal;

struct Overrides {
    std::optional<std::string> host;
    std::optional<int> port;
    std::optional<std::uint32_t> windows;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> alarm_log;
    std::optional<std::string> source_log;
};

void add_overrides(CLI::App* app, Overrides& o) {
    app->add_option("--host", o.host, "Override wire.host");
    app->add_option("--port", o.port, "Override wire.port")->check(CLI::Range(0, 65535));
    app->add_option("--windows", o.windows, "Override wire.windows");
    app->add_option("--seed", o.seed, "Override source.seed");
    app->add_option("--alarm-log", o.alarm_log, "Override output.alarm_log");
    app->add_option("--source-log", o.source_log, "Override output.source_log ('-' for stdout)");
}

node::RunConfig load(const std::string& path, const Overrides& o) {
    auto cfg = node::load_run_config(path);
    if (o.host) cfg.wire.host = *o.host;
    if (o.port) cfg.wire.port = static_cast<std::uint16_t>(*o.port);
    if (o.windows) cfg.wire.windows = *o.windows;
    if (o.seed) cfg.source.seed = *o.seed;
    if (o.alarm_log) cfg.output.alarm_log = *o.alarm_log;
    if (o.source_log) cfg.output.source_log = *o.source_log;
    cfg.validate();
    return cfg;
}

int cmd_simulate(const std::string& path, const Overrides& o) {
    const auto cfg = load(path, o);
    if (cfg.output.source_log == "-" || cfg.output.source_log.empty()) {
        return node::run_source(cfg, std::cout);
    }
    std::ofstream log(cfg.output.source_log, std::ios::app);
    if (!log) {
        throw IoError("cannot open source log " + cfg.output.source_log);
    }
    return node::run_source(cfg, log);
}

int cmd_monitor(const std::string& path, const Overrides& o) {
    node::Monitor monitor(load(path, o));
    std::cerr << "qseal: monitor listening on port " << monitor.port() << '\n';
    const auto summary = monitor.run();
    std::cout << summary.to_json().dump() << '\n';
    return node::kExitOk;
}

int cmd_estimate(const wire::KappaTotals& k) {
    const auto e = estimation::estimate_correlation(k);
    std::cout << std::setprecision(12) << "e_kappa " << e.e_kappa << "\nsigma_kappa " << e.sigma_kappa << "\nn "
              << e.n << '\n';
    return node::kExitOk;
}

int cmd_roc(const decision::OperatingModel& model, std::size_t points, const std::string& out_path) {
    model.validate();
    const auto curve = decision::roc_curve(model, points);
    std::ofstream out(out_path);
    if (!out) {
        throw IoError("cannot write " + out_path);
    }
    decision::write_roc_csv(out, curve);
    out.close();
    if (!out) {
        throw IoError("error writing " + out_path);
    }
    constexpr double kFar = 1e-9;
    const double eps = decision::threshold_for_far(model.e1, model.sigma, kFar);
    const auto stats = decision::detection_stats(model, eps);
    std::cout << std::setprecision(12) << "p_far " << kFar << "\nepsilon " << eps << "\np_d " << stats.p_d << '\n';
    return node::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement-based tamper monitor simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides sim_overrides;
    auto* simulate = app.add_subcommand("simulate", "Run the detector node and stream packets to a monitor");
    simulate->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    add_overrides(simulate, sim_overrides);

    Overrides mon_overrides;
    auto* monitor = app.add_subcommand("monitor", "Receive packets, estimate and decide per window");
    monitor->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    add_overrides(monitor, mon_overrides);

    wire::KappaTotals kappa;
    auto* estimate = app.add_subcommand("estimate", "Posterior mean and deviation of the correlation");
    const auto non_negative = CLI::Range(0.0, std::numeric_limits<double>::max());
    estimate->add_option("--ksd", kappa.k_sd, "Corrected single-double count")->check(non_negative);
    estimate->add_option("--kss", kappa.k_ss, "Corrected single-single count")->check(non_negative);
    estimate->add_option("--kds", kappa.k_ds, "Corrected double-single count")->check(non_negative);
    estimate->add_option("--kdd", kappa.k_dd, "Corrected double-double count")->check(non_negative);

    decision::OperatingModel model;
    std::size_t points = 201;
    std::string out_path;
    auto* roc = app.add_subcommand("roc", "Write the detection/false-alarm trade-off as CSV");
    roc->add_option("--e0", model.e0, "Mean estimate under tampering")->required();
    roc->add_option("--e1", model.e1, "Mean estimate under authentic operation")->required();
    roc->add_option("--sigma", model.sigma, "Estimate standard deviation")->required();
    roc->add_option("--out", out_path, "Output CSV path")->required();
    roc->add_option("--points", points, "Number of thresholds")->check(CLI::Range(2, 1000000));

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, sim_overrides);
        if (monitor->parsed()) return cmd_monitor(config_path, mon_overrides);
        if (estimate->parsed()) return cmd_estimate(kappa);
        if (roc->parsed()) return cmd_roc(model, points, out_path);
    } catch (const ValidationError& e) {
        std::cerr << "qseal: " << e.what() << '\n';
        return node::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "qseal: " << e.what() << '\n';
        return node::kExitTransport;
    }
    return node::kExitUsage;
}
