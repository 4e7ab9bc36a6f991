// dmine: streaming decision mining over process event logs.
//
//   dmine synth --scenario sd1 --seed 42 --out sd1.csv
//   dmine run --log sd1.csv --out results/
//
// `run` replays a delimited event log (or stdin) through the monitoring
// engine and writes rules.txt, drift_events.csv, accuracy_series.csv and
// decision_points.json into the output directory.

#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "dmine/csv_stream.hpp"
#include "dmine/engine.hpp"
#include "dmine/event.hpp"
#include "dmine/synthgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitConfigError = 2;
constexpr std::size_t kQueueCapacity = 100000;

std::string banner_line(const std::string& subcommand) {
    char buf[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return "# dmine " + subcommand + " " + buf + "\n";
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
    }
    out << content;
    return out.good();
}

struct RunOptions {
    std::string log_path;  // "-" or empty: stdin
    std::string out_dir = ".";
    std::string delimiter = ",";
    std::string adwin_input = "average";
    std::string dfg_json_path;
    std::string net_dot_path;
    bool no_banner = false;
    long long grace = 200;
    double epsilon = 0.001;
    double dep_threshold = 0.9;
    long long net_stride = 100;
    double delta = 0.002;
    long long min_mine = 30;
};

int cmd_run(const RunOptions& opt) {
    dmine::EngineConfig cfg;
    if (opt.grace < 1 || opt.net_stride < 1 || opt.min_mine < 2 ||
        opt.delimiter.size() != 1) {
        std::cerr << "error: invalid configuration\n";
        return kExitConfigError;
    }
    cfg.grace = static_cast<std::uint64_t>(opt.grace);
    cfg.epsilon = opt.epsilon;
    cfg.dep_threshold = opt.dep_threshold;
    cfg.net_stride = static_cast<std::uint64_t>(opt.net_stride);
    cfg.delta_accuracy = cfg.delta_frequency = cfg.delta_data = opt.delta;
    cfg.min_mine_instances = static_cast<std::size_t>(opt.min_mine);
    if (opt.adwin_input == "average") {
        cfg.adwin_input = dmine::AdwinInputMode::average;
    } else if (opt.adwin_input == "raw") {
        cfg.adwin_input = dmine::AdwinInputMode::raw;
    } else {
        std::cerr << "error: --adwin-input must be 'average' or 'raw'\n";
        return kExitConfigError;
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    std::ifstream file;
    std::istream* in = &std::cin;
    if (!opt.log_path.empty() && opt.log_path != "-") {
        file.open(opt.log_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open log " << opt.log_path << "\n";
            return kExitInputError;
        }
        in = &file;
    }

    std::unique_ptr<dmine::EventReader> reader;
    try {
        reader = std::make_unique<dmine::EventReader>(*in, opt.delimiter[0]);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory " << opt.out_dir
                  << "\n";
        return kExitInputError;
    }

    dmine::MonitorEngine engine(cfg);
    dmine::EventQueue queue(kQueueCapacity);
    std::atomic<bool> overflow{false};

    std::thread producer([&reader, &queue, &overflow] {
        while (auto event = reader->next()) {
            if (!queue.push_wait(std::move(*event), std::chrono::seconds(60))) {
                overflow.store(true);
                break;
            }
        }
        queue.close();
    });

    while (auto event = queue.pop()) {
        engine.process_event(*event);
    }
    producer.join();

    if (overflow.load()) {
        std::cerr << "error: event queue overflow (capacity " << kQueueCapacity
                  << "); no events were dropped, aborting\n";
        return kExitInputError;
    }

    const auto& counters = reader->counters();
    if (counters.malformed_rows > 0) {
        std::cerr << "warning: skipped " << counters.malformed_rows
                  << " malformed row(s)\n";
    }
    if (counters.attribute_warnings > 0) {
        std::cerr << "warning: " << counters.attribute_warnings
                  << " non-numeric attribute value(s) ignored\n";
    }
    if (engine.warnings().tracedict_evictions > 0) {
        std::cerr << "warning: evicted " << engine.warnings().tracedict_evictions
                  << " least-recently-updated open case(s)\n";
    }

    const dmine::RunReport report = engine.report();
    const std::string banner = opt.no_banner ? "" : banner_line("run");
    const std::filesystem::path out(opt.out_dir);
    bool ok = write_file(out / "rules.txt", banner + report.rules_text());
    ok = write_file(out / "drift_events.csv", banner + report.drift_events_csv()) && ok;
    ok = write_file(out / "accuracy_series.csv",
                    banner + report.accuracy_series_csv()) && ok;
    ok = write_file(out / "decision_points.json", report.decision_points_json()) && ok;
    if (!opt.dfg_json_path.empty()) {
        ok = write_file(opt.dfg_json_path, engine.dfg().snapshot_json()) && ok;
    }
    if (!opt.net_dot_path.empty()) {
        ok = write_file(opt.net_dot_path, engine.net().to_dot()) && ok;
    }
    if (!ok) return kExitInputError;

    std::cout << "processed " << engine.events_processed() << " events, "
              << engine.completed_cases() << " completed cases, "
              << report.points.size() << " decision point(s), "
              << report.notifications.size() << " drift notification(s)\n";
    return kExitOk;
}

struct SynthOptions {
    std::string scenario = "sd1";
    std::string out_path;
    long long seed = 42;
    long long instances = 5000;
    long long drift_at = 2500;
    double noise = 0.0;
    long long interleave = 0;
};

int cmd_synth(const SynthOptions& opt) {
    const auto kind = dmine::synth::Scenario::parse_kind(opt.scenario);
    if (!kind) {
        std::cerr << "error: unknown scenario '" << opt.scenario
                  << "' (sd1, sd2, sd3, sd4, baseline)\n";
        return kExitConfigError;
    }
    if (opt.instances < 1 || opt.drift_at < 0 ||
        opt.drift_at >= opt.instances || opt.noise < 0.0 || opt.noise > 1.0 ||
        opt.interleave < 0 || opt.out_path.empty()) {
        std::cerr << "error: invalid scenario parameters\n";
        return kExitConfigError;
    }
    dmine::synth::Scenario scenario;
    scenario.kind = *kind;
    scenario.seed = static_cast<std::uint64_t>(opt.seed);
    scenario.n_cases = static_cast<std::uint64_t>(opt.instances);
    scenario.drift_at = static_cast<std::uint64_t>(opt.drift_at);
    scenario.noise = opt.noise;
    scenario.interleave = static_cast<std::uint64_t>(opt.interleave);

    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << opt.out_path << "\n";
        return kExitInputError;
    }
    dmine::synth::generate(scenario, out);
    if (!out.good()) {
        std::cerr << "error: failed while writing " << opt.out_path << "\n";
        return kExitInputError;
    }

    std::filesystem::path truth(opt.out_path);
    truth.replace_extension(".truth.json");
    if (!write_file(truth, dmine::synth::truth_json(scenario))) {
        return kExitInputError;
    }
    std::cout << "wrote " << opt.out_path << " (" << scenario.n_cases
              << " cases) and " << truth.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming decision mining and decision drift monitoring"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "replay a log through the engine");
    run->add_option("--log", run_opt.log_path,
                    "event log path ('-' or omitted: stdin)");
    run->add_option("--out", run_opt.out_dir, "output directory for reports");
    run->add_option("--grace", run_opt.grace, "grace period in completed cases");
    run->add_option("--epsilon", run_opt.epsilon, "lossy-counting error");
    run->add_option("--dep-threshold", run_opt.dep_threshold,
                    "heuristics-net dependency threshold");
    run->add_option("--net-stride", run_opt.net_stride,
                    "events between net reminings");
    run->add_option("--delta", run_opt.delta, "adwin confidence delta");
    run->add_option("--adwin-input", run_opt.adwin_input,
                    "detector input: average or raw");
    run->add_option("--min-mine", run_opt.min_mine,
                    "minimum instances for a (re)mining");
    run->add_option("--delimiter", run_opt.delimiter, "field delimiter");
    run->add_flag("--no-banner", run_opt.no_banner,
                  "omit the timestamp banner from reports");
    run->add_option("--dfg-json", run_opt.dfg_json_path,
                    "also dump the final DFG snapshot as JSON");
    run->add_option("--net-dot", run_opt.net_dot_path,
                    "also dump the final heuristics net as DOT");

    SynthOptions synth_opt;
    CLI::App* synth = app.add_subcommand("synth", "generate a drift scenario log");
    synth->add_option("--scenario", synth_opt.scenario,
                      "sd1, sd2, sd3, sd4 or baseline");
    synth->add_option("--out", synth_opt.out_path, "output CSV path")->required();
    synth->add_option("--seed", synth_opt.seed, "random seed");
    synth->add_option("--instances", synth_opt.instances, "number of cases");
    synth->add_option("--drift-at", synth_opt.drift_at,
                      "case index where the drift starts");
    synth->add_option("--noise", synth_opt.noise, "label flip probability");
    synth->add_option("--interleave", synth_opt.interleave,
                      "round-robin this many open cases");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    if (run->parsed()) return cmd_run(run_opt);
    return cmd_synth(synth_opt);
}
