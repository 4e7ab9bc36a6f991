#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dmine/adwin.hpp"
#include "dmine/dfg.hpp"
#include "dmine/event.hpp"
#include "dmine/heuristics.hpp"
#include "dmine/rules.hpp"
#include "dmine/tree.hpp"

namespace dmine {

enum class AdwinInputMode { average, raw };

struct EngineConfig {
    std::uint64_t grace = 200;       // completed cases before initial mining
    double epsilon = 0.001;          // lossy-counting error
    double dep_threshold = 0.9;      // heuristics-net dependency threshold
    std::uint64_t net_stride = 100;  // events between net reminings
    double delta_accuracy = 0.002;
    double delta_frequency = 0.002;
    double delta_data = 0.002;
    // average feeds the cumulative accuracy/frequency averages into the
    // detectors, raw feeds the per-decision observations; data-value
    // detectors always receive raw values
    AdwinInputMode adwin_input = AdwinInputMode::average;
    std::size_t min_mine_instances = 30;
    std::size_t max_open_cases = 10000;
    std::size_t pending_buffer_cap = 200;
    int adwin_max_buckets = 5;
    // averages are fed to a detector only once they rest on this many
    // observations; a cumulative average over fewer samples is still noise
    std::uint64_t average_warmup = 30;
    TreeConfig tree;
    bool collect_series = true;  // keep the accuracy series in memory

    void validate() const;  // throws std::invalid_argument
};

struct DriftNotification {
    std::uint64_t seq = 0;
    std::string dp_id;
    std::string trigger;  // new-attribute | accuracy | frequency(c) |
                          // data(a) | structural-added |
                          // structural-class-change | structural-removed
    std::string old_rules;
    std::string new_rules;
    std::uint64_t adwin_window = 0;  // 0 when no detector was involved
};

struct RemineEntry {
    std::uint64_t seq = 0;
    std::string dp_id;
    std::string trigger;  // "initial" or a notification trigger
};

struct AccuracyPoint {
    std::uint64_t seq = 0;
    std::string dp_id;
    double running_accuracy = 0.0;
};

// Per decision point monitoring state (one DMS entry).
struct MonitorState {
    std::set<std::string> classes;
    std::optional<DecisionTree> model;
    RuleSet rules;
    std::uint64_t model_seq = 0;

    std::size_t ws = 0;                    // training window capacity
    std::deque<TrainingInstance> window;   // FIFO, newest at the back

    bool drift_flag = false;
    std::vector<std::string> pending_triggers;  // first entry is primary
    std::uint64_t adwin_window_at_detection = 0;
    std::size_t train_horizon = 0;  // detector remines train on this many
                                    // most recent instances; 0 = all

    // one follow-up remine is re-armed after new information (new class /
    // new attribute / fresh point) until the window has fully turned over
    bool refill_armed = false;
    std::size_t refill_remaining = 0;
    std::string refill_trigger;

    // since-last-remine track: drives the reported accuracy series
    double acc_sum = 0.0;
    std::uint64_t acc_n = 0;

    // cumulative track since the first model: drives the detector inputs in
    // average mode, so resets cannot re-create a noisy running-average head
    double cum_correct = 0.0;
    std::uint64_t cum_n = 0;
    std::map<std::string, std::uint64_t> class_counts;
    std::map<std::string, double> attr_sums;
    std::map<std::string, std::uint64_t> attr_ns;

    std::optional<AdwinDetector> adwin_acc;
    std::map<std::string, AdwinDetector> adwin_class;
    std::map<std::string, AdwinDetector> adwin_attr;
    std::set<std::string> known_attributes;

    std::vector<RemineEntry> remine_log;
    std::uint64_t last_scored_model_seq = 0;
    double lifetime_correct = 0.0;
    std::uint64_t lifetime_decisions = 0;
};

struct StateMetrics {
    std::size_t open_cases = 0;
    std::size_t window_instances = 0;  // across all points
    std::size_t dfg_entries = 0;
    std::size_t dfg_open_cases = 0;
    std::size_t adwin_buckets = 0;  // across all detectors
    std::size_t pending_instances = 0;
};

struct EngineWarnings {
    std::uint64_t tracedict_evictions = 0;   // LRU overflow evictions
    std::uint64_t unknown_case_lookups = 0;  // collect_features misses
};

struct PointReport {
    std::string id;
    std::set<std::string> classes;
    std::string rules_text;
    std::size_t trained_on = 0;
    std::uint64_t model_seq = 0;
    std::size_t ws = 0;
    std::vector<RemineEntry> remine_log;
};

struct RunReport {
    std::vector<PointReport> points;  // sorted by id
    std::vector<DriftNotification> notifications;
    std::vector<AccuracyPoint> accuracy_series;
    double overall_accuracy = 0.0;
    std::uint64_t monitored_decisions = 0;

    std::string rules_text() const;
    std::string drift_events_csv() const;
    std::string accuracy_series_csv() const;
    std::string decision_points_json() const;
};

// End-to-end runtime decision mining: keeps the DFG sketch, remines the
// heuristics net on a stride, registers decision points, collects training
// windows per point, fits CART models after the grace period and monitors
// every decision for drift, remining on detection.
class MonitorEngine {
public:
    explicit MonitorEngine(EngineConfig config);

    // Feeds one event through the full pipeline; returns the drift
    // notifications raised by this event (usually none).
    std::vector<DriftNotification> process_event(const Event& event);

    RunReport report() const;
    StateMetrics state_metrics() const;
    const EngineWarnings& warnings() const { return warnings_; }

    // merged attribute map of the case so far; empty map + warning count
    // when the case is unknown
    std::map<std::string, double> collect_features(const std::string& case_id);

    bool initial_mining_done() const { return initial_mining_done_; }
    std::uint64_t completed_cases() const { return completed_cases_; }
    std::uint64_t events_processed() const { return events_processed_; }
    std::uint64_t monitored_decisions() const { return total_decisions_; }
    double overall_accuracy() const;
    const DfgCounter& dfg() const { return dfg_; }
    const HeuristicsNet& net() const { return net_; }
    const std::map<std::string, MonitorState>& points() const { return points_; }
    const EngineConfig& config() const { return config_; }

private:
    struct CaseState {
        std::map<std::string, double> attributes;
        std::string prev_activity;
        std::uint64_t last_seq = 0;
    };

    void remine_net(std::uint64_t seq, std::vector<DriftNotification>& out);
    void register_point(const DecisionPoint& point, std::uint64_t seq,
                        std::vector<DriftNotification>& out);
    void append_instance(MonitorState& state, TrainingInstance instance);
    void do_initial_mining(std::uint64_t seq);
    void fit_point(MonitorState& state, const std::string& dp_id,
                   std::uint64_t seq, const std::string& trigger,
                   std::size_t use_last = 0);
    void rebuild_detectors(MonitorState& state);
    std::optional<DriftNotification> monitor_point(const std::string& dp_id,
                                                   MonitorState& state,
                                                   const TrainingInstance& inst,
                                                   std::uint64_t seq);
    DriftNotification remine(const std::string& dp_id, MonitorState& state,
                             std::uint64_t seq, bool arm_followup);
    void complete_case(const std::string& case_id);
    void evict_lru_case();

    EngineConfig config_;
    DfgCounter dfg_;
    HeuristicsNet net_;
    std::set<std::string> sinks_;
    std::map<std::string, CaseState> trace_dict_;
    std::map<std::string, MonitorState> points_;
    std::map<std::string, std::deque<TrainingInstance>> pending_;
    bool initial_mining_done_ = false;
    std::uint64_t completed_cases_ = 0;
    std::uint64_t events_processed_ = 0;
    std::uint64_t total_decisions_ = 0;
    double total_correct_ = 0.0;
    std::vector<AccuracyPoint> series_;
    std::vector<DriftNotification> notifications_;
    EngineWarnings warnings_;
};

}  // namespace dmine
