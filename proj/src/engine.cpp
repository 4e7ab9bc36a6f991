#include "dmine/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "dmine/util.hpp"

namespace dmine {

void EngineConfig::validate() const {
    if (grace < 1) throw std::invalid_argument("grace must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must be in (0,1)");
    if (!(dep_threshold > -1.0 && dep_threshold <= 1.0))
        throw std::invalid_argument("dep-threshold must be in (-1,1]");
    if (net_stride < 1) throw std::invalid_argument("net-stride must be >= 1");
    for (double d : {delta_accuracy, delta_frequency, delta_data}) {
        if (!(d > 0.0 && d < 1.0))
            throw std::invalid_argument("adwin delta must be in (0,1)");
    }
    if (min_mine_instances < 2)
        throw std::invalid_argument("min-mine must be >= 2");
    if (max_open_cases < 1)
        throw std::invalid_argument("max open cases must be >= 1");
    if (tree.max_depth < 1 || tree.min_leaf < 1)
        throw std::invalid_argument("invalid tree configuration");
}

MonitorEngine::MonitorEngine(EngineConfig config)
    : config_(std::move(config)), dfg_(config_.epsilon) {
    config_.validate();
}

std::vector<DriftNotification> MonitorEngine::process_event(const Event& event) {
    std::vector<DriftNotification> out;

    dfg_.observe(event);
    ++events_processed_;
    if (events_processed_ % config_.net_stride == 0) {
        remine_net(event.seq, out);
    }

    auto case_it = trace_dict_.find(event.case_id);
    if (case_it == trace_dict_.end()) {
        if (trace_dict_.size() >= config_.max_open_cases) evict_lru_case();
        case_it = trace_dict_.emplace(event.case_id, CaseState{}).first;
    }
    CaseState& cs = case_it->second;
    const std::string prev = cs.prev_activity;

    // a decision completes when the case's previous activity is a known
    // decision point and this event picks one of its classes
    MonitorState* captured_state = nullptr;
    TrainingInstance instance;
    if (!prev.empty()) {
        auto point_it = points_.find(prev);
        if (point_it != points_.end()) {
            if (point_it->second.classes.count(event.activity)) {
                instance.features = cs.attributes;
                instance.label = event.activity;
                instance.seq = event.seq;
                append_instance(point_it->second, instance);
                captured_state = &point_it->second;
            }
        } else {
            // pre-registration buffer: keeps stride-lag decisions so a
            // freshly discovered point does not start from nothing
            auto& buf = pending_[prev];
            buf.push_back(TrainingInstance{cs.attributes, event.activity, event.seq});
            while (buf.size() > config_.pending_buffer_cap) buf.pop_front();
        }
    }

    for (const auto& [name, value] : event.attributes) {
        cs.attributes[name] = value;  // latest write wins
    }
    cs.prev_activity = event.activity;
    cs.last_seq = event.seq;

    if (!initial_mining_done_ && completed_cases_ >= config_.grace) {
        do_initial_mining(event.seq);
    }

    if (captured_state != nullptr) {
        MonitorState& state = *captured_state;
        if (!state.model) {
            if (initial_mining_done_ &&
                state.window.size() >= config_.min_mine_instances) {
                fit_point(state, prev, event.seq, "initial");
            }
        } else if (state.model_seq < event.seq) {
            if (auto note = monitor_point(prev, state, instance, event.seq)) {
                out.push_back(*note);
            }
        }
    }

    if (sinks_.count(event.activity)) {
        complete_case(event.case_id);
    }

    for (const auto& note : out) notifications_.push_back(note);
    return out;
}

void MonitorEngine::remine_net(std::uint64_t seq,
                               std::vector<DriftNotification>& out) {
    net_ = mine_heuristics_net(dfg_.snapshot(), config_.dep_threshold);
    sinks_ = net_.sinks();

    std::vector<DecisionPoint> current;
    current.reserve(points_.size());
    for (const auto& [id, state] : points_) {
        current.push_back(DecisionPoint{id, state.classes});
    }
    const StructuralChange change = diff(current, discover_decision_points(net_));

    for (const auto& p : change.removed) {
        if (initial_mining_done_) {
            out.push_back(DriftNotification{seq, p.id, "structural-removed",
                                            points_.at(p.id).rules.text(), "", 0});
        }
        points_.erase(p.id);
    }
    for (const auto& p : change.added) {
        register_point(p, seq, out);
    }
    for (const auto& c : change.class_changed) {
        MonitorState& state = points_.at(c.id);
        state.classes = c.new_classes;
        if (initial_mining_done_) {
            if (!state.drift_flag) {
                state.drift_flag = true;
            }
            state.pending_triggers.push_back("structural-class-change");
            state.refill_armed = true;
            state.refill_remaining = state.ws;
            state.refill_trigger = "structural-class-change";
        }
    }

    // sweep cases already sitting on a sink (covers completions observed
    // before the sink was known)
    std::vector<std::string> done;
    for (const auto& [case_id, cs] : trace_dict_) {
        if (sinks_.count(cs.prev_activity)) done.push_back(case_id);
    }
    for (const auto& case_id : done) complete_case(case_id);
}

void MonitorEngine::register_point(const DecisionPoint& point, std::uint64_t seq,
                                   std::vector<DriftNotification>& out) {
    MonitorState state;
    state.classes = point.classes;
    state.ws = config_.grace;

    // seed only the stride-lag slice of the buffer; older entries predate
    // the structure that created this point and would poison the window
    auto pending_it = pending_.find(point.id);
    if (pending_it != pending_.end()) {
        const std::uint64_t horizon =
            seq >= config_.net_stride ? seq - config_.net_stride : 0;
        for (auto& inst : pending_it->second) {
            if (inst.seq >= horizon && point.classes.count(inst.label)) {
                state.window.push_back(std::move(inst));
            }
        }
        while (state.window.size() > state.ws) state.window.pop_front();
        pending_.erase(pending_it);
    }

    if (initial_mining_done_) {
        state.refill_armed = true;
        state.refill_remaining = state.ws;
        state.refill_trigger = "structural-added";
        out.push_back(
            DriftNotification{seq, point.id, "structural-added", "", "", 0});
    }
    points_.emplace(point.id, std::move(state));
}

void MonitorEngine::append_instance(MonitorState& state,
                                    TrainingInstance instance) {
    state.window.push_back(std::move(instance));
    while (state.window.size() > state.ws) state.window.pop_front();
    if (state.refill_armed && state.refill_remaining > 0) {
        --state.refill_remaining;
    }
}

void MonitorEngine::do_initial_mining(std::uint64_t seq) {
    for (auto& [id, state] : points_) {
        if (!state.model && state.window.size() >= config_.min_mine_instances) {
            fit_point(state, id, seq, "initial");
        }
    }
    initial_mining_done_ = true;
}

void MonitorEngine::fit_point(MonitorState& state, const std::string& dp_id,
                              std::uint64_t seq, const std::string& trigger,
                              std::size_t use_last) {
    auto first = state.window.begin();
    if (use_last > 0 && state.window.size() > use_last) {
        first += static_cast<std::ptrdiff_t>(state.window.size() - use_last);
    }
    std::vector<TrainingInstance> instances(first, state.window.end());
    state.model = DecisionTree::fit(instances, config_.tree);
    state.rules = RuleSet::extract(*state.model);
    state.model_seq = seq;
    for (const auto& inst : state.window) {
        for (const auto& [name, v] : inst.features) {
            (void)v;
            state.known_attributes.insert(name);
        }
    }
    state.acc_sum = 0.0;
    state.acc_n = 0;
    rebuild_detectors(state);
    state.remine_log.push_back(RemineEntry{seq, dp_id, trigger});
}

void MonitorEngine::rebuild_detectors(MonitorState& state) {
    state.adwin_acc.emplace(config_.delta_accuracy, config_.adwin_max_buckets);
    state.adwin_class.clear();
    for (const auto& cls : state.classes) {
        state.adwin_class.emplace(
            cls, AdwinDetector(config_.delta_frequency, config_.adwin_max_buckets));
    }
    state.adwin_attr.clear();
    for (const auto& attr : state.known_attributes) {
        state.adwin_attr.emplace(
            attr, AdwinDetector(config_.delta_data, config_.adwin_max_buckets));
    }
}

std::optional<DriftNotification> MonitorEngine::monitor_point(
    const std::string& dp_id, MonitorState& state, const TrainingInstance& inst,
    std::uint64_t seq) {
    const bool average = config_.adwin_input == AdwinInputMode::average;

    // 1. unseen data elements flag drift outright
    for (const auto& [name, v] : inst.features) {
        (void)v;
        if (!state.known_attributes.count(name)) {
            state.known_attributes.insert(name);
            state.drift_flag = true;
            state.pending_triggers.push_back("new-attribute");
            state.refill_armed = true;
            state.refill_remaining = state.ws;
            state.refill_trigger = "new-attribute";
        }
    }

    // 2. prequential score against the model fitted before this decision
    const Prediction pred = state.model->predict(inst.features);
    const bool correct = pred.decision_class == inst.label;
    state.last_scored_model_seq = state.model_seq;
    state.acc_sum += correct ? 1.0 : 0.0;
    ++state.acc_n;
    state.cum_correct += correct ? 1.0 : 0.0;
    ++state.cum_n;
    state.lifetime_correct += correct ? 1.0 : 0.0;
    ++state.lifetime_decisions;
    total_correct_ += correct ? 1.0 : 0.0;
    ++total_decisions_;

    // 3. overall statistics (cumulative across remines, per the monitoring
    //    call count)
    ++state.class_counts[inst.label];
    for (const auto& [name, value] : inst.features) {
        state.attr_sums[name] += value;
        ++state.attr_ns[name];
    }

    if (config_.collect_series) {
        series_.push_back(AccuracyPoint{
            seq, dp_id, state.acc_sum / static_cast<double>(state.acc_n)});
    }

    // 4. feed the detector families; the first firing detector fixes the
    //    new window size
    auto fire = [&state, this](const std::string& trigger,
                               std::uint64_t adwin_window) {
        if (!state.drift_flag) {
            state.adwin_window_at_detection = adwin_window;
            // the remine trains on the detector's post-cut window (the new
            // regime); capacity only ever grows so fast detections cannot
            // starve later models
            state.train_horizon = std::max<std::size_t>(
                static_cast<std::size_t>(adwin_window), config_.min_mine_instances);
            state.ws = std::max(state.ws, state.train_horizon);
            state.drift_flag = true;
        }
        state.pending_triggers.push_back(trigger);
    };

    const bool warm = state.cum_n >= config_.average_warmup;
    if (!average || warm) {
        const double acc_obs =
            average ? state.cum_correct / static_cast<double>(state.cum_n)
                    : (correct ? 1.0 : 0.0);
        if (state.adwin_acc->add(acc_obs)) {
            fire("accuracy", state.adwin_acc->window_size());
        }
    }
    if (!average || warm) {
        for (const auto& cls : state.classes) {
            auto det = state.adwin_class.find(cls);
            if (det == state.adwin_class.end()) {
                det = state.adwin_class
                          .emplace(cls, AdwinDetector(config_.delta_frequency,
                                                      config_.adwin_max_buckets))
                          .first;
            }
            const double freq =
                average
                    ? static_cast<double>(state.class_counts.count(cls)
                                              ? state.class_counts.at(cls)
                                              : 0) /
                          static_cast<double>(state.cum_n)
                    : (inst.label == cls ? 1.0 : 0.0);
            if (det->second.add(freq)) {
                fire("frequency(" + cls + ")", det->second.window_size());
            }
        }
    }
    // data detectors always see raw values: a cumulative mean is a random
    // walk with shrinking steps and trips ADWIN no matter the scale
    for (const auto& [name, n] : state.attr_ns) {
        (void)n;
        auto it = inst.features.find(name);
        if (it == inst.features.end()) continue;
        const double obs = it->second;
        auto det = state.adwin_attr.find(name);
        if (det == state.adwin_attr.end()) {
            det = state.adwin_attr
                      .emplace(name, AdwinDetector(config_.delta_data,
                                                   config_.adwin_max_buckets))
                      .first;
        }
        if (det->second.add(obs)) {
            fire("data(" + name + ")", det->second.window_size());
        }
    }

    // 5. a fully turned-over window completes a pending follow-up remine
    //    even when no detector fired
    bool refill_completion = false;
    if (state.refill_armed && state.refill_remaining == 0) {
        state.refill_armed = false;
        state.drift_flag = true;
        state.pending_triggers.push_back(state.refill_trigger);
        refill_completion = true;
    }

    if (state.drift_flag &&
        state.window.size() >= config_.min_mine_instances) {
        return remine(dp_id, state, seq, !refill_completion);
    }
    return std::nullopt;  // deferred reminings keep the flag
}

DriftNotification MonitorEngine::remine(const std::string& dp_id,
                                        MonitorState& state, std::uint64_t seq,
                                        bool arm_followup) {
    DriftNotification note;
    note.seq = seq;
    note.dp_id = dp_id;
    note.trigger =
        state.pending_triggers.empty() ? "unknown" : state.pending_triggers.front();
    note.old_rules = state.rules.text();
    note.adwin_window = state.adwin_window_at_detection;

    fit_point(state, dp_id, seq, note.trigger, state.train_horizon);

    // one follow-up remine lands once the window has fully turned over; a
    // model mined right at detection saw only a sliver of the new regime
    if (arm_followup) {
        state.refill_armed = true;
        state.refill_remaining = state.ws;
        state.refill_trigger = note.trigger;
    }

    note.new_rules = state.rules.text();
    state.drift_flag = false;
    state.pending_triggers.clear();
    state.adwin_window_at_detection = 0;
    state.train_horizon = 0;
    return note;
}

void MonitorEngine::complete_case(const std::string& case_id) {
    if (trace_dict_.erase(case_id) > 0) {
        dfg_.forget_case(case_id);
        ++completed_cases_;
    }
}

void MonitorEngine::evict_lru_case() {
    auto oldest = trace_dict_.begin();
    for (auto it = trace_dict_.begin(); it != trace_dict_.end(); ++it) {
        if (it->second.last_seq < oldest->second.last_seq) oldest = it;
    }
    if (oldest != trace_dict_.end()) {
        dfg_.forget_case(oldest->first);
        trace_dict_.erase(oldest);
        ++warnings_.tracedict_evictions;
    }
}

std::map<std::string, double> MonitorEngine::collect_features(
    const std::string& case_id) {
    auto it = trace_dict_.find(case_id);
    if (it == trace_dict_.end()) {
        ++warnings_.unknown_case_lookups;
        return {};
    }
    return it->second.attributes;
}

double MonitorEngine::overall_accuracy() const {
    return total_decisions_ == 0
               ? 0.0
               : total_correct_ / static_cast<double>(total_decisions_);
}

StateMetrics MonitorEngine::state_metrics() const {
    StateMetrics m;
    m.open_cases = trace_dict_.size();
    m.dfg_entries = dfg_.entry_count();
    m.dfg_open_cases = dfg_.open_case_count();
    for (const auto& [id, state] : points_) {
        (void)id;
        m.window_instances += state.window.size();
        if (state.adwin_acc) m.adwin_buckets += state.adwin_acc->bucket_count();
        for (const auto& [c, det] : state.adwin_class) {
            (void)c;
            m.adwin_buckets += det.bucket_count();
        }
        for (const auto& [a, det] : state.adwin_attr) {
            (void)a;
            m.adwin_buckets += det.bucket_count();
        }
    }
    for (const auto& [id, buf] : pending_) {
        (void)id;
        m.pending_instances += buf.size();
    }
    return m;
}

RunReport MonitorEngine::report() const {
    RunReport r;
    for (const auto& [id, state] : points_) {
        PointReport pr;
        pr.id = id;
        pr.classes = state.classes;
        pr.rules_text = state.rules.text();
        pr.trained_on = state.model ? state.model->trained_on() : 0;
        pr.model_seq = state.model_seq;
        pr.ws = state.ws;
        pr.remine_log = state.remine_log;
        r.points.push_back(std::move(pr));
    }
    r.notifications = notifications_;
    r.accuracy_series = series_;
    r.monitored_decisions = total_decisions_;
    r.overall_accuracy = overall_accuracy();
    return r;
}

std::string RunReport::rules_text() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& p : points) {
        if (!first) os << "\n";
        first = false;
        os << "## DP " << p.id << " -> {";
        bool fc = true;
        for (const auto& c : p.classes) {
            if (!fc) os << ", ";
            fc = false;
            os << c;
        }
        os << "}\n";
        os << p.rules_text;
        os << "trained_on=" << p.trained_on << " at seq=" << p.model_seq << "\n";
    }
    return os.str();
}

std::string RunReport::drift_events_csv() const {
    std::ostringstream os;
    os << "seq,dp_id,trigger,adwin_window,old_rule_hash,new_rule_hash\n";
    for (const auto& n : notifications) {
        os << n.seq << "," << n.dp_id << "," << n.trigger << ","
           << n.adwin_window << "," << to_hex(fnv1a(n.old_rules)) << ","
           << to_hex(fnv1a(n.new_rules)) << "\n";
    }
    return os.str();
}

std::string RunReport::accuracy_series_csv() const {
    std::ostringstream os;
    os << "seq,dp_id,running_accuracy\n";
    for (const auto& p : accuracy_series) {
        os << p.seq << "," << p.dp_id << ","
           << format_fixed(p.running_accuracy, 6) << "\n";
    }
    return os.str();
}

std::string RunReport::decision_points_json() const {
    if (points.empty()) return "{\n  \"points\": []\n}\n";
    std::ostringstream os;
    os << "{\n  \"points\": [";
    bool first = true;
    for (const auto& p : points) {
        if (!first) os << ",";
        first = false;
        os << "\n    {\"id\": \"" << p.id << "\", \"classes\": [";
        bool fc = true;
        for (const auto& c : p.classes) {
            if (!fc) os << ", ";
            fc = false;
            os << "\"" << c << "\"";
        }
        os << "], \"trained_on\": " << p.trained_on
           << ", \"model_seq\": " << p.model_seq << ", \"ws\": " << p.ws << "}";
    }
    os << "\n  ]\n}\n";
    return os.str();
}

}  // namespace dmine
