#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dmine/csv_stream.hpp"
#include "dmine/engine.hpp"
#include "dmine/synthgen.hpp"
#include "dmine/tree.hpp"

namespace dmine::testing {

inline std::vector<Event> events_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    EventReader reader(in);
    std::vector<Event> events;
    while (auto e = reader.next()) events.push_back(std::move(*e));
    return events;
}

inline std::vector<Event> scenario_events(const synth::Scenario& scenario) {
    return events_from_csv(synth::generate_to_string(scenario));
}

struct RunResult {
    std::vector<DriftNotification> notifications;
    std::vector<std::string> notification_cases;  // case id per notification
};

// Streams a full scenario through an engine; calls `probe` after every
// event when provided.
inline RunResult run_stream(
    MonitorEngine& engine, const std::vector<Event>& events,
    const std::function<void(const Event&)>& probe = nullptr) {
    RunResult result;
    for (const auto& e : events) {
        for (auto& note : engine.process_event(e)) {
            result.notifications.push_back(std::move(note));
            result.notification_cases.push_back(e.case_id);
        }
        if (probe) probe(e);
    }
    return result;
}

inline std::uint64_t case_index(const std::string& case_id) {
    return std::stoull(case_id.substr(1));  // ids are c<index>
}

// Pulls every numeric constant following "<attr> <op> " for one attribute
// out of a rules text block.
inline std::vector<double> rule_thresholds(const std::string& rules_text,
                                           const std::string& attribute) {
    std::vector<double> out;
    std::size_t pos = 0;
    while ((pos = rules_text.find(attribute + " ", pos)) != std::string::npos) {
        std::size_t p = pos + attribute.size() + 1;
        while (p < rules_text.size() &&
               (rules_text[p] == '<' || rules_text[p] == '>' ||
                rules_text[p] == '=' || rules_text[p] == ' ')) {
            ++p;
        }
        out.push_back(std::stod(rules_text.substr(p)));
        pos = p;
    }
    return out;
}

inline bool any_threshold_near(const std::vector<double>& thresholds,
                               double target, double tolerance) {
    for (double t : thresholds) {
        if (t >= target - tolerance && t <= target + tolerance) return true;
    }
    return false;
}

inline double gini_of(const std::vector<const std::string*>& labels) {
    std::map<std::string, int> counts;
    for (const auto* l : labels) ++counts[*l];
    double g = 1.0;
    for (const auto& [cls, c] : counts) {
        (void)cls;
        double p = static_cast<double>(c) / static_cast<double>(labels.size());
        g -= p * p;
    }
    return g;
}

// Independent split oracle: enumerate every (attribute, midpoint) candidate
// and compute the presence-weighted Gini gain directly.
inline std::optional<SplitResult> exhaustive_best_split(
    const std::vector<TrainingInstance>& instances) {
    std::set<std::string> attrs;
    for (const auto& i : instances) {
        for (const auto& [a, v] : i.features) {
            (void)v;
            attrs.insert(a);
        }
    }
    std::optional<SplitResult> best;
    for (const auto& attr : attrs) {
        std::vector<double> values;
        for (const auto& i : instances) {
            if (i.features.count(attr)) values.push_back(i.features.at(attr));
        }
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            const double threshold = values[k] + (values[k + 1] - values[k]) / 2.0;
            std::vector<const std::string*> parent, left, right;
            for (const auto& i : instances) {
                auto it = i.features.find(attr);
                if (it == i.features.end()) continue;
                parent.push_back(&i.label);
                (it->second <= threshold ? left : right).push_back(&i.label);
            }
            if (parent.empty() || left.empty() || right.empty()) continue;
            const double np = static_cast<double>(parent.size());
            const double child =
                (static_cast<double>(left.size()) / np) * gini_of(left) +
                (static_cast<double>(right.size()) / np) * gini_of(right);
            const double gain = (np / static_cast<double>(instances.size())) *
                                (gini_of(parent) - child);
            if (gain <= 0.0) continue;
            if (!best || gain > best->gain ||
                (gain == best->gain &&
                 (attr < best->attribute ||
                  (attr == best->attribute && threshold < best->threshold)))) {
                best = SplitResult{attr, threshold, gain};
            }
        }
    }
    return best;
}

}  // namespace dmine::testing
