#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dmine/dfg.hpp"

namespace dmine {

// Dependency graph mined from a DFG snapshot. An edge a->b survives iff
// (|a>b| - |b>a|) / (|a>b| + |b>a| + 1) >= the dependency threshold.
struct HeuristicsNet {
    std::set<std::string> nodes;
    std::map<std::pair<std::string, std::string>, double> edges;

    std::uint64_t structural_hash() const;
    std::map<std::string, std::set<std::string>> successors() const;
    std::set<std::string> sinks() const;  // nodes without outgoing edges
    std::string to_dot() const;
};

HeuristicsNet mine_heuristics_net(const std::vector<DfgEdge>& snapshot,
                                  double dep_threshold);

double dependency_value(std::uint64_t count_ab, std::uint64_t count_ba);

// A split: the activity before the choice plus the selectable branches.
struct DecisionPoint {
    std::string id;
    std::set<std::string> classes;  // |classes| >= 2

    bool operator==(const DecisionPoint&) const = default;
};

// One point per node with >= 2 outgoing edges, sorted by id.
std::vector<DecisionPoint> discover_decision_points(const HeuristicsNet& net);

struct StructuralChange {
    struct ClassChange {
        std::string id;
        std::set<std::string> old_classes;
        std::set<std::string> new_classes;
    };
    std::vector<DecisionPoint> added;
    std::vector<DecisionPoint> removed;
    std::vector<ClassChange> class_changed;

    bool empty() const {
        return added.empty() && removed.empty() && class_changed.empty();
    }
};

// Matches points by id: unmatched-new -> added, unmatched-old -> removed,
// matched with different class sets -> class_changed.
StructuralChange diff(const std::vector<DecisionPoint>& old_points,
                      const std::vector<DecisionPoint>& new_points);

}  // namespace dmine
