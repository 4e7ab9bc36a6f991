#include "dmine/heuristics.hpp"

#include <algorithm>
#include <sstream>

#include "dmine/util.hpp"

namespace dmine {

std::uint64_t HeuristicsNet::structural_hash() const {
    std::uint64_t h = fnv1a("hn");
    for (const auto& n : nodes) {
        h = fnv1a(n, h);
        h = fnv1a("|", h);
    }
    h = fnv1a("#", h);
    for (const auto& [edge, dep] : edges) {
        (void)dep;  // hash covers structure, not the dependency values
        h = fnv1a(edge.first, h);
        h = fnv1a(">", h);
        h = fnv1a(edge.second, h);
        h = fnv1a("|", h);
    }
    return h;
}

std::map<std::string, std::set<std::string>> HeuristicsNet::successors() const {
    std::map<std::string, std::set<std::string>> succ;
    for (const auto& [edge, dep] : edges) {
        (void)dep;
        succ[edge.first].insert(edge.second);
    }
    return succ;
}

std::set<std::string> HeuristicsNet::sinks() const {
    std::set<std::string> out = nodes;
    for (const auto& [edge, dep] : edges) {
        (void)dep;
        out.erase(edge.first);
    }
    return out;
}

std::string HeuristicsNet::to_dot() const {
    std::ostringstream os;
    os << "digraph heuristics_net {\n";
    for (const auto& n : nodes) {
        os << "  \"" << n << "\";\n";
    }
    for (const auto& [edge, dep] : edges) {
        os << "  \"" << edge.first << "\" -> \"" << edge.second
           << "\" [label=\"" << format_fixed(dep, 3) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

double dependency_value(std::uint64_t count_ab, std::uint64_t count_ba) {
    const double ab = static_cast<double>(count_ab);
    const double ba = static_cast<double>(count_ba);
    return (ab - ba) / (ab + ba + 1.0);
}

HeuristicsNet mine_heuristics_net(const std::vector<DfgEdge>& snapshot,
                                  double dep_threshold) {
    std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
    for (const auto& e : snapshot) {
        counts[{e.from, e.to}] = e.count;
    }
    auto count_of = [&counts](const std::string& a, const std::string& b) {
        auto it = counts.find({a, b});
        return it == counts.end() ? std::uint64_t{0} : it->second;
    };

    HeuristicsNet net;
    for (const auto& [pair, ab] : counts) {
        const std::uint64_t ba = count_of(pair.second, pair.first);
        const double dep = dependency_value(ab, ba);
        if (dep >= dep_threshold) {
            net.edges.emplace(pair, dep);
            net.nodes.insert(pair.first);
            net.nodes.insert(pair.second);
        }
    }
    return net;
}

std::vector<DecisionPoint> discover_decision_points(const HeuristicsNet& net) {
    std::vector<DecisionPoint> points;
    for (const auto& [node, succ] : net.successors()) {
        if (succ.size() >= 2) {
            points.push_back(DecisionPoint{node, succ});
        }
    }
    return points;  // successors() is an ordered map, already sorted by id
}

StructuralChange diff(const std::vector<DecisionPoint>& old_points,
                      const std::vector<DecisionPoint>& new_points) {
    std::map<std::string, const DecisionPoint*> old_by_id;
    for (const auto& p : old_points) old_by_id[p.id] = &p;

    StructuralChange change;
    for (const auto& p : new_points) {
        auto it = old_by_id.find(p.id);
        if (it == old_by_id.end()) {
            change.added.push_back(p);
        } else {
            if (it->second->classes != p.classes) {
                change.class_changed.push_back(
                    {p.id, it->second->classes, p.classes});
            }
            old_by_id.erase(it);
        }
    }
    for (const auto& [id, p] : old_by_id) {
        (void)id;
        change.removed.push_back(*p);
    }
    return change;
}

}  // namespace dmine
