#include "dmine/rules.hpp"

#include <sstream>

#include "dmine/util.hpp"

namespace dmine {

bool Rule::matches(const std::map<std::string, double>& features) const {
    for (const auto& [attr, bounds] : conditions) {
        auto it = features.find(attr);
        if (it == features.end()) return false;
        if (bounds.lower && !(it->second > *bounds.lower)) return false;
        if (bounds.upper && !(it->second <= *bounds.upper)) return false;
    }
    return true;
}

std::string Rule::text() const {
    std::ostringstream os;
    os << "IF ";
    if (conditions.empty()) {
        os << "true";
    } else {
        bool first = true;
        for (const auto& [attr, bounds] : conditions) {
            if (bounds.lower) {
                if (!first) os << " AND ";
                first = false;
                os << attr << " > " << format_fixed(*bounds.lower, 2);
            }
            if (bounds.upper) {
                if (!first) os << " AND ";
                first = false;
                os << attr << " <= " << format_fixed(*bounds.upper, 2);
            }
        }
    }
    os << " THEN " << decision_class;
    return os.str();
}

namespace {

void collect_paths(const TreeNode& node,
                   std::map<std::string, AttributeBounds>& bounds,
                   std::vector<Rule>& out) {
    if (node.is_leaf()) {
        Rule rule;
        rule.conditions = bounds;
        rule.decision_class = node.majority_class;
        rule.support = node.n_instances;
        out.push_back(std::move(rule));
        return;
    }
    // left: attr <= threshold, keep the tightest (smallest) upper bound
    {
        AttributeBounds& b = bounds[node.attribute];
        const AttributeBounds saved = b;
        if (!b.upper || node.threshold < *b.upper) b.upper = node.threshold;
        collect_paths(*node.left, bounds, out);
        b = saved;
        if (!saved.lower && !saved.upper) bounds.erase(node.attribute);
    }
    // right: attr > threshold, keep the tightest (largest) lower bound
    {
        AttributeBounds& b = bounds[node.attribute];
        const AttributeBounds saved = b;
        if (!b.lower || node.threshold > *b.lower) b.lower = node.threshold;
        collect_paths(*node.right, bounds, out);
        b = saved;
        if (!saved.lower && !saved.upper) bounds.erase(node.attribute);
    }
}

}  // namespace

RuleSet RuleSet::extract(const DecisionTree& tree) {
    RuleSet rs;
    rs.classes_ = tree.classes();
    std::map<std::string, AttributeBounds> bounds;
    collect_paths(tree.root(), bounds, rs.rules_);
    return rs;
}

std::optional<std::string> RuleSet::classify(
    const std::map<std::string, double>& features) const {
    for (const auto& rule : rules_) {
        if (rule.matches(features)) return rule.decision_class;
    }
    return std::nullopt;
}

std::string RuleSet::text() const {
    std::ostringstream os;
    // group by class (class order), keep path order within a class
    for (const auto& cls : classes_) {
        for (const auto& rule : rules_) {
            if (rule.decision_class == cls) os << rule.text() << "\n";
        }
    }
    // paths whose majority class fell outside classes_ cannot exist: leaf
    // majorities are always drawn from the training labels
    return os.str();
}

}  // namespace dmine
