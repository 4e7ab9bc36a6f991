#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmine/tree.hpp"

namespace dmine {

// One atomic condition: attribute > lower and/or attribute <= upper.
struct AttributeBounds {
    std::optional<double> lower;  // attr > lower
    std::optional<double> upper;  // attr <= upper
};

struct Rule {
    // tightest bounds per attribute, keyed by attribute name
    std::map<std::string, AttributeBounds> conditions;
    std::string decision_class;
    std::size_t support = 0;  // leaf instance count

    bool matches(const std::map<std::string, double>& features) const;
    std::string text() const;  // "IF ... THEN <class>"
};

// Lossless textual form of a fitted tree: one conjunction per root-to-leaf
// path, grouped by class. Rule-based classification of a fully-featured
// point equals tree prediction.
class RuleSet {
public:
    RuleSet() = default;

    static RuleSet extract(const DecisionTree& tree);

    // First matching rule's class; nullopt when nothing matches (possible
    // only for feature maps missing attributes used in the conditions).
    std::optional<std::string> classify(
        const std::map<std::string, double>& features) const;

    const std::vector<Rule>& rules() const { return rules_; }
    const std::vector<std::string>& classes() const { return classes_; }
    bool empty() const { return rules_.empty(); }

    // Canonical rendering: one rule per line, classes in class order,
    // paths in tree order within a class.
    std::string text() const;

private:
    std::vector<Rule> rules_;
    std::vector<std::string> classes_;
};

}  // namespace dmine
