#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dmine {

// One observed decision: features gathered up to the decision point, the
// chosen branch as label, and the stream position it was observed at.
struct TrainingInstance {
    std::map<std::string, double> features;
    std::string label;
    std::uint64_t seq = 0;
};

struct TreeConfig {
    int max_depth = 8;
    int min_leaf = 5;
    double min_gain = 1e-7;
};

struct SplitResult {
    std::string attribute;
    double threshold = 0.0;  // value <= threshold goes left
    double gain = 0.0;       // Gini impurity decrease, weighted by presence
};

// Best binary split by Gini impurity decrease. Thresholds are taken at
// midpoints of consecutive distinct sorted values of each attribute;
// instances missing an attribute are excluded from that attribute's
// evaluation and the gain is scaled by the present fraction. Ties break on
// (lower attribute name, lower threshold). Returns nullopt when no split
// has positive gain.
std::optional<SplitResult> best_split(
    const std::vector<TrainingInstance>& instances);

struct TreeNode {
    // split fields (internal nodes only)
    std::string attribute;
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;

    std::size_t n_instances = 0;
    std::map<std::string, std::size_t> class_counts;
    std::string majority_class;
    double majority_fraction = 1.0;

    bool is_leaf() const { return left == nullptr; }
};

struct Prediction {
    std::string decision_class;
    double confidence = 0.0;  // majority fraction of the reached leaf
};

// Binary CART classifier over numeric features with deterministic fitting.
class DecisionTree {
public:
    // Requires at least one instance. Fewer than two distinct labels yield
    // a single-leaf tree.
    static DecisionTree fit(const std::vector<TrainingInstance>& instances,
                            const TreeConfig& config);

    // Missing attributes route to the child with more training instances
    // (tie -> left).
    Prediction predict(const std::map<std::string, double>& features) const;

    const std::vector<std::string>& classes() const { return classes_; }
    std::size_t trained_on() const { return trained_on_; }
    const TreeNode& root() const { return *root_; }
    int depth() const;
    std::size_t leaf_count() const;
    std::string to_json() const;

private:
    std::shared_ptr<const TreeNode> root_;  // immutable after fit
    std::vector<std::string> classes_;      // sorted; order breaks ties
    std::size_t trained_on_ = 0;
};

}  // namespace dmine
