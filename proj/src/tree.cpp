#include "dmine/tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dmine/util.hpp"

namespace dmine {

namespace {

double gini(const std::map<std::string, std::size_t>& counts, std::size_t n) {
    if (n == 0) return 0.0;
    double impurity = 1.0;
    for (const auto& [cls, c] : counts) {
        (void)cls;
        const double p = static_cast<double>(c) / static_cast<double>(n);
        impurity -= p * p;
    }
    return impurity;
}

std::map<std::string, std::size_t> count_labels(
    const std::vector<TrainingInstance>& instances) {
    std::map<std::string, std::size_t> counts;
    for (const auto& inst : instances) ++counts[inst.label];
    return counts;
}

void fill_leaf(TreeNode& node) {
    node.majority_class.clear();
    std::size_t best = 0;
    for (const auto& [cls, c] : node.class_counts) {
        if (c > best) {  // first key wins ties: map iterates in class order
            best = c;
            node.majority_class = cls;
        }
    }
    node.majority_fraction =
        node.n_instances == 0
            ? 1.0
            : static_cast<double>(best) / static_cast<double>(node.n_instances);
}

struct FitContext {
    const TreeConfig* config;
};

std::unique_ptr<TreeNode> build_node(std::vector<TrainingInstance> instances,
                                     int depth, const FitContext& ctx) {
    auto node = std::make_unique<TreeNode>();
    node->n_instances = instances.size();
    node->class_counts = count_labels(instances);
    fill_leaf(*node);

    const bool pure = node->class_counts.size() <= 1;
    if (pure || depth >= ctx.config->max_depth ||
        instances.size() < 2 * static_cast<std::size_t>(ctx.config->min_leaf)) {
        return node;
    }
    auto split = best_split(instances);
    if (!split || split->gain < ctx.config->min_gain) return node;

    node->attribute = split->attribute;
    node->threshold = split->threshold;

    std::vector<TrainingInstance> left, right, missing;
    for (auto& inst : instances) {
        auto it = inst.features.find(split->attribute);
        if (it == inst.features.end()) {
            missing.push_back(std::move(inst));
        } else if (it->second <= split->threshold) {
            left.push_back(std::move(inst));
        } else {
            right.push_back(std::move(inst));
        }
    }
    // instances without the split attribute follow the side with more
    // present instances (tie -> left), mirroring predict-time routing
    if (!missing.empty()) {
        auto& target = left.size() >= right.size() ? left : right;
        for (auto& inst : missing) target.push_back(std::move(inst));
    }
    node->left = build_node(std::move(left), depth + 1, ctx);
    node->right = build_node(std::move(right), depth + 1, ctx);
    return node;
}

int node_depth(const TreeNode& node) {
    if (node.is_leaf()) return 0;
    return 1 + std::max(node_depth(*node.left), node_depth(*node.right));
}

std::size_t node_leaves(const TreeNode& node) {
    if (node.is_leaf()) return 1;
    return node_leaves(*node.left) + node_leaves(*node.right);
}

void node_json(const TreeNode& node, std::ostringstream& os) {
    if (node.is_leaf()) {
        os << "{\"leaf\": true, \"n\": " << node.n_instances << ", \"class\": \""
           << node.majority_class << "\", \"counts\": {";
        bool first = true;
        for (const auto& [cls, c] : node.class_counts) {
            if (!first) os << ", ";
            first = false;
            os << "\"" << cls << "\": " << c;
        }
        os << "}}";
        return;
    }
    os << "{\"attribute\": \"" << node.attribute
       << "\", \"threshold\": " << format_fixed(node.threshold, 6)
       << ", \"n\": " << node.n_instances << ", \"left\": ";
    node_json(*node.left, os);
    os << ", \"right\": ";
    node_json(*node.right, os);
    os << "}";
}

}  // namespace

std::optional<SplitResult> best_split(
    const std::vector<TrainingInstance>& instances) {
    const std::size_t total = instances.size();
    if (total < 2) return std::nullopt;

    std::set<std::string> attribute_names;
    for (const auto& inst : instances) {
        for (const auto& [name, v] : inst.features) {
            (void)v;
            attribute_names.insert(name);
        }
    }

    std::optional<SplitResult> best;
    for (const auto& attr : attribute_names) {
        std::vector<std::pair<double, const std::string*>> present;
        present.reserve(total);
        for (const auto& inst : instances) {
            auto it = inst.features.find(attr);
            if (it != inst.features.end()) {
                present.emplace_back(it->second, &inst.label);
            }
        }
        if (present.size() < 2) continue;
        std::sort(present.begin(), present.end(),
                  [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first < b.first;
                      return *a.second < *b.second;
                  });

        std::map<std::string, std::size_t> right_counts;
        for (const auto& [v, label] : present) {
            (void)v;
            ++right_counts[*label];
        }
        if (right_counts.size() < 2) continue;

        const std::size_t np = present.size();
        const double parent_impurity = gini(right_counts, np);
        const double presence = static_cast<double>(np) / static_cast<double>(total);

        std::map<std::string, std::size_t> left_counts;
        std::size_t nl = 0;
        for (std::size_t i = 0; i + 1 < np; ++i) {
            ++left_counts[*present[i].second];
            auto rit = right_counts.find(*present[i].second);
            if (--rit->second == 0) right_counts.erase(rit);
            ++nl;
            if (present[i].first == present[i + 1].first) continue;

            const std::size_t nr = np - nl;
            const double wl = static_cast<double>(nl) / static_cast<double>(np);
            const double wr = static_cast<double>(nr) / static_cast<double>(np);
            const double child_impurity =
                wl * gini(left_counts, nl) + wr * gini(right_counts, nr);
            const double gain = presence * (parent_impurity - child_impurity);
            if (gain <= 0.0) continue;
            const double threshold =
                present[i].first + (present[i + 1].first - present[i].first) / 2.0;
            if (!best || gain > best->gain) {
                best = SplitResult{attr, threshold, gain};
            }
            // ties: attribute_names is sorted and thresholds ascend, so the
            // first candidate reaching a given gain already wins
        }
    }
    return best;
}

DecisionTree DecisionTree::fit(const std::vector<TrainingInstance>& instances,
                               const TreeConfig& config) {
    if (instances.empty()) {
        throw std::invalid_argument("cannot fit a decision tree on no instances");
    }
    DecisionTree tree;
    tree.trained_on_ = instances.size();
    auto counts = count_labels(instances);
    for (const auto& [cls, c] : counts) {
        (void)c;
        tree.classes_.push_back(cls);
    }
    FitContext ctx{&config};
    tree.root_ = build_node(instances, 0, ctx);
    return tree;
}

Prediction DecisionTree::predict(
    const std::map<std::string, double>& features) const {
    const TreeNode* node = root_.get();
    while (!node->is_leaf()) {
        auto it = features.find(node->attribute);
        if (it != features.end()) {
            node = it->second <= node->threshold ? node->left.get()
                                                 : node->right.get();
        } else {
            node = node->left->n_instances >= node->right->n_instances
                       ? node->left.get()
                       : node->right.get();
        }
    }
    return Prediction{node->majority_class, node->majority_fraction};
}

int DecisionTree::depth() const { return node_depth(*root_); }

std::size_t DecisionTree::leaf_count() const { return node_leaves(*root_); }

std::string DecisionTree::to_json() const {
    std::ostringstream os;
    node_json(*root_, os);
    return os.str();
}

}  // namespace dmine
