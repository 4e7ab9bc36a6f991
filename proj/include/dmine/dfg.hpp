#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "dmine/event.hpp"

namespace dmine {

struct DfgEdge {
    std::string from;
    std::string to;
    std::uint64_t count = 0;
};

// Directly-follows counter with lossy-counting eviction. Each observed
// (predecessor, successor) pair within a case is one item; entries whose
// count + delta falls behind the bucket id are dropped at bucket
// boundaries, which bounds memory while guaranteeing
// true_count - epsilon * items_seen <= stored count <= true_count.
class DfgCounter {
public:
    explicit DfgCounter(double epsilon);

    // Forms a pair with the case's previous activity (if any) and updates
    // the sketch. The first event of a case only records last_activity.
    void observe(const Event& e);

    // Drops the per-case pairing state; called when the engine evicts the
    // case so DFG case-state cannot grow unboundedly.
    void forget_case(const std::string& case_id);

    // Surviving pairs with counts, lexicographically sorted by (from, to).
    std::vector<DfgEdge> snapshot() const;

    std::string snapshot_json() const;

    double epsilon() const { return epsilon_; }
    std::uint64_t items_seen() const { return items_seen_; }
    std::uint64_t bucket_width() const { return bucket_width_; }
    std::size_t entry_count() const { return entries_.size(); }
    std::size_t open_case_count() const { return last_activity_.size(); }

private:
    struct Entry {
        std::uint64_t count = 0;
        std::uint64_t delta = 0;
    };

    std::uint64_t current_bucket() const {
        return items_seen_ == 0 ? 1 : 1 + (items_seen_ - 1) / bucket_width_;
    }

    double epsilon_;
    std::uint64_t bucket_width_;
    std::uint64_t items_seen_ = 0;
    std::map<std::pair<std::string, std::string>, Entry> entries_;
    std::unordered_map<std::string, std::string> last_activity_;
};

}  // namespace dmine
