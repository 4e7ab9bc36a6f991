#include "dmine/dfg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dmine {

DfgCounter::DfgCounter(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("lossy-counting epsilon must be in (0,1)");
    }
    bucket_width_ = static_cast<std::uint64_t>(std::ceil(1.0 / epsilon));
}

void DfgCounter::observe(const Event& e) {
    auto it = last_activity_.find(e.case_id);
    if (it != last_activity_.end()) {
        ++items_seen_;
        const std::uint64_t bucket = current_bucket();
        auto key = std::make_pair(it->second, e.activity);
        auto [entry_it, inserted] = entries_.try_emplace(std::move(key));
        if (inserted) {
            entry_it->second.count = 1;
            entry_it->second.delta = bucket - 1;
        } else {
            ++entry_it->second.count;
        }
        if (items_seen_ % bucket_width_ == 0) {
            for (auto cur = entries_.begin(); cur != entries_.end();) {
                if (cur->second.count + cur->second.delta <= bucket) {
                    cur = entries_.erase(cur);
                } else {
                    ++cur;
                }
            }
        }
        it->second = e.activity;
    } else {
        last_activity_.emplace(e.case_id, e.activity);
    }
}

void DfgCounter::forget_case(const std::string& case_id) {
    last_activity_.erase(case_id);
}

std::vector<DfgEdge> DfgCounter::snapshot() const {
    std::vector<DfgEdge> out;
    out.reserve(entries_.size());
    for (const auto& [pair, entry] : entries_) {
        out.push_back(DfgEdge{pair.first, pair.second, entry.count});
    }
    return out;  // entries_ is an ordered map, already lexicographic
}

std::string DfgCounter::snapshot_json() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& edge : snapshot()) {
        if (!first) os << ",";
        first = false;
        os << "\n  {\"from\": \"" << edge.from << "\", \"to\": \"" << edge.to
           << "\", \"count\": " << edge.count << "}";
    }
    os << "\n]\n";
    return os.str();
}

}  // namespace dmine
