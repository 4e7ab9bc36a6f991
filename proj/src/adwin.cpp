#include "dmine/adwin.hpp"

#include <cmath>
#include <stdexcept>

namespace dmine {

AdwinDetector::AdwinDetector(double delta, int max_buckets_per_row)
    : delta_(delta), max_buckets_(max_buckets_per_row) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("adwin delta must be in (0,1)");
    }
    if (max_buckets_per_row < 2) {
        throw std::invalid_argument("adwin needs at least 2 buckets per row");
    }
    rows_.emplace_back();
}

bool AdwinDetector::add(double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("adwin input must be finite");
    }
    insert_element(value);
    compress();
    if (total_count_ < min_window_for_cut_) return false;

    bool drift = false;
    while (detect_and_cut()) drift = true;  // several cuts may fall in one add
    return drift;
}

void AdwinDetector::insert_element(double value) {
    if (total_count_ > 0) {
        const double old_mean = total_sum_ / static_cast<double>(total_count_);
        const double new_mean =
            (total_sum_ + value) / static_cast<double>(total_count_ + 1);
        total_varsum_ += (value - old_mean) * (value - new_mean);
    }
    total_sum_ += value;
    ++total_count_;
    rows_[0].push_back(Bucket{value, 0.0});
}

void AdwinDetector::compress() {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].size() <= static_cast<std::size_t>(max_buckets_)) break;
        if (r + 1 == rows_.size()) rows_.emplace_back();
        // merge the two oldest buckets of this row into the next row
        const Bucket a = rows_[r][0];
        const Bucket b = rows_[r][1];
        rows_[r].pop_front();
        rows_[r].pop_front();
        const double n = static_cast<double>(bucket_size(r));
        const double mean_a = a.sum / n;
        const double mean_b = b.sum / n;
        Bucket merged;
        merged.sum = a.sum + b.sum;
        merged.varsum = a.varsum + b.varsum +
                        (n * n / (2.0 * n)) * (mean_a - mean_b) * (mean_a - mean_b);
        rows_[r + 1].push_back(merged);
    }
}

bool AdwinDetector::cut_expression(std::uint64_t n0, double sum0,
                                   std::uint64_t n1, double sum1) const {
    const double mean0 = sum0 / static_cast<double>(n0);
    const double mean1 = sum1 / static_cast<double>(n1);
    const double m =
        1.0 / (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1));
    const double n = static_cast<double>(total_count_);
    const double delta_prime = delta_ / n;
    const double log_term = std::log(2.0 / delta_prime);
    const double sigma2 =
        std::max(0.0, total_varsum_) / static_cast<double>(total_count_);
    const double eps_cut = std::sqrt((2.0 / m) * sigma2 * log_term) +
                           (2.0 / (3.0 * m)) * log_term;
    return std::fabs(mean0 - mean1) >= eps_cut;
}

bool AdwinDetector::detect_and_cut() {
    if (total_count_ < min_window_for_cut_) return false;
    std::uint64_t n0 = 0;
    double sum0 = 0.0;
    std::size_t buckets_passed = 0;
    // oldest -> newest: highest row first, front to back within a row
    for (std::size_t rr = rows_.size(); rr-- > 0;) {
        for (const Bucket& bucket : rows_[rr]) {
            n0 += bucket_size(rr);
            sum0 += bucket.sum;
            ++buckets_passed;
            const std::uint64_t n1 = total_count_ - n0;
            if (n1 == 0) break;  // last boundary has an empty right side
            if (cut_expression(n0, sum0, n1, total_sum_ - sum0)) {
                drop_oldest_buckets(buckets_passed);
                return true;
            }
        }
    }
    return false;
}

void AdwinDetector::drop_oldest_buckets(std::size_t count) {
    for (std::size_t rr = rows_.size(); rr-- > 0 && count > 0;) {
        while (!rows_[rr].empty() && count > 0) {
            total_sum_ -= rows_[rr].front().sum;
            total_count_ -= bucket_size(rr);
            rows_[rr].pop_front();
            --count;
        }
    }
    while (rows_.size() > 1 && rows_.back().empty()) rows_.pop_back();
    recompute_variance();
}

void AdwinDetector::recompute_variance() {
    // Fold the remaining buckets (Chan's combine); keeps the window variance
    // exact after wholesale prefix drops.
    double varsum = 0.0;
    double sum = 0.0;
    std::uint64_t count = 0;
    for (std::size_t rr = rows_.size(); rr-- > 0;) {
        for (const Bucket& bucket : rows_[rr]) {
            const std::uint64_t bn = bucket_size(rr);
            if (count == 0) {
                varsum = bucket.varsum;
                sum = bucket.sum;
                count = bn;
                continue;
            }
            const double na = static_cast<double>(count);
            const double nb = static_cast<double>(bn);
            const double dmean = bucket.sum / nb - sum / na;
            varsum += bucket.varsum + (na * nb / (na + nb)) * dmean * dmean;
            sum += bucket.sum;
            count += bn;
        }
    }
    total_varsum_ = std::max(0.0, varsum);
}

double AdwinDetector::mean() const {
    return total_count_ == 0 ? 0.0
                             : total_sum_ / static_cast<double>(total_count_);
}

double AdwinDetector::variance() const {
    return total_count_ == 0
               ? 0.0
               : std::max(0.0, total_varsum_) / static_cast<double>(total_count_);
}

void AdwinDetector::reset() {
    rows_.clear();
    rows_.emplace_back();
    total_count_ = 0;
    total_sum_ = 0.0;
    total_varsum_ = 0.0;
}

std::size_t AdwinDetector::bucket_count() const {
    std::size_t n = 0;
    for (const auto& row : rows_) n += row.size();
    return n;
}

}  // namespace dmine
