#pragma once

#include <cstdint>
#include <deque>
#include <vector>

namespace dmine {

// Adaptive-windowing change detector over a numeric signal. The window is
// kept as an exponential histogram: row r holds buckets of 2^r observations,
// at most `max_buckets_per_row` per row. On every add the detector scans the
// cut points between adjacent buckets (oldest to newest) and, when the two
// sub-window means differ by more than the variance-based bound, drops all
// buckets older than the cut.
class AdwinDetector {
public:
    explicit AdwinDetector(double delta, int max_buckets_per_row = 5);

    // Inserts `value` and returns true when a change was detected (the
    // window was cut). Throws std::invalid_argument on non-finite input.
    bool add(double value);

    std::uint64_t window_size() const { return total_count_; }
    double mean() const;
    double variance() const;  // population variance of the window
    double delta() const { return delta_; }
    void reset();

    std::size_t bucket_count() const;

private:
    struct Bucket {
        double sum = 0.0;
        double varsum = 0.0;  // within-bucket sum of squared deviations
    };

    static std::uint64_t bucket_size(std::size_t row) {
        return std::uint64_t{1} << row;
    }

    void insert_element(double value);
    void compress();
    bool detect_and_cut();
    bool cut_expression(std::uint64_t n0, double sum0, std::uint64_t n1,
                        double sum1) const;
    void drop_oldest_buckets(std::size_t count);
    void recompute_variance();

    double delta_;
    int max_buckets_;
    std::uint64_t min_window_for_cut_ = 10;

    // rows_[r] ordered oldest -> newest; globally the oldest bucket is the
    // front of the highest non-empty row.
    std::vector<std::deque<Bucket>> rows_;
    std::uint64_t total_count_ = 0;
    double total_sum_ = 0.0;
    double total_varsum_ = 0.0;
};

}  // namespace dmine
