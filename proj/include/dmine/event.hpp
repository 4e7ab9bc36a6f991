#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace dmine {

// One stream element. `seq` is the global 0-based position in the emitted
// stream; `timestamp` is carried verbatim when the input has the column but
// is never used for ordering.
struct Event {
    std::string case_id;
    std::string activity;
    std::uint64_t seq = 0;
    std::string timestamp;
    std::map<std::string, double> attributes;

    bool operator==(const Event&) const = default;
};

// Bounded single-producer/single-consumer FIFO between the reader and the
// processing loop. A full queue rejects the push (reported error upstream);
// events are never dropped silently.
class EventQueue {
public:
    explicit EventQueue(std::size_t capacity);

    // Non-blocking; false when the queue is full.
    bool try_push(Event e);

    // Blocks while full, up to `timeout`; false on timeout.
    bool push_wait(Event e, std::chrono::milliseconds timeout);

    // Blocks until an event is available or the queue is closed and drained.
    std::optional<Event> pop();

    void close();
    bool closed() const;
    std::size_t size() const;
    std::size_t capacity() const { return capacity_; }

private:
    const std::size_t capacity_;
    mutable std::mutex mtx_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    std::deque<Event> items_;
    bool closed_ = false;
};

}  // namespace dmine
