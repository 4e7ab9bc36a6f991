#include "dmine/event.hpp"

namespace dmine {

EventQueue::EventQueue(std::size_t capacity) : capacity_(capacity) {}

bool EventQueue::try_push(Event e) {
    {
        std::lock_guard<std::mutex> lock(mtx_);
        if (closed_ || items_.size() >= capacity_) return false;
        items_.push_back(std::move(e));
    }
    not_empty_.notify_one();
    return true;
}

bool EventQueue::push_wait(Event e, std::chrono::milliseconds timeout) {
    {
        std::unique_lock<std::mutex> lock(mtx_);
        if (!not_full_.wait_for(lock, timeout, [this] {
                return closed_ || items_.size() < capacity_;
            }))
            return false;
        if (closed_) return false;
        items_.push_back(std::move(e));
    }
    not_empty_.notify_one();
    return true;
}

std::optional<Event> EventQueue::pop() {
    std::optional<Event> out;
    {
        std::unique_lock<std::mutex> lock(mtx_);
        not_empty_.wait(lock, [this] { return closed_ || !items_.empty(); });
        if (items_.empty()) return std::nullopt;  // closed and drained
        out = std::move(items_.front());
        items_.pop_front();
    }
    not_full_.notify_one();
    return out;
}

void EventQueue::close() {
    {
        std::lock_guard<std::mutex> lock(mtx_);
        closed_ = true;
    }
    not_empty_.notify_all();
    not_full_.notify_all();
}

bool EventQueue::closed() const {
    std::lock_guard<std::mutex> lock(mtx_);
    return closed_;
}

std::size_t EventQueue::size() const {
    std::lock_guard<std::mutex> lock(mtx_);
    return items_.size();
}

}  // namespace dmine
