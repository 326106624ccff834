#include "seqdac/env.hpp"

#include <algorithm>
#include <unordered_set>

namespace seqdac {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity 0");
    storage_.reserve(std::min<size_t>(capacity, 4096));
}

void ReplayBuffer::push(Transition t) {
    if (storage_.size() < capacity_) {
        storage_.push_back(std::move(t));
    } else {
        storage_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

std::optional<std::vector<const Transition*>> ReplayBuffer::sample(
    size_t batch_size, Rng& rng) const {
    if (storage_.size() < batch_size) return std::nullopt;
    // Floyd's algorithm: batch_size distinct indices in O(batch_size).
    std::unordered_set<size_t> picked;
    std::vector<const Transition*> batch;
    batch.reserve(batch_size);
    size_t n = storage_.size();
    for (size_t j = n - batch_size; j < n; ++j) {
        size_t idx = static_cast<size_t>(rng.uniform_int(static_cast<int>(j + 1)));
        if (!picked.insert(idx).second) {
            picked.insert(j);
            idx = j;
        }
        batch.push_back(&storage_[idx]);
    }
    return batch;
}

} // namespace seqdac
