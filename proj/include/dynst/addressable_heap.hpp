#pragma once

#include <queue>
#include <vector>

namespace dynst {

/// Binary min-heap with stable handles for update/erase and a k-smallest
/// walk that never pops.
template <typename Key, typename Value>
class AddressableHeap {
 public:
  struct Entry {
    Key key;
    Value value;
  };

  bool empty() const { return heap_.size() == 0; }
  size_t size() const { return heap_.size(); }

  int push(Key key, Value value) {
    int h;
    if (!free_.empty()) {
      h = free_.back();
      free_.pop_back();
    } else {
      h = static_cast<int>(pos_.size());
      pos_.push_back(-1);
    }
    heap_.push_back({std::move(key), std::move(value)});
    handle_.push_back(h);
    pos_[h] = static_cast<int>(heap_.size()) - 1;
    sift_up(pos_[h]);
    return h;
  }

  void update_key(int handle, Key key) {
    int i = pos_[handle];
    heap_[i].key = std::move(key);
    sift_up(i);
    sift_down(pos_[handle]);
  }

  void erase(int handle) {
    int i = pos_[handle];
    int last = static_cast<int>(heap_.size()) - 1;
    swap_items(i, last);
    heap_.pop_back();
    handle_.pop_back();
    pos_[handle] = -1;
    free_.push_back(handle);
    if (i <= last - 1) {
      sift_up(i);
      sift_down(i);
    }
  }

  const Entry& top() const { return heap_[0]; }
  const Entry& get(int handle) const { return heap_[pos_[handle]]; }

  /// The k smallest entries in ascending key order (heap untouched).
  std::vector<Entry> k_smallest(int k) const {
    std::vector<Entry> out;
    if (heap_.empty() || k <= 0) return out;
    using Q = std::pair<Key, int>;
    std::priority_queue<Q, std::vector<Q>, std::greater<>> walk;
    walk.push({heap_[0].key, 0});
    while (!walk.empty() && static_cast<int>(out.size()) < k) {
      auto [key, i] = walk.top();
      walk.pop();
      out.push_back(heap_[i]);
      for (int c : {2 * i + 1, 2 * i + 2})
        if (c < static_cast<int>(heap_.size())) walk.push({heap_[c].key, c});
    }
    return out;
  }

 private:
  void swap_items(int i, int j) {
    if (i == j) return;
    std::swap(heap_[i], heap_[j]);
    std::swap(handle_[i], handle_[j]);
    pos_[handle_[i]] = i;
    pos_[handle_[j]] = j;
  }

  void sift_up(int i) {
    while (i > 0) {
      int p = (i - 1) / 2;
      if (heap_[i].key < heap_[p].key) {
        swap_items(i, p);
        i = p;
      } else
        break;
    }
  }

  void sift_down(int i) {
    int n = static_cast<int>(heap_.size());
    while (true) {
      int best = i;
      for (int c : {2 * i + 1, 2 * i + 2})
        if (c < n && heap_[c].key < heap_[best].key) best = c;
      if (best == i) break;
      swap_items(i, best);
      i = best;
    }
  }

  std::vector<Entry> heap_;
  std::vector<int> handle_;  // heap index -> handle
  std::vector<int> pos_;     // handle -> heap index
  std::vector<int> free_;
};

}  // namespace dynst
