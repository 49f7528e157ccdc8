#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace multiplex {

/// Append-only Fenwick (binary indexed) tree over nonnegative weights,
/// supporting O(log n) weighted selection. Backs fitness-proportional
/// target sampling; zero-weight entries are never selected.
class FenwickTree {
public:
    FenwickTree() = default;
    explicit FenwickTree(std::size_t capacity) { reserve(capacity); }

    void reserve(std::size_t capacity) { tree_.reserve(capacity + 1); }

    std::size_t size() const { return size_; }

    /// Appends one entry with weight w (index = previous size()).
    void append(double w) {
        assert(w >= 0.0);
        tree_.push_back(w);
        ++size_;
        // fold completed subtrees into the new node
        std::size_t i = size_;
        std::size_t step = 1;
        while ((i & step) == 0 && step < i) {
            tree_[i] += tree_[i - step];
            step <<= 1;
        }
        total_ += w;
    }

    double total() const { return total_; }

    /// Sum of weights at indices [0, idx).
    double prefix(std::size_t idx) const {
        double s = 0.0;
        for (std::size_t i = idx; i > 0; i -= i & (0 - i)) s += tree_[i];
        return s;
    }

    /// Smallest index whose inclusive prefix sum exceeds x, for x in
    /// [0, total()). Entries with zero weight cannot be returned.
    std::size_t find(double x) const {
        assert(size_ > 0);
        std::size_t idx = 0;
        std::size_t mask = top_mask();
        for (; mask > 0; mask >>= 1) {
            std::size_t next = idx + mask;
            if (next <= size_ && tree_[next] <= x) {
                idx = next;
                x -= tree_[next];
            }
        }
        return idx;  // 0-based entry index
    }

private:
    std::size_t top_mask() const {
        std::size_t m = 1;
        while ((m << 1) <= size_) m <<= 1;
        return m;
    }

    std::vector<double> tree_{0.0};  // 1-based
    std::size_t size_ = 0;
    double total_ = 0.0;
};

}  // namespace multiplex
