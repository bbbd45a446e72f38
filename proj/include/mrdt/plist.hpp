#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace mrdt {

/// Immutable singly-linked list with structural sharing. cons/head/tail are
/// O(1). Nodes live in segments: a cons adds a one-node segment, a bulk build
/// packs the whole list into a single contiguous segment, so traversal is
/// mostly sequential and bulk construction costs one allocation. A view keeps
/// its whole segment alive; dropped prefixes are reclaimed when the last view
/// of the segment dies. Exclusively-owned segment chains are released
/// iteratively, so long lists cannot overflow the stack.
template <typename T>
class PList {
  struct Node;
  using Segment = std::vector<Node>;
  using SegmentPtr = std::shared_ptr<const Segment>;

  struct Node {
    T value;
    const Node* next = nullptr;  // within this segment or into next_owner
    SegmentPtr next_owner;       // set only on a segment's last node
  };

  const Node* head_ = nullptr;
  SegmentPtr owner_;  // segment containing head_
  std::size_t size_ = 0;

  PList(const Node* head, SegmentPtr owner, std::size_t size)
      : head_(head), owner_(std::move(owner)), size_(size) {}

  static void release(SegmentPtr segment) {
    while (segment && segment.use_count() == 1) {
      Segment& nodes = const_cast<Segment&>(*segment);
      SegmentPtr next = nodes.empty() ? nullptr : std::move(nodes.back().next_owner);
      segment = std::move(next);
    }
  }

public:
  PList() = default;
  PList(const PList&) = default;
  PList(PList&& other) noexcept
      : head_(std::exchange(other.head_, nullptr)),
        owner_(std::move(other.owner_)),
        size_(std::exchange(other.size_, 0)) {}
  PList& operator=(const PList& other) {
    if (this != &other) {
      release(std::exchange(owner_, other.owner_));
      head_ = other.head_;
      size_ = other.size_;
    }
    return *this;
  }
  PList& operator=(PList&& other) noexcept {
    if (this != &other) {
      release(std::exchange(owner_, std::move(other.owner_)));
      head_ = std::exchange(other.head_, nullptr);
      size_ = std::exchange(other.size_, 0);
    }
    return *this;
  }
  ~PList() { release(std::move(owner_)); }

  bool empty() const { return head_ == nullptr; }
  std::size_t size() const { return size_; }
  const T& front() const { return head_->value; }

  PList pushed_front(T value) const {
    auto segment = std::make_shared<Segment>();
    segment->push_back(Node{std::move(value), head_, owner_});
    const Node* head = &segment->front();
    return PList(head, std::move(segment), size_ + 1);
  }

  PList without_front() const {
    SegmentPtr owner = head_->next_owner ? head_->next_owner : owner_;
    return PList(head_->next, std::move(owner), size_ - 1);
  }

  PList reversed() const {
    std::vector<T> items = to_vector();
    std::reverse(items.begin(), items.end());
    return from_vector(items);
  }

  std::vector<T> to_vector() const {
    std::vector<T> out;
    out.reserve(size_);
    for (const Node* n = head_; n != nullptr; n = n->next) out.push_back(n->value);
    return out;
  }

  static PList from_vector(const std::vector<T>& items) {
    if (items.empty()) return {};
    auto segment = std::make_shared<Segment>();
    Segment& nodes = const_cast<Segment&>(*segment);
    nodes.reserve(items.size());
    for (const T& item : items) nodes.push_back(Node{item, nullptr, nullptr});
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) nodes[i].next = &nodes[i + 1];
    const Node* head = &nodes.front();
    return PList(head, std::move(segment), items.size());
  }
};

} // namespace mrdt
