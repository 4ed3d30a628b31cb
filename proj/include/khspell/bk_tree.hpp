#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace khspell {

// Burkhard-Keller tree over an integer-valued metric. Equal keys share one
// node; each node carries the caller's payload ids for that key.
template <class Key, class Metric>
class BkTree {
 public:
  explicit BkTree(Metric metric = {}) : metric_(std::move(metric)) {}

  void insert(Key key, std::size_t value) {
    if (nodes_.empty()) {
      nodes_.push_back({std::move(key), {value}, {}});
      return;
    }
    std::size_t at = 0;
    while (true) {
      const std::size_t d = metric_(key, nodes_[at].key);
      if (d == 0) {
        nodes_[at].values.push_back(value);
        return;
      }
      std::size_t next = kNone;
      for (const auto& [edge, child] : nodes_[at].children) {
        if (edge == d) {
          next = child;
          break;
        }
      }
      if (next == kNone) {
        nodes_[at].children.emplace_back(d, nodes_.size());
        nodes_.push_back({std::move(key), {value}, {}});
        return;
      }
      at = next;
    }
  }

  // Calls visit(value, distance) for every stored value whose key lies
  // within `radius` of `query`. Visiting order is unspecified.
  template <class Visit>
  void within(const Key& query, std::size_t radius, Visit&& visit) const {
    if (nodes_.empty()) return;
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
      const Node& node = nodes_[stack.back()];
      stack.pop_back();
      const std::size_t d = metric_(query, node.key);
      if (d <= radius) {
        for (std::size_t v : node.values) visit(v, d);
      }
      const std::size_t lo = d > radius ? d - radius : 0;
      const std::size_t hi = d + radius;
      for (const auto& [edge, child] : node.children) {
        if (edge >= lo && edge <= hi) stack.push_back(child);
      }
    }
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  struct Node {
    Key key;
    std::vector<std::size_t> values;
    std::vector<std::pair<std::size_t, std::size_t>> children;  // (distance, node)
  };

  Metric metric_;
  std::vector<Node> nodes_;
};

}  // namespace khspell
