#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "gw/errors.hpp"
#include "gw/graph.hpp"

namespace gw {

/// Nonempty, strictly increasing list of vertex ids.
class Subset {
 public:
  Subset() = default;

  /// Validates ordering and nonemptiness.
  explicit Subset(std::vector<Vertex> sorted_ids) : ids_(std::move(sorted_ids)) {
    if (ids_.empty()) throw InvariantError("subset must be nonempty");
    for (std::size_t k = 1; k < ids_.size(); ++k)
      if (ids_[k - 1] >= ids_[k]) throw InvariantError("subset ids must be strictly increasing");
  }

  static Subset all(std::size_t n) {
    Subset s;
    s.ids_.resize(n);
    for (std::size_t k = 0; k < n; ++k) s.ids_[k] = static_cast<Vertex>(k);
    return s;
  }

  /// Trusted construction from ids already known to be sorted and unique.
  static Subset adopt(std::vector<Vertex> ids) {
    Subset s;
    s.ids_ = std::move(ids);
    return s;
  }

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::span<const Vertex> members() const noexcept { return ids_; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }
  Vertex operator[](std::size_t k) const { return ids_[k]; }

  bool contains(Vertex v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }

  friend bool operator==(const Subset&, const Subset&) = default;

 private:
  std::vector<Vertex> ids_;
};

}  // namespace gw
