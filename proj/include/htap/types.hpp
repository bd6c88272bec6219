#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace htap {

/// Index into the distance matrix. Node 0 is the depot; task i (0-based, in
/// listed order) is node i + 1.
using NodeIndex = std::size_t;

inline constexpr NodeIndex kDepot = 0;

/// Opaque integer identifier, tagged so task, agent and type ids cannot be
/// mixed up.
template <class Tag>
struct Id {
  std::int64_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::int64_t v) : value(v) {}

  friend constexpr auto operator<=>(const Id&, const Id&) = default;
};

using TaskId = Id<struct TaskIdTag>;
using AgentId = Id<struct AgentIdTag>;
using TypeId = Id<struct TypeIdTag>;

/// Type 0 marks generic tasks (executable by any agent).
inline constexpr TypeId kGenericType{0};

/// Closed walk from the depot through a set of task nodes and back.
///
/// `nodes` starts and ends with the depot; an empty tour is just `{kDepot}`
/// with zero cost.
struct Tour {
  std::vector<NodeIndex> nodes{kDepot};
  double cost = 0.0;

  /// Task nodes in visiting order (the tour without its depot endpoints).
  std::span<const NodeIndex> interior() const {
    if (nodes.size() <= 2) return {};
    return std::span<const NodeIndex>(nodes).subspan(1, nodes.size() - 2);
  }

  bool empty() const { return nodes.size() <= 1; }
  std::size_t task_count() const { return interior().size(); }
};

}  // namespace htap

template <class Tag>
struct std::hash<htap::Id<Tag>> {
  std::size_t operator()(const htap::Id<Tag>& id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};
