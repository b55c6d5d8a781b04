#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace drams {

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;  // meters

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(Position a, Position b) noexcept;

enum class NodeKind : std::uint8_t { source, destination, iu, ris };

struct NodeId {
  std::uint32_t value = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::iu;
  Position position;
  /// 1-based index among nodes of the same kind (U3 -> 3, R4 -> 4).
  std::uint32_t ordinal = 0;
  /// Reflecting element count; meaningful for RIS nodes only.
  int ris_elements = 0;
};

/// Short trace label: "S", "D", "U<k>", "R<k>".
std::string label(const Node& n);

struct Arena {
  double width = 400.0;
  double height = 400.0;

  bool contains(Position p) const noexcept;
};

/// Node geometry for one scenario. Node ids equal their index in `nodes()`.
/// Immutable after construction.
class Topology {
 public:
  Topology(std::vector<Node> nodes, double coverage_radius, Arena arena);

  std::span<const Node> nodes() const noexcept { return nodes_; }
  const Node& node(NodeId id) const { return nodes_.at(id.value); }
  const Node& source() const { return nodes_[source_index_]; }
  const Node& destination() const { return nodes_[destination_index_]; }
  double coverage_radius() const noexcept { return coverage_radius_; }
  const Arena& arena() const noexcept { return arena_; }

  std::size_t iu_count() const noexcept { return iu_ids_.size(); }
  std::size_t ris_count() const noexcept { return ris_ids_.size(); }
  std::span<const NodeId> iu_ids() const noexcept { return iu_ids_; }
  std::span<const NodeId> ris_ids() const noexcept { return ris_ids_; }

  /// Same topology with IU positions replaced, in `iu_ids()` order.
  Topology with_iu_positions(std::span<const Position> iu_positions) const;

 private:
  std::vector<Node> nodes_;
  double coverage_radius_;
  Arena arena_;
  std::size_t source_index_ = 0;
  std::size_t destination_index_ = 0;
  std::vector<NodeId> iu_ids_;
  std::vector<NodeId> ris_ids_;
};

using KindMask = std::uint8_t;

constexpr KindMask kind_bit(NodeKind k) noexcept { return static_cast<KindMask>(1u << static_cast<unsigned>(k)); }

constexpr KindMask kIuMask = kind_bit(NodeKind::iu);
constexpr KindMask kRisMask = kind_bit(NodeKind::ris);
constexpr KindMask kDestinationMask = kind_bit(NodeKind::destination);

/// Nodes of the filtered kinds lying within the coverage radius of `center`
/// whose projection on the center->target axis is strictly positive, ordered
/// by remaining distance to `target` (least first), ties by lower id.
/// Requires center != target.
std::vector<Node> half_circle_scan(const Topology& topo, Position center, Position target, KindMask kinds);

/// ceil(l / r): fewest hops that can span distance l with hop reach r.
int min_hops(double l, double r);

/// floor(|s - u| / r): nominal hops already spanned at u.
int hops_consumed(Position s_pos, Position u_pos, double r);

struct TopologySpec {
  Arena arena;
  double coverage_radius = 60.0;
  std::size_t iu_count = 400;
  double ris_spacing = 20.0;
  int ris_elements = 250;
  Position source{20.0, 200.0};
  Position destination{380.0, 200.0};
};

/// Source and destination at their configured spots, IUs uniform in the
/// arena, RISs on a square grid with `ris_spacing` pitch offset by half a
/// pitch from the arena corner. IU draws are sequential on one stream, so a
/// smaller IU count yields a prefix of a larger one for the same seed.
Topology generate_topology(const TopologySpec& spec, std::uint64_t seed);

}  // namespace drams
