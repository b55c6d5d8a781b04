#include "drams/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "drams/rng.hpp"

namespace drams {

double distance(Position a, Position b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

std::string label(const Node& n) {
  switch (n.kind) {
    case NodeKind::source:
      return "S";
    case NodeKind::destination:
      return "D";
    case NodeKind::iu:
      return "U" + std::to_string(n.ordinal);
    case NodeKind::ris:
      return "R" + std::to_string(n.ordinal);
  }
  return "?";
}

bool Arena::contains(Position p) const noexcept {
  return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
}

Topology::Topology(std::vector<Node> nodes, double coverage_radius, Arena arena)
    : nodes_(std::move(nodes)), coverage_radius_(coverage_radius), arena_(arena) {
  if (!(coverage_radius_ > 0.0) || !std::isfinite(coverage_radius_)) {
    throw std::invalid_argument("coverage radius must be positive");
  }
  std::size_t sources = 0;
  std::size_t destinations = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.id.value != i) throw std::invalid_argument("node ids must equal their index");
    if (!arena_.contains(n.position)) {
      throw std::invalid_argument("node " + label(n) + " lies outside the arena");
    }
    switch (n.kind) {
      case NodeKind::source:
        ++sources;
        source_index_ = i;
        break;
      case NodeKind::destination:
        ++destinations;
        destination_index_ = i;
        break;
      case NodeKind::iu:
        iu_ids_.push_back(n.id);
        break;
      case NodeKind::ris:
        if (n.ris_elements < 1) throw std::invalid_argument("RIS " + label(n) + " needs at least one element");
        ris_ids_.push_back(n.id);
        break;
    }
  }
  if (sources != 1 || destinations != 1) {
    throw std::invalid_argument("a topology needs exactly one source and one destination");
  }
}

Topology Topology::with_iu_positions(std::span<const Position> iu_positions) const {
  if (iu_positions.size() != iu_ids_.size()) throw std::invalid_argument("IU position count mismatch");
  std::vector<Node> moved = nodes_;
  for (std::size_t k = 0; k < iu_ids_.size(); ++k) moved[iu_ids_[k].value].position = iu_positions[k];
  return Topology(std::move(moved), coverage_radius_, arena_);
}

std::vector<Node> half_circle_scan(const Topology& topo, Position center, Position target, KindMask kinds) {
  if (center == target) throw std::invalid_argument("half_circle_scan: center equals target");
  const double ax = target.x - center.x;
  const double ay = target.y - center.y;
  const double r = topo.coverage_radius();

  struct Hit {
    double remaining;
    const Node* node;
  };
  std::vector<Hit> hits;
  for (const Node& n : topo.nodes()) {
    if ((kind_bit(n.kind) & kinds) == 0) continue;
    const double dx = n.position.x - center.x;
    const double dy = n.position.y - center.y;
    if (dx * ax + dy * ay <= 0.0) continue;
    if (std::hypot(dx, dy) > r) continue;
    hits.push_back({distance(n.position, target), &n});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.remaining != b.remaining) return a.remaining < b.remaining;
    return a.node->id < b.node->id;
  });
  std::vector<Node> out;
  out.reserve(hits.size());
  for (const Hit& h : hits) out.push_back(*h.node);
  return out;
}

int min_hops(double l, double r) {
  if (!(l > 0.0) || !(r > 0.0)) throw std::invalid_argument("min_hops: distances must be positive");
  return static_cast<int>(std::ceil(l / r));
}

int hops_consumed(Position s_pos, Position u_pos, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("hops_consumed: radius must be positive");
  return static_cast<int>(std::floor(distance(s_pos, u_pos) / r));
}

Topology generate_topology(const TopologySpec& spec, std::uint64_t seed) {
  std::vector<Node> nodes;
  nodes.reserve(2 + spec.iu_count + 512);
  nodes.push_back({NodeId{0}, NodeKind::source, spec.source, 1, 0});
  nodes.push_back({NodeId{1}, NodeKind::destination, spec.destination, 1, 0});

  Rng rng = keyed_rng(derive_key(seed, {tag(StreamTag::topology)}));
  std::uniform_real_distribution<double> ux(0.0, spec.arena.width);
  std::uniform_real_distribution<double> uy(0.0, spec.arena.height);
  for (std::size_t k = 0; k < spec.iu_count; ++k) {
    const double x = ux(rng);
    const double y = uy(rng);
    nodes.push_back({NodeId{static_cast<std::uint32_t>(nodes.size())}, NodeKind::iu, {x, y},
                     static_cast<std::uint32_t>(k + 1), 0});
  }

  if (!(spec.ris_spacing > 0.0)) throw std::invalid_argument("RIS grid spacing must be positive");
  std::uint32_t ordinal = 0;
  for (double y = spec.ris_spacing / 2.0; y < spec.arena.height; y += spec.ris_spacing) {
    for (double x = spec.ris_spacing / 2.0; x < spec.arena.width; x += spec.ris_spacing) {
      nodes.push_back({NodeId{static_cast<std::uint32_t>(nodes.size())}, NodeKind::ris, {x, y}, ++ordinal,
                       spec.ris_elements});
    }
  }
  return Topology(std::move(nodes), spec.coverage_radius, spec.arena);
}

}  // namespace drams
