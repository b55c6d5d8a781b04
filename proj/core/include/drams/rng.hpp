#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace drams {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds `parts` into `seed` so that every distinct tuple names its own
/// stream. Used to key random streams on (seed, replication, node, slot, ...)
/// so draws do not depend on the order in which a computation visits them.
std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) noexcept;

/// Uniform double in [0, 1) from a key, without constructing an engine.
double keyed_uniform(std::uint64_t key) noexcept;

Rng keyed_rng(std::uint64_t key);

/// Stream tags keep keyed draws for different purposes disjoint.
enum class StreamTag : std::uint64_t {
  topology = 0x746f706fULL,
  activity = 0x61637476ULL,
  direct_link = 0x64697263ULL,
  ris_ingress = 0x72696e67ULL,
  ris_egress = 0x72656772ULL,
  ris_mesh = 0x726d6573ULL,
  mobility = 0x6d6f6269ULL,
  replication = 0x7265706cULL,
  traffic_mc = 0x74726d63ULL,
};

inline std::uint64_t tag(StreamTag t) noexcept { return static_cast<std::uint64_t>(t); }

}  // namespace drams
