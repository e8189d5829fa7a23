#pragma once

#include <cstdint>

#include "rumorlab/graph.hpp"

namespace rumorlab {

/// What a random value is consumed for. Distinct purposes never share values.
enum class Purpose : std::uint64_t {
  request = 1,   // uninformed node picks a neighbor
  serve = 2,     // priority key of a requester at a restricted server
  token = 3,     // token coin of an informed node in the virtual pull
  push = 4,      // informed node picks a push target
};

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-based randomness: the value for (node, round, purpose) is a pure
/// function of the master seed, so two processes built on the same policy see
/// identical values wherever they ask the same question.
class RngPolicy {
 public:
  constexpr explicit RngPolicy(std::uint64_t seed = 0) noexcept : seed_(seed) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }

  constexpr std::uint64_t bits(NodeId node, std::uint64_t round, Purpose purpose) const noexcept {
    std::uint64_t h = detail::splitmix64(seed_ ^ (static_cast<std::uint64_t>(purpose) << 56));
    h = detail::splitmix64(h ^ node);
    return detail::splitmix64(h ^ (round * 0xd1b54a32d192ed03ULL));
  }

  /// Uniform in [0, 1).
  constexpr double uniform(NodeId node, std::uint64_t round, Purpose purpose) const noexcept {
    return static_cast<double>(bits(node, round, purpose) >> 11) * 0x1.0p-53;
  }

  /// Uniform index in [0, n) by multiply-shift; n > 0.
  std::uint64_t index(NodeId node, std::uint64_t round, Purpose purpose, std::uint64_t n) const noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits(node, round, purpose)) * n) >> 64);
  }

  /// Independent policy for trial `trial` of an experiment seeded with this one.
  constexpr RngPolicy derive(std::uint64_t trial) const noexcept {
    return RngPolicy(detail::splitmix64(seed_ ^ detail::splitmix64(trial + 0x632be59bd9b4e019ULL)));
  }

 private:
  std::uint64_t seed_;
};

}  // namespace rumorlab
