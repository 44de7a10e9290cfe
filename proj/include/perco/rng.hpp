#pragma once

#include <cstdint>

namespace perco {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t s = a ^ (b * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL);
  splitmix64(s);
  return splitmix64(s);
}

inline double to_unit(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Sequential generator for one stream.  Streams keyed by (seed, stream id)
/// are independent of how work is split across threads.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept : state_(mix(seed, stream)) {}

  std::uint64_t next() noexcept { return splitmix64(state_); }
  double uniform() noexcept { return to_unit(next()); }

 private:
  std::uint64_t state_;
};

/// Counter-based uniform draw: a pure function of its key.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return to_unit(mix(mix(mix(seed, a), b), c));
}

}  // namespace perco
