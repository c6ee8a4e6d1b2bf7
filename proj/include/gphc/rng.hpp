#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gphc {

/// Seeded random stream. Streams are derived from a master seed and a stream
/// index, so replication r of a run always sees the same numbers no matter
/// which worker thread executes it.
class rng_stream {
 public:
  using result_type = std::uint64_t;

  explicit rng_stream(std::uint64_t master_seed, std::uint64_t stream_index = 0) {
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix(s);
    std::uint64_t b = splitmix(s);
    std::uint64_t t = stream_index ^ 0x9e3779b97f4a7c15ULL;
    std::uint64_t c = splitmix(t);
    std::uint64_t d = splitmix(t);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
    engine_.seed(seq);
  }

  /// Child stream for a sub-task (e.g. bootstrap replicate `index`).
  rng_stream split(std::uint64_t index) { return rng_stream(engine_(), index); }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on (0, 1), never exactly 0.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard exponential draw.
  double exponential() { return -std::log(uniform()); }

 private:
  static std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace gphc
