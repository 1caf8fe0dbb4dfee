#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace dcflowgen {

// Seedable random stream with a fully specified output sequence.
//
// The engine is std::mt19937_64, whose output the standard pins down
// exactly. Real and bounded-integer draws are derived from the raw 64-bit
// words here rather than through <random> distributions, whose algorithms
// differ between standard library vendors. Two builds on different
// platforms therefore produce identical schedules for the same seed.
//
//   uniform01():  (word >> 11) * 2^-53, a value in [0, 1)
//   below(n):     rejection sampling on the top bits of the word
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, purpose, index); uses splitmix64 so
  // nearby indices give unrelated engine states.
  static Rng derive(std::uint64_t seed, std::uint64_t purpose,
                    std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();
  std::uint64_t below(std::uint64_t n);

  // Fisher-Yates, back to front, with below() as the index source.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Stream purposes for Rng::derive.
enum class Stream : std::uint64_t {
  kTrafficMatrix = 1,
  kFlowset = 2,
  kMapper = 3,
  kCalibration = 4,
};

inline Rng derive_stream(std::uint64_t seed, Stream purpose,
                         std::uint64_t index) {
  return Rng::derive(seed, static_cast<std::uint64_t>(purpose), index);
}

}  // namespace dcflowgen
