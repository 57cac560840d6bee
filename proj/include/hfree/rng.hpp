#pragma once

// Counter-based random streams.
//
// A stream is identified by a 64-bit key; draw i of the stream is
// mix64(key + i * kGolden), i.e. SplitMix64 started at `key`. Keys for
// per-node streams are obtained by hashing (seed, node identity, iteration)
// through the same finalizer, so every stream is a pure function of those
// three values and no state is shared between nodes. Bounded draws use
// Lemire's multiply-and-reject method, which is exact and platform
// independent (no std::uniform_int_distribution, whose output is not
// specified by the standard).

#include <cstdint>
#include <iterator>
#include <utility>

namespace hfree {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Combines a seed with one more coordinate into a new, well-mixed seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t coordinate) noexcept {
  return mix64(mix64(seed + kGolden) ^ mix64(coordinate * kGolden + 0x632BE59BD9B4E019ULL));
}

// Replacement source of choices. Used to enumerate every execution of a
// protocol instead of sampling one.
class ChoiceSource {
 public:
  virtual ~ChoiceSource() = default;
  // Returns a value in [0, arity). arity >= 1.
  virtual std::uint64_t choose(std::uint64_t arity) = 0;
};

class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(std::uint64_t key) noexcept : key_(key) {}
  explicit RandomStream(ChoiceSource* script) noexcept : script_(script) {}

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t draws() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  // Uniform integer in [0, n). n must be >= 1.
  std::uint64_t below(std::uint64_t n) {
    if (script_ != nullptr) return script_->choose(n);
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) noexcept { return uniform01() < prob; }

  // Fisher-Yates; draws below(i + 1) for i = size-1 down to 1.
  template <std::random_access_iterator It>
  void shuffle(It first, It last) {
    const auto count = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = count; i > 1; --i) {
      const std::uint64_t j = below(i);
      using std::swap;
      swap(first[static_cast<std::ptrdiff_t>(i - 1)], first[static_cast<std::ptrdiff_t>(j)]);
    }
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  ChoiceSource* script_ = nullptr;
};

// Stream for node `node_id` in repetition `iteration` of a seeded run.
inline RandomStream derive_rng(std::uint64_t seed, std::uint64_t node_id, std::uint64_t iteration) noexcept {
  return RandomStream(derive_seed(derive_seed(seed, node_id), iteration));
}

}  // namespace hfree
