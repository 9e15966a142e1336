#pragma once

// Counter-based keyed random streams. A stream is addressed by a master seed
// and a structured key; the i-th value of a stream is a pure hash of
// (seed, key, i), so draws never depend on evaluation order.

#include <cstdint>
#include <vector>

namespace stochmatch {

enum class Purpose : std::uint32_t {
  Generic = 0,
  Realization = 1,       // evaluation realizations of G
  SparsifierSample = 2,  // the R realizations drawn by build_q
  Evaluation = 3,        // realization of Q at evaluation time
  EstimateQ = 4,
  Bucket = 5,
  Generator = 6,
  VimInput = 7,        // realization of C fed to FindMatching
  VimRealize = 8,      // fresh slot realizations inside FindMatching
  VimMis = 9,          // apxMIS priorities
  GammaEstimate = 10,  // Monte Carlo runs behind gamma estimates
  MisGeneric = 11,
  ReductionCheck = 12,
};

struct StreamKey {
  Purpose tag = Purpose::Generic;
  std::uint64_t entity = 0;  // vertex, edge, or walk id
  std::uint32_t level = 0;   // recursion level
  std::uint64_t index = 0;   // realization / sample / path index

  StreamKey with_entity(std::uint64_t e) const {
    StreamKey k = *this;
    k.entity = e;
    return k;
  }
  StreamKey with_index(std::uint64_t i) const {
    StreamKey k = *this;
    k.index = i;
    return k;
  }
  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t key_hash(std::uint64_t seed, const StreamKey& key) noexcept {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  h = hash_combine(h, static_cast<std::uint64_t>(key.tag));
  h = hash_combine(h, key.entity);
  h = hash_combine(h, key.level);
  h = hash_combine(h, key.index);
  return h;
}

/// Records every key constructed on this thread while alive. Used to audit
/// that different stages draw from disjoint key spaces.
class StreamAudit {
 public:
  StreamAudit();
  ~StreamAudit();
  StreamAudit(const StreamAudit&) = delete;
  StreamAudit& operator=(const StreamAudit&) = delete;

  const std::vector<StreamKey>& keys() const { return keys_; }
  static void record(const StreamKey& key);

 private:
  std::vector<StreamKey> keys_;
  StreamAudit* previous_;
};

class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, StreamKey key)
      : seed_(master_seed), key_(key), base_(key_hash(master_seed, key)) {
    StreamAudit::record(key);
  }

  std::uint64_t master_seed() const { return seed_; }
  const StreamKey& key() const { return key_; }

  /// Value at an explicit counter position; does not advance the stream.
  std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(base_ ^ mix64(counter * 0xd1342543de82ef95ULL + 1));
  }
  std::uint64_t next() noexcept { return at(counter_++); }

  /// Uniform double in [0, 1) with 53 random bits.
  static double to_unit(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }
  double uniform_at(std::uint64_t counter) const noexcept { return to_unit(at(counter)); }
  double uniform() noexcept { return to_unit(next()); }
  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, n); n > 0. Lemire's multiply-shift without rejection
  /// is biased by at most n / 2^64, which is negligible here.
  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t seed_;
  StreamKey key_;
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace stochmatch
