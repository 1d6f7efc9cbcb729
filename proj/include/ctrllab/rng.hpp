#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>

namespace ctrllab {

// Finalizer from SplitMix64. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_label(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t combine(std::uint64_t key, std::uint64_t label) noexcept {
  return mix64(key ^ mix64(label + 0x9e3779b97f4a7c15ULL));
}

/// Names one independent random stream.
///
/// The stream key is a hash of every label, so two paths that agree on all
/// fields yield the same stream no matter when or on which thread they are
/// drawn. `n` is part of the path so extending a dimension grid never
/// perturbs trials already run at other dimensions.
struct SeedPath {
  std::uint64_t master = 0;
  std::string scenario;
  std::uint64_t n = 0;
  std::uint64_t trial = 0;
  std::string tag;

  /// Key shared by every object drawn in one trial.
  std::uint64_t trial_key() const noexcept {
    std::uint64_t k = mix64(master);
    k = combine(k, hash_label(scenario));
    k = combine(k, n);
    return combine(k, trial);
  }

  std::uint64_t key() const noexcept { return stream_key(trial_key(), tag); }

  static std::uint64_t stream_key(std::uint64_t trial_key, std::string_view tag) noexcept {
    return combine(trial_key, hash_label(tag));
  }
};

/// Counter-based generator: output i is mix64(key + i * golden).
///
/// Satisfies std::uniform_random_bit_generator. State is (key, counter), so
/// a stream can be re-created or skipped ahead in O(1).
class StreamEngine {
 public:
  using result_type = std::uint64_t;

  explicit StreamEngine(std::uint64_t key = 0) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  void discard(std::uint64_t k) noexcept { counter_ += k; }
  std::uint64_t key() const noexcept { return key_; }

  friend bool operator==(const StreamEngine&, const StreamEngine&) = default;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform, Gaussian and Bernoulli draws on top of a StreamEngine.
class Sampler {
 public:
  explicit Sampler(std::uint64_t key) : engine_(key) {}
  explicit Sampler(const SeedPath& path) : engine_(path.key()) {}

  double uniform01() { return unit_(engine_); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }

  bool bernoulli(double p) { return unit_(engine_) < p; }

  double normal() { return normal_(engine_); }

  StreamEngine& engine() noexcept { return engine_; }

 private:
  StreamEngine engine_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ctrllab
