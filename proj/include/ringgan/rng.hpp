#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace ringgan {

/// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Packs up to eight characters into a substream tag.
constexpr std::uint64_t stream_tag(const char* name) {
  std::uint64_t tag = 0;
  for (int i = 0; i < 8 && name[i] != '\0'; ++i) tag = (tag << 8) | static_cast<unsigned char>(name[i]);
  return tag;
}

/// Seed for substream `index` of `seed`, optionally tagged by a purpose constant.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t tag = 0);

/// Seeded generator with distribution transforms fixed in this code (not left
/// to the standard library) so outputs are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller.
  double normal();

  std::string state() const;
  void restore(const std::string& state);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ringgan
