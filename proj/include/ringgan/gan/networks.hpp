#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ringgan/gan/layers.hpp"

namespace ringgan::gan {

struct GeneratorConfig {
  int in_channels = 3;
  int out_channels = 3;
  int base_channels = 64;
  int n_downsample = 2;
  int n_res_blocks = 6;
  /// Appends one N(0,1) input channel when a noise source is supplied.
  bool noise_channel = false;

  /// 9 residual blocks from 256 px up, 6 below.
  static int default_res_blocks(int image_size) { return image_size >= 256 ? 9 : 6; }
  void validate() const;
};

struct DiscriminatorConfig {
  int in_channels = 3;
  int base_channels = 64;
  /// Number of stride-2 layers before the two stride-1 layers.
  int n_strided = 3;

  void validate() const;
  /// Side of the patch score map for a square input, or 0 when too small.
  int patch_size(int image_size) const;
};

void to_json(nlohmann::json& j, const GeneratorConfig& c);
void from_json(const nlohmann::json& j, GeneratorConfig& c);
void to_json(nlohmann::json& j, const DiscriminatorConfig& c);
void from_json(const nlohmann::json& j, DiscriminatorConfig& c);

struct ResidualBlock {
  Conv conv1;
  InstanceNorm norm1;
  Conv conv2;
  InstanceNorm norm2;

  Tensorf operator()(const Tensorf& x) const;
};

/// 7x7 stem, strided 4x4 downsampling, residual blocks, 4x4 transposed
/// upsampling, 7x7 head with tanh. Maps [N, C, S, S] to [N, C', S, S].
class Generator {
 public:
  Generator(const GeneratorConfig& config, std::uint64_t seed);

  /// `noise` supplies the extra channel when the config enables it; without
  /// it the channel is zero.
  Tensorf forward(const Tensorf& x, Rng* noise = nullptr) const;
  Tensorf operator()(const Tensorf& x) const { return forward(x); }

  const GeneratorConfig& config() const { return config_; }
  std::vector<NamedTensor> named_parameters() const;
  std::vector<Tensorf> parameters() const { return tensors_of(named_parameters()); }
  std::vector<ResidualBlock>& residual_blocks() { return blocks_; }

 private:
  GeneratorConfig config_;
  Conv stem_;
  InstanceNorm stem_norm_;
  std::vector<Conv> down_;
  std::vector<InstanceNorm> down_norm_;
  std::vector<ResidualBlock> blocks_;
  std::vector<Conv> up_;
  std::vector<InstanceNorm> up_norm_;
  Conv head_;
};

/// PatchGAN: 4x4 convolutions, channels doubling per layer, leaky ReLU 0.2,
/// instance norm after all but the first, sigmoid patch scores.
class Discriminator {
 public:
  Discriminator(const DiscriminatorConfig& config, std::uint64_t seed);

  /// [N, C, S, S] -> [N, 1, P, P] with P = config().patch_size(S).
  Tensorf forward(const Tensorf& x) const;
  Tensorf operator()(const Tensorf& x) const { return forward(x); }

  const DiscriminatorConfig& config() const { return config_; }
  std::vector<NamedTensor> named_parameters() const;
  std::vector<Tensorf> parameters() const { return tensors_of(named_parameters()); }

 private:
  DiscriminatorConfig config_;
  std::vector<Conv> convs_;
  std::vector<InstanceNorm> norms_;  // one per conv after the first, except the last
};

}  // namespace ringgan::gan
