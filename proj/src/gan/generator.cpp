#include <string>

#include "ringgan/error.hpp"
#include "ringgan/gan/networks.hpp"

namespace ringgan::gan {

using tensor::relu;

void GeneratorConfig::validate() const {
  if (in_channels < 1 || out_channels < 1) throw ValidationError("GeneratorConfig: channel counts must be >= 1");
  if (base_channels < 1) throw ValidationError("GeneratorConfig.base_channels must be >= 1");
  if (n_downsample < 0 || n_downsample > 6) throw ValidationError("GeneratorConfig.n_downsample must be in [0, 6]");
  if (n_res_blocks < 1) throw ValidationError("GeneratorConfig.n_res_blocks must be >= 1");
}

void to_json(nlohmann::json& j, const GeneratorConfig& c) {
  j = {{"in_channels", c.in_channels},   {"out_channels", c.out_channels}, {"base_channels", c.base_channels},
       {"n_downsample", c.n_downsample}, {"n_res_blocks", c.n_res_blocks}, {"noise_channel", c.noise_channel}};
}

void from_json(const nlohmann::json& j, GeneratorConfig& c) {
  GeneratorConfig d;
  c.in_channels = j.value("in_channels", d.in_channels);
  c.out_channels = j.value("out_channels", d.out_channels);
  c.base_channels = j.value("base_channels", d.base_channels);
  c.n_downsample = j.value("n_downsample", d.n_downsample);
  c.n_res_blocks = j.value("n_res_blocks", d.n_res_blocks);
  c.noise_channel = j.value("noise_channel", d.noise_channel);
}

Tensorf ResidualBlock::operator()(const Tensorf& x) const {
  return x + norm2(conv2(relu(norm1(conv1(x)))));
}

Generator::Generator(const GeneratorConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  Rng rng(derive_seed(seed, 0, stream_tag("GENR")));
  const int in = config_.in_channels + (config_.noise_channel ? 1 : 0);
  int ch = config_.base_channels;
  stem_ = Conv::make(in, ch, 7, 1, 3, rng);
  stem_norm_ = InstanceNorm::make(ch);
  for (int i = 0; i < config_.n_downsample; ++i) {
    down_.push_back(Conv::make(ch, 2 * ch, 4, 2, 1, rng));
    down_norm_.push_back(InstanceNorm::make(2 * ch));
    ch *= 2;
  }
  for (int i = 0; i < config_.n_res_blocks; ++i) {
    blocks_.push_back({Conv::make(ch, ch, 3, 1, 1, rng), InstanceNorm::make(ch), Conv::make(ch, ch, 3, 1, 1, rng),
                       InstanceNorm::make(ch)});
  }
  for (int i = 0; i < config_.n_downsample; ++i) {
    up_.push_back(Conv::make(ch, ch / 2, 4, 2, 1, rng, true));
    up_norm_.push_back(InstanceNorm::make(ch / 2));
    ch /= 2;
  }
  head_ = Conv::make(ch, config_.out_channels, 7, 1, 3, rng);
}

Tensorf Generator::forward(const Tensorf& x, Rng* noise) const {
  if (x.rank() != 4 || x.dim(1) != config_.in_channels) {
    throw ShapeError("generator expects [N, " + std::to_string(config_.in_channels) + ", S, S], got " +
                     tensor::to_string(x.shape()));
  }
  const std::int64_t factor = std::int64_t{1} << config_.n_downsample;
  if (x.dim(2) % factor != 0 || x.dim(3) % factor != 0) {
    throw ShapeError("generator input " + tensor::to_string(x.shape()) + " is not divisible by " +
                     std::to_string(factor));
  }
  Tensorf h = x;
  if (config_.noise_channel) {
    Tensorf z = Tensorf::zeros({x.dim(0), 1, x.dim(2), x.dim(3)});
    if (noise != nullptr) {
      for (float& v : z.data()) v = static_cast<float>(noise->normal());
    }
    h = tensor::concat_channels(h, z);
  }
  h = relu(stem_norm_(stem_(h)));
  for (std::size_t i = 0; i < down_.size(); ++i) h = relu(down_norm_[i](down_[i](h)));
  for (const auto& block : blocks_) h = block(h);
  for (std::size_t i = 0; i < up_.size(); ++i) h = relu(up_norm_[i](up_[i](h)));
  return tensor::tanh(head_(h));
}

std::vector<NamedTensor> Generator::named_parameters() const {
  std::vector<NamedTensor> out;
  stem_.collect("stem", out);
  stem_norm_.collect("stem_norm", out);
  for (std::size_t i = 0; i < down_.size(); ++i) {
    down_[i].collect("down" + std::to_string(i), out);
    down_norm_[i].collect("down" + std::to_string(i) + "_norm", out);
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const std::string p = "res" + std::to_string(i);
    blocks_[i].conv1.collect(p + ".conv1", out);
    blocks_[i].norm1.collect(p + ".norm1", out);
    blocks_[i].conv2.collect(p + ".conv2", out);
    blocks_[i].norm2.collect(p + ".norm2", out);
  }
  for (std::size_t i = 0; i < up_.size(); ++i) {
    up_[i].collect("up" + std::to_string(i), out);
    up_norm_[i].collect("up" + std::to_string(i) + "_norm", out);
  }
  head_.collect("head", out);
  return out;
}

}  // namespace ringgan::gan
