#include <algorithm>
#include <string>

#include "ringgan/error.hpp"
#include "ringgan/gan/networks.hpp"

namespace ringgan::gan {

void DiscriminatorConfig::validate() const {
  if (in_channels < 1) throw ValidationError("DiscriminatorConfig.in_channels must be >= 1");
  if (base_channels < 1) throw ValidationError("DiscriminatorConfig.base_channels must be >= 1");
  if (n_strided < 1 || n_strided > 6) throw ValidationError("DiscriminatorConfig.n_strided must be in [1, 6]");
}

int DiscriminatorConfig::patch_size(int image_size) const {
  int s = image_size;
  for (int i = 0; i < n_strided; ++i) s = (s + 2 - 4) / 2 + 1;
  s -= 2;  // two stride-1 4x4 layers with padding 1
  return s > 0 ? s : 0;
}

void to_json(nlohmann::json& j, const DiscriminatorConfig& c) {
  j = {{"in_channels", c.in_channels}, {"base_channels", c.base_channels}, {"n_strided", c.n_strided}};
}

void from_json(const nlohmann::json& j, DiscriminatorConfig& c) {
  DiscriminatorConfig d;
  c.in_channels = j.value("in_channels", d.in_channels);
  c.base_channels = j.value("base_channels", d.base_channels);
  c.n_strided = j.value("n_strided", d.n_strided);
}

Discriminator::Discriminator(const DiscriminatorConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  Rng rng(derive_seed(seed, 0, stream_tag("DISC")));
  int in = config_.in_channels;
  int ch = config_.base_channels;
  for (int i = 0; i < config_.n_strided; ++i) {
    convs_.push_back(Conv::make(in, ch, 4, 2, 1, rng));
    if (i > 0) norms_.push_back(InstanceNorm::make(ch));
    in = ch;
    ch *= 2;
  }
  convs_.push_back(Conv::make(in, ch, 4, 1, 1, rng));
  norms_.push_back(InstanceNorm::make(ch));
  convs_.push_back(Conv::make(ch, 1, 4, 1, 1, rng));
}

Tensorf Discriminator::forward(const Tensorf& x) const {
  if (x.rank() != 4 || x.dim(1) != config_.in_channels) {
    throw ShapeError("discriminator expects [N, " + std::to_string(config_.in_channels) + ", S, S], got " +
                     tensor::to_string(x.shape()));
  }
  const auto side = static_cast<int>(std::min(x.dim(2), x.dim(3)));
  if (config_.patch_size(side) < 1) {
    throw ShapeError("discriminator input " + tensor::to_string(x.shape()) + " is too small for a patch map");
  }
  Tensorf h = tensor::leaky_relu(convs_[0](x), 0.2F);
  for (std::size_t i = 1; i + 1 < convs_.size(); ++i) h = tensor::leaky_relu(norms_[i - 1](convs_[i](h)), 0.2F);
  return tensor::sigmoid(convs_.back()(h));
}

std::vector<NamedTensor> Discriminator::named_parameters() const {
  std::vector<NamedTensor> out;
  for (std::size_t i = 0; i < convs_.size(); ++i) {
    convs_[i].collect("conv" + std::to_string(i), out);
    if (i > 0 && i + 1 < convs_.size()) norms_[i - 1].collect("norm" + std::to_string(i), out);
  }
  return out;
}

}  // namespace ringgan::gan
