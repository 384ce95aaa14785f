#include "ringgan/gan/layers.hpp"

#include <algorithm>

#include "ringgan/error.hpp"

namespace ringgan::gan {

Conv Conv::make(int in_channels, int out_channels, int kernel, int stride, int padding, Rng& rng, bool transposed) {
  const tensor::Shape shape = transposed ? tensor::Shape{in_channels, out_channels, kernel, kernel}
                                         : tensor::Shape{out_channels, in_channels, kernel, kernel};
  std::vector<float> w(static_cast<std::size_t>(tensor::numel(shape)));
  for (float& v : w) v = static_cast<float>(0.02 * rng.normal());
  Conv conv;
  conv.weight = Tensorf::from_data(shape, std::move(w), true);
  conv.bias = Tensorf::zeros({out_channels}, true);
  conv.stride = stride;
  conv.padding = padding;
  conv.transposed = transposed;
  return conv;
}

Tensorf Conv::operator()(const Tensorf& x) const {
  return transposed ? tensor::conv_transpose2d(x, weight, bias, stride, padding)
                    : tensor::conv2d(x, weight, bias, stride, padding);
}

void Conv::collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

InstanceNorm InstanceNorm::make(int channels) {
  return {Tensorf::full({channels}, 1.0F, true), Tensorf::zeros({channels}, true)};
}

Tensorf InstanceNorm::operator()(const Tensorf& x) const { return tensor::instance_norm(x, gamma, beta); }

void InstanceNorm::collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
  out.push_back({prefix + ".gamma", gamma});
  out.push_back({prefix + ".beta", beta});
}

std::vector<Tensorf> tensors_of(const std::vector<NamedTensor>& named) {
  std::vector<Tensorf> out;
  out.reserve(named.size());
  for (const auto& n : named) out.push_back(n.tensor);
  return out;
}

void load_parameters(const std::vector<NamedTensor>& target, const tensor::Checkpoint& source,
                     const std::string& prefix) {
  std::string problems;
  for (const auto& param : target) {
    const std::string name = prefix + param.name;
    if (!source.contains(name)) {
      problems += "\n  " + name + ": expected " + tensor::to_string(param.tensor.shape()) + ", found nothing";
      continue;
    }
    const Tensorf& found = source.at(name);
    if (found.shape() != param.tensor.shape()) {
      problems += "\n  " + name + ": expected " + tensor::to_string(param.tensor.shape()) + ", found " +
                  tensor::to_string(found.shape());
    }
  }
  if (!problems.empty()) throw ShapeError("checkpoint does not match network configuration:" + problems);
  for (const auto& param : target) {
    Tensorf dst = param.tensor;
    const auto src = source.at(prefix + param.name).data();
    std::copy(src.begin(), src.end(), dst.data().begin());
  }
}

}  // namespace ringgan::gan
