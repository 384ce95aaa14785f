#pragma once

#include <string>
#include <vector>

#include "ringgan/rng.hpp"
#include "ringgan/tensor/checkpoint.hpp"
#include "ringgan/tensor/ops.hpp"

namespace ringgan::gan {

using tensor::NamedTensor;
using tensor::Tensorf;

/// Convolution or transposed convolution with a bias. Weights are drawn from
/// N(0, 0.02), biases start at zero.
struct Conv {
  Tensorf weight;
  Tensorf bias;
  int stride = 1;
  int padding = 0;
  bool transposed = false;

  static Conv make(int in_channels, int out_channels, int kernel, int stride, int padding, Rng& rng,
                   bool transposed = false);
  Tensorf operator()(const Tensorf& x) const;
  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const;
};

/// Instance normalization with learned per-channel scale and shift.
struct InstanceNorm {
  Tensorf gamma;
  Tensorf beta;

  static InstanceNorm make(int channels);
  Tensorf operator()(const Tensorf& x) const;
  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const;
};

std::vector<Tensorf> tensors_of(const std::vector<NamedTensor>& named);

/// Copies values from `source` into the same-named tensors of `target`.
/// Throws ShapeError listing expected and found shapes on any mismatch.
void load_parameters(const std::vector<NamedTensor>& target, const tensor::Checkpoint& source,
                     const std::string& prefix);

}  // namespace ringgan::gan
