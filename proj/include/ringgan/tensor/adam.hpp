#pragma once

#include <vector>

#include "ringgan/tensor/tensor.hpp"

namespace ringgan::tensor {

struct AdamOptions {
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename T>
struct AdamState {
  std::int64_t step = 0;
  std::vector<std::vector<T>> first_moment;
  std::vector<std::vector<T>> second_moment;
  AdamOptions options;
};

/// One bias-corrected Adam update of every parameter from its accumulated
/// gradient (a parameter without a gradient counts as a zero gradient).
/// Moment buffers are sized on first use and must match afterwards.
template <typename T>
void adam_step(std::vector<Tensor<T>>& params, AdamState<T>& state, double lr);

/// Owns a parameter list and its Adam state.
template <typename T>
class Adam {
 public:
  explicit Adam(std::vector<Tensor<T>> params, AdamOptions options = {});

  void step(double lr) { adam_step(params_, state_, lr); }
  void zero_grad();

  std::vector<Tensor<T>>& params() { return params_; }
  AdamState<T>& state() { return state_; }
  const AdamState<T>& state() const { return state_; }

 private:
  std::vector<Tensor<T>> params_;
  AdamState<T> state_;
};

}  // namespace ringgan::tensor
