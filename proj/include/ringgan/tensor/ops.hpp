#pragma once

#include "ringgan/tensor/tensor.hpp"

namespace ringgan::tensor {

// Elementwise arithmetic. Binary operations require identical shapes.
template <typename T> Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> add_scalar(const Tensor<T>& a, T value);
template <typename T> Tensor<T> mul_scalar(const Tensor<T>& a, T value);

template <typename T> Tensor<T> operator+(const Tensor<T>& a, const Tensor<T>& b) { return add(a, b); }
template <typename T> Tensor<T> operator-(const Tensor<T>& a, const Tensor<T>& b) { return sub(a, b); }
template <typename T> Tensor<T> operator*(const Tensor<T>& a, const Tensor<T>& b) { return mul(a, b); }
template <typename T> Tensor<T> operator*(T s, const Tensor<T>& a) { return mul_scalar(a, s); }
template <typename T> Tensor<T> operator-(const Tensor<T>& a) { return mul_scalar(a, T(-1)); }

// Reductions to a scalar (shape []).
template <typename T> Tensor<T> sum(const Tensor<T>& a);
template <typename T> Tensor<T> mean(const Tensor<T>& a);

// Activations.
template <typename T> Tensor<T> relu(const Tensor<T>& x);
template <typename T> Tensor<T> leaky_relu(const Tensor<T>& x, T slope = T(0.2));
template <typename T> Tensor<T> tanh(const Tensor<T>& x);
template <typename T> Tensor<T> sigmoid(const Tensor<T>& x);

// Mean-reduced losses.
template <typename T> Tensor<T> l1_loss(const Tensor<T>& a, const Tensor<T>& b);
template <typename T> Tensor<T> mse_loss(const Tensor<T>& a, const Tensor<T>& b);
/// -mean(t log p + (1 - t) log(1 - p)), p clamped to [1e-7, 1 - 1e-7].
template <typename T> Tensor<T> bce_loss(const Tensor<T>& pred, const Tensor<T>& target);
/// BCE against a constant target for every element.
template <typename T> Tensor<T> bce_loss(const Tensor<T>& pred, T target);
/// mean((p - t)^2) against a constant target.
template <typename T> Tensor<T> mse_loss(const Tensor<T>& pred, T target);

/// Cross-correlation with zero padding.
///   input [N, C, H, W], weight [F, C, kH, kW], bias [F] or undefined
///   output [N, F, (H + 2p - kH) / s + 1, (W + 2p - kW) / s + 1]
template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias, int stride, int padding);

/// Adjoint of conv2d with respect to its input.
///   input [N, C, H, W], weight [C, F, kH, kW], bias [F] or undefined
///   output [N, F, (H - 1) s - 2p + kH, (W - 1) s - 2p + kW]
template <typename T>
Tensor<T> conv_transpose2d(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias, int stride,
                           int padding);

/// Per (sample, channel) standardization over H x W followed by gamma, beta [C].
template <typename T>
Tensor<T> instance_norm(const Tensor<T>& input, const Tensor<T>& gamma, const Tensor<T>& beta, T eps = T(1e-5));

/// Concatenates two [N, *, H, W] tensors along the channel axis.
template <typename T> Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);

}  // namespace ringgan::tensor
