#pragma once

#include <functional>

#include <json.hpp>

#include "ringgan/tensor/ops.hpp"

namespace ringgan::gan {

template <typename T>
using Network = std::function<tensor::Tensor<T>(const tensor::Tensor<T>&)>;

enum class AdversarialMode { kBce, kLeastSquares };

struct LossWeights {
  double lambda_cyc = 10.0;
  double lambda_ident = 0.1;

  void validate() const;
};

void to_json(nlohmann::json& j, const LossWeights& w);
void from_json(const nlohmann::json& j, LossWeights& w);

/// mean|G_BA(G_AB(x)) - x| + mean|G_AB(G_BA(y)) - y|
template <typename T>
tensor::Tensor<T> cycle_loss(const Network<T>& g_ab, const Network<T>& g_ba, const tensor::Tensor<T>& x,
                             const tensor::Tensor<T>& y);

/// mean|G_AB(y) - y| + mean|G_BA(x) - x|
template <typename T>
tensor::Tensor<T> identity_loss(const Network<T>& g_ab, const Network<T>& g_ba, const tensor::Tensor<T>& x,
                                const tensor::Tensor<T>& y);

/// scale * [L(D(real), 1) + L(D(fake), 0)] with `fake` detached, so only D
/// receives gradients.
template <typename T>
tensor::Tensor<T> discriminator_loss(const Network<T>& d, const tensor::Tensor<T>& real, const tensor::Tensor<T>& fake,
                                     double scale = 0.5, AdversarialMode mode = AdversarialMode::kBce);

/// L(D(fake), 1): the generator's non-saturating adversarial term.
template <typename T>
tensor::Tensor<T> generator_adversarial_loss(const Network<T>& d, const tensor::Tensor<T>& fake,
                                             AdversarialMode mode = AdversarialMode::kBce);

template <typename T>
struct AdversarialLosses {
  tensor::Tensor<T> d_loss;
  tensor::Tensor<T> g_loss;
};

template <typename T>
AdversarialLosses<T> adversarial_losses(const Network<T>& d, const tensor::Tensor<T>& real,
                                        const tensor::Tensor<T>& fake, double d_scale = 0.5,
                                        AdversarialMode mode = AdversarialMode::kBce);

/// gan_ab + gan_ba + lambda_cyc * cycle + lambda_ident * identity
template <typename T>
tensor::Tensor<T> total_generator_loss(const tensor::Tensor<T>& gan_ab, const tensor::Tensor<T>& gan_ba,
                                       const tensor::Tensor<T>& cycle, const tensor::Tensor<T>& identity,
                                       const LossWeights& weights = {});

}  // namespace ringgan::gan
