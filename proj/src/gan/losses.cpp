#include "ringgan/gan/losses.hpp"

#include <cmath>

#include "ringgan/error.hpp"

namespace ringgan::gan {

using tensor::Tensor;

void LossWeights::validate() const {
  if (!(lambda_cyc >= 0.0) || !std::isfinite(lambda_cyc)) throw ValidationError("lambda_cyc must be >= 0");
  if (!(lambda_ident >= 0.0) || !std::isfinite(lambda_ident)) throw ValidationError("lambda_ident must be >= 0");
}

void to_json(nlohmann::json& j, const LossWeights& w) {
  j = {{"lambda_cyc", w.lambda_cyc}, {"lambda_ident", w.lambda_ident}};
}

void from_json(const nlohmann::json& j, LossWeights& w) {
  w.lambda_cyc = j.value("lambda_cyc", 10.0);
  w.lambda_ident = j.value("lambda_ident", 0.1);
}

namespace {

template <typename T>
Tensor<T> against(const Tensor<T>& scores, T target, AdversarialMode mode) {
  return mode == AdversarialMode::kBce ? tensor::bce_loss(scores, target) : tensor::mse_loss(scores, target);
}

}  // namespace

template <typename T>
Tensor<T> cycle_loss(const Network<T>& g_ab, const Network<T>& g_ba, const Tensor<T>& x, const Tensor<T>& y) {
  return tensor::l1_loss(g_ba(g_ab(x)), x) + tensor::l1_loss(g_ab(g_ba(y)), y);
}

template <typename T>
Tensor<T> identity_loss(const Network<T>& g_ab, const Network<T>& g_ba, const Tensor<T>& x, const Tensor<T>& y) {
  return tensor::l1_loss(g_ab(y), y) + tensor::l1_loss(g_ba(x), x);
}

template <typename T>
Tensor<T> discriminator_loss(const Network<T>& d, const Tensor<T>& real, const Tensor<T>& fake, double scale,
                             AdversarialMode mode) {
  const Tensor<T> sum = against(d(real), T(1), mode) + against(d(fake.detach()), T(0), mode);
  return tensor::mul_scalar(sum, static_cast<T>(scale));
}

template <typename T>
Tensor<T> generator_adversarial_loss(const Network<T>& d, const Tensor<T>& fake, AdversarialMode mode) {
  return against(d(fake), T(1), mode);
}

template <typename T>
AdversarialLosses<T> adversarial_losses(const Network<T>& d, const Tensor<T>& real, const Tensor<T>& fake,
                                        double d_scale, AdversarialMode mode) {
  return {discriminator_loss(d, real, fake, d_scale, mode), generator_adversarial_loss(d, fake, mode)};
}

template <typename T>
Tensor<T> total_generator_loss(const Tensor<T>& gan_ab, const Tensor<T>& gan_ba, const Tensor<T>& cycle,
                               const Tensor<T>& identity, const LossWeights& weights) {
  return gan_ab + gan_ba + tensor::mul_scalar(cycle, static_cast<T>(weights.lambda_cyc)) +
         tensor::mul_scalar(identity, static_cast<T>(weights.lambda_ident));
}

#define RINGGAN_INSTANTIATE(T)                                                                                   \
  template Tensor<T> cycle_loss(const Network<T>&, const Network<T>&, const Tensor<T>&, const Tensor<T>&);       \
  template Tensor<T> identity_loss(const Network<T>&, const Network<T>&, const Tensor<T>&, const Tensor<T>&);    \
  template Tensor<T> discriminator_loss(const Network<T>&, const Tensor<T>&, const Tensor<T>&, double,           \
                                        AdversarialMode);                                                        \
  template Tensor<T> generator_adversarial_loss(const Network<T>&, const Tensor<T>&, AdversarialMode);           \
  template AdversarialLosses<T> adversarial_losses(const Network<T>&, const Tensor<T>&, const Tensor<T>&, double, \
                                                   AdversarialMode);                                             \
  template Tensor<T> total_generator_loss(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, \
                                          const LossWeights&);

RINGGAN_INSTANTIATE(float)
RINGGAN_INSTANTIATE(double)

#undef RINGGAN_INSTANTIATE

}  // namespace ringgan::gan
