#include "ringgan/tensor/adam.hpp"

#include <cmath>

#include "ringgan/error.hpp"

namespace ringgan::tensor {

template <typename T>
void adam_step(std::vector<Tensor<T>>& params, AdamState<T>& state, double lr) {
  if (state.first_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.emplace_back(p.data().size(), T(0));
      state.second_moment.emplace_back(p.data().size(), T(0));
    }
  }
  if (state.first_moment.size() != params.size() || state.second_moment.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state tracks a different parameter list");
  }
  ++state.step;
  const AdamOptions& o = state.options;
  const double correction1 = 1.0 - std::pow(o.beta1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(o.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto data = params[k].data();
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    if (m.size() != data.size() || v.size() != data.size()) {
      throw ShapeError("adam_step: moment buffer " + std::to_string(k) + " does not match parameter shape " +
                       to_string(params[k].shape()));
    }
    const auto grad = params[k].grad();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double g = grad.empty() ? 0.0 : static_cast<double>(grad[i]);
      const double mi = o.beta1 * m[i] + (1.0 - o.beta1) * g;
      const double vi = o.beta2 * v[i] + (1.0 - o.beta2) * g * g;
      m[i] = static_cast<T>(mi);
      v[i] = static_cast<T>(vi);
      const double m_hat = mi / correction1;
      const double v_hat = vi / correction2;
      data[i] = static_cast<T>(data[i] - lr * m_hat / (std::sqrt(v_hat) + o.epsilon));
    }
  }
}

template <typename T>
Adam<T>::Adam(std::vector<Tensor<T>> params, AdamOptions options) : params_(std::move(params)) {
  state_.options = options;
}

template <typename T>
void Adam<T>::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

template void adam_step(std::vector<Tensor<float>>&, AdamState<float>&, double);
template void adam_step(std::vector<Tensor<double>>&, AdamState<double>&, double);
template class Adam<float>;
template class Adam<double>;

}  // namespace ringgan::tensor
