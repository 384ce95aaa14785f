#include "ringgan/tensor/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <unordered_set>

#include "ringgan/error.hpp"

namespace ringgan::tensor {
namespace {

thread_local bool g_grad_enabled = true;

}  // namespace

std::int64_t numel(const Shape& shape) {
  std::int64_t n = 1;
  for (const auto d : shape) {
    if (d < 0) throw ShapeError("negative dimension in shape " + to_string(shape));
    n *= d;
  }
  return n;
}

std::string to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

std::uint64_t detail::next_sequence() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

template <typename T>
Tensor<T> Tensor<T>::zeros(Shape shape, bool requires_grad) {
  return full(std::move(shape), T(0), requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::full(Shape shape, T value, bool requires_grad) {
  const auto n = static_cast<std::size_t>(tensor::numel(shape));
  return from_data(std::move(shape), std::vector<T>(n, value), requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::from_data(Shape shape, std::vector<T> data, bool requires_grad) {
  if (static_cast<std::size_t>(tensor::numel(shape)) != data.size()) {
    throw ShapeError("shape " + to_string(shape) + " does not match " + std::to_string(data.size()) + " values");
  }
  auto impl = std::make_shared<detail::TensorImpl<T>>();
  impl->shape = std::move(shape);
  impl->data = std::move(data);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

template <typename T>
Tensor<T> Tensor<T>::scalar(T value, bool requires_grad) {
  return from_data({}, {value}, requires_grad);
}

template <typename T>
const Shape& Tensor<T>::shape() const {
  if (!impl_) throw ShapeError("undefined tensor");
  return impl_->shape;
}

template <typename T>
std::int64_t Tensor<T>::numel() const {
  return static_cast<std::int64_t>(impl_ ? impl_->data.size() : 0);
}

template <typename T>
std::span<T> Tensor<T>::data() {
  return impl_->data;
}

template <typename T>
std::span<const T> Tensor<T>::data() const {
  return impl_->data;
}

template <typename T>
std::span<const T> Tensor<T>::grad() const {
  if (!impl_) return {};
  return impl_->grad;
}

template <typename T>
std::span<T> Tensor<T>::mutable_grad() {
  return impl_->ensure_grad();
}

template <typename T>
void Tensor<T>::zero_grad() {
  if (impl_ && !impl_->grad.empty()) std::fill(impl_->grad.begin(), impl_->grad.end(), T(0));
}

template <typename T>
void Tensor<T>::set_requires_grad(bool value) {
  if (!is_leaf()) throw ValidationError("requires_grad can only be changed on leaf tensors");
  impl_->requires_grad = value;
}

template <typename T>
T Tensor<T>::item() const {
  if (numel() != 1) throw ShapeError("item() on tensor of shape " + to_string(shape()));
  return impl_->data[0];
}

template <typename T>
Tensor<T> Tensor<T>::detach() const {
  auto impl = std::make_shared<detail::TensorImpl<T>>();
  impl->shape = impl_->shape;
  impl->data = impl_->data;
  return Tensor(std::move(impl));
}

template <typename T>
Tensor<T> Tensor<T>::clone() const {
  Tensor out = detach();
  out.impl_->requires_grad = impl_->requires_grad;
  out.impl_->grad = impl_->grad;
  return out;
}

template <typename T>
void Tensor<T>::backward() const {
  if (!impl_) throw ValidationError("backward on undefined tensor");
  if (impl_->data.size() != 1) throw ShapeError("backward needs a scalar loss, got shape " + to_string(shape()));
  if (!impl_->requires_grad) throw ValidationError("backward: loss does not depend on any tensor requiring grad");

  std::vector<detail::TensorImpl<T>*> order;
  std::unordered_set<const detail::TensorImpl<T>*> seen;
  std::vector<detail::TensorImpl<T>*> stack{impl_.get()};
  while (!stack.empty()) {
    auto* cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second || !cur->node) continue;
    order.push_back(cur);
    for (const auto& in : cur->node->inputs) {
      if (in->requires_grad) stack.push_back(in.get());
    }
  }
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->node->sequence > b->node->sequence; });

  for (auto* t : order) t->grad.assign(t->data.size(), T(0));
  impl_->ensure_grad()[0] += T(1);
  for (auto* t : order) t->node->backward(*t);
  // Intermediate gradients are not retained.
  for (auto* t : order) {
    if (t != impl_.get()) std::vector<T>().swap(t->grad);
  }
}

template <typename T>
Tensor<T> make_result(Shape shape, std::vector<T> data, const char* op, std::vector<Tensor<T>> inputs,
                      std::function<void(const detail::TensorImpl<T>&)> backward) {
  Tensor<T> out = Tensor<T>::from_data(std::move(shape), std::move(data));
  const bool track =
      grad_enabled() && std::any_of(inputs.begin(), inputs.end(), [](const Tensor<T>& t) { return t.requires_grad(); });
  if (!track) return out;
  auto node = std::make_shared<detail::Node<T>>();
  node->sequence = detail::next_sequence();
  node->op = op;
  node->inputs.reserve(inputs.size());
  for (const auto& in : inputs) node->inputs.push_back(in.impl());
  node->backward = std::move(backward);
  out.impl()->requires_grad = true;
  out.impl()->node = std::move(node);
  return out;
}

template class Tensor<float>;
template class Tensor<double>;
template Tensor<float> make_result(Shape, std::vector<float>, const char*, std::vector<Tensor<float>>,
                                   std::function<void(const detail::TensorImpl<float>&)>);
template Tensor<double> make_result(Shape, std::vector<double>, const char*, std::vector<Tensor<double>>,
                                    std::function<void(const detail::TensorImpl<double>&)>);

}  // namespace ringgan::tensor
