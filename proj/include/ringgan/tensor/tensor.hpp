#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ringgan::tensor {

using Shape = std::vector<std::int64_t>;

std::int64_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

template <typename T>
class Tensor;

namespace detail {

template <typename T>
struct Node;

template <typename T>
struct TensorImpl {
  Shape shape;
  std::vector<T> data;
  std::vector<T> grad;  // empty until a gradient arrives
  bool requires_grad = false;
  std::shared_ptr<Node<T>> node;  // null for leaves

  std::vector<T>& ensure_grad() {
    if (grad.empty()) grad.assign(data.size(), T(0));
    return grad;
  }
};

/// One recorded operation. Sequence numbers are drawn from a process-wide
/// counter, so creation order is a topological order of every graph and
/// backward can replay nodes in exactly reverse creation order.
template <typename T>
struct Node {
  std::uint64_t sequence = 0;
  const char* op = "";
  std::vector<std::shared_ptr<TensorImpl<T>>> inputs;
  /// Reads out.grad and accumulates into the inputs' grads.
  std::function<void(const TensorImpl<T>& out)> backward;
};

std::uint64_t next_sequence();

}  // namespace detail

/// Whether operations currently record graph nodes (thread local).
bool grad_enabled();

/// Disables graph recording for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

/// Dense row-major array with optional gradient. Copies share storage (handle
/// semantics) so graph nodes can refer to their inputs; use clone() for an
/// independent copy.
template <typename T>
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, T value, bool requires_grad = false);
  static Tensor from_data(Shape shape, std::vector<T> data, bool requires_grad = false);
  static Tensor scalar(T value, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const;
  std::int64_t dim(std::size_t axis) const { return shape().at(axis); }
  std::size_t rank() const { return shape().size(); }
  std::int64_t numel() const;

  std::span<T> data();
  std::span<const T> data() const;
  bool has_grad() const { return impl_ && !impl_->grad.empty(); }
  /// Gradient buffer; empty span when none has been accumulated.
  std::span<const T> grad() const;
  std::span<T> mutable_grad();
  void zero_grad();

  bool requires_grad() const { return impl_ && impl_->requires_grad; }
  void set_requires_grad(bool value);
  bool is_leaf() const { return !impl_ || !impl_->node; }

  /// Value of a one-element tensor.
  T item() const;

  /// Same values, no history, no gradient.
  Tensor detach() const;
  Tensor clone() const;

  /// Accumulates d(this)/d(leaf) into every requires_grad leaf reachable from
  /// this one-element tensor. Repeated calls add up.
  void backward() const;

  // Used by operation implementations.
  explicit Tensor(std::shared_ptr<detail::TensorImpl<T>> impl) : impl_(std::move(impl)) {}
  const std::shared_ptr<detail::TensorImpl<T>>& impl() const { return impl_; }

 private:
  std::shared_ptr<detail::TensorImpl<T>> impl_;
};

using Tensorf = Tensor<float>;
using Tensord = Tensor<double>;

/// Creates the result of an operation; records `backward` when grad mode is on
/// and any input requires grad.
template <typename T>
Tensor<T> make_result(Shape shape, std::vector<T> data, const char* op, std::vector<Tensor<T>> inputs,
                      std::function<void(const detail::TensorImpl<T>&)> backward);

}  // namespace ringgan::tensor
