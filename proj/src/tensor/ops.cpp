#include "ringgan/tensor/ops.hpp"

#include <algorithm>
#include <cmath>

#include "ringgan/error.hpp"

namespace ringgan::tensor {
namespace {

template <typename T>
using ImplPtr = std::shared_ptr<detail::TensorImpl<T>>;

template <typename T>
void require_same_shape(const char* op, const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
}

/// Elementwise unary op whose derivative is expressed through (x, y).
template <typename T, typename Fwd, typename Deriv>
Tensor<T> unary(const char* op, const Tensor<T>& x, Fwd fwd, Deriv deriv) {
  std::vector<T> out(x.data().size());
  std::transform(x.data().begin(), x.data().end(), out.begin(), fwd);
  ImplPtr<T> in = x.impl();
  return make_result<T>(x.shape(), std::move(out), op, {x}, [in, deriv](const detail::TensorImpl<T>& o) {
    auto& g = in->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i] * deriv(in->data[i], o.data[i]);
  });
}

template <typename T>
constexpr T kProbFloor = T(1e-7);

}  // namespace

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape("add", a, b);
  std::vector<T> out(a.data().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
  ImplPtr<T> ia = a.impl();
  ImplPtr<T> ib = b.impl();
  return make_result<T>(a.shape(), std::move(out), "add", {a, b}, [ia, ib](const detail::TensorImpl<T>& o) {
    for (auto* in : {ia.get(), ib.get()}) {
      if (!in->requires_grad) continue;
      auto& g = in->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
    }
  });
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape("sub", a, b);
  std::vector<T> out(a.data().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] - b.data()[i];
  ImplPtr<T> ia = a.impl();
  ImplPtr<T> ib = b.impl();
  return make_result<T>(a.shape(), std::move(out), "sub", {a, b}, [ia, ib](const detail::TensorImpl<T>& o) {
    if (ia->requires_grad) {
      auto& g = ia->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
    }
    if (ib->requires_grad) {
      auto& g = ib->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= o.grad[i];
    }
  });
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape("mul", a, b);
  std::vector<T> out(a.data().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];
  ImplPtr<T> ia = a.impl();
  ImplPtr<T> ib = b.impl();
  return make_result<T>(a.shape(), std::move(out), "mul", {a, b}, [ia, ib](const detail::TensorImpl<T>& o) {
    if (ia->requires_grad) {
      auto& g = ia->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i] * ib->data[i];
    }
    if (ib->requires_grad) {
      auto& g = ib->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i] * ia->data[i];
    }
  });
}

template <typename T>
Tensor<T> add_scalar(const Tensor<T>& a, T value) {
  return unary<T>("add_scalar", a, [value](T x) { return x + value; }, [](T, T) { return T(1); });
}

template <typename T>
Tensor<T> mul_scalar(const Tensor<T>& a, T value) {
  return unary<T>("mul_scalar", a, [value](T x) { return x * value; }, [value](T, T) { return value; });
}

template <typename T>
Tensor<T> sum(const Tensor<T>& a) {
  T total = T(0);
  for (const T v : a.data()) total += v;
  ImplPtr<T> in = a.impl();
  return make_result<T>({}, {total}, "sum", {a}, [in](const detail::TensorImpl<T>& o) {
    auto& g = in->ensure_grad();
    for (auto& v : g) v += o.grad[0];
  });
}

template <typename T>
Tensor<T> mean(const Tensor<T>& a) {
  if (a.numel() == 0) throw ShapeError("mean of empty tensor");
  T total = T(0);
  for (const T v : a.data()) total += v;
  const T scale = T(1) / static_cast<T>(a.numel());
  ImplPtr<T> in = a.impl();
  return make_result<T>({}, {total * scale}, "mean", {a}, [in, scale](const detail::TensorImpl<T>& o) {
    auto& g = in->ensure_grad();
    for (auto& v : g) v += o.grad[0] * scale;
  });
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
  return unary<T>("relu", x, [](T v) { return v > T(0) ? v : T(0); }, [](T v, T) { return v > T(0) ? T(1) : T(0); });
}

template <typename T>
Tensor<T> leaky_relu(const Tensor<T>& x, T slope) {
  return unary<T>(
      "leaky_relu", x, [slope](T v) { return v > T(0) ? v : slope * v; },
      [slope](T v, T) { return v > T(0) ? T(1) : slope; });
}

template <typename T>
Tensor<T> tanh(const Tensor<T>& x) {
  return unary<T>("tanh", x, [](T v) { return std::tanh(v); }, [](T, T y) { return T(1) - y * y; });
}

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x) {
  return unary<T>(
      "sigmoid", x,
      [](T v) {
        if (v >= T(0)) return T(1) / (T(1) + std::exp(-v));
        const T e = std::exp(v);
        return e / (T(1) + e);
      },
      [](T, T y) { return y * (T(1) - y); });
}

template <typename T>
Tensor<T> l1_loss(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape("l1_loss", a, b);
  T total = T(0);
  for (std::size_t i = 0; i < a.data().size(); ++i) total += std::abs(a.data()[i] - b.data()[i]);
  const T scale = T(1) / static_cast<T>(a.numel());
  ImplPtr<T> ia = a.impl();
  ImplPtr<T> ib = b.impl();
  return make_result<T>({}, {total * scale}, "l1_loss", {a, b}, [ia, ib, scale](const detail::TensorImpl<T>& o) {
    const T g0 = o.grad[0] * scale;
    for (std::size_t i = 0; i < ia->data.size(); ++i) {
      const T d = ia->data[i] - ib->data[i];
      const T s = d > T(0) ? g0 : (d < T(0) ? -g0 : T(0));
      if (ia->requires_grad) ia->ensure_grad()[i] += s;
      if (ib->requires_grad) ib->ensure_grad()[i] -= s;
    }
  });
}

template <typename T>
Tensor<T> mse_loss(const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape("mse_loss", a, b);
  T total = T(0);
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const T d = a.data()[i] - b.data()[i];
    total += d * d;
  }
  const T scale = T(1) / static_cast<T>(a.numel());
  ImplPtr<T> ia = a.impl();
  ImplPtr<T> ib = b.impl();
  return make_result<T>({}, {total * scale}, "mse_loss", {a, b}, [ia, ib, scale](const detail::TensorImpl<T>& o) {
    const T g0 = o.grad[0] * scale * T(2);
    for (std::size_t i = 0; i < ia->data.size(); ++i) {
      const T d = g0 * (ia->data[i] - ib->data[i]);
      if (ia->requires_grad) ia->ensure_grad()[i] += d;
      if (ib->requires_grad) ib->ensure_grad()[i] -= d;
    }
  });
}

template <typename T>
Tensor<T> mse_loss(const Tensor<T>& pred, T target) {
  return mse_loss(pred, Tensor<T>::full(pred.shape(), target));
}

template <typename T>
Tensor<T> bce_loss(const Tensor<T>& pred, const Tensor<T>& target) {
  require_same_shape("bce_loss", pred, target);
  const T lo = kProbFloor<T>;
  const T hi = T(1) - kProbFloor<T>;
  T total = T(0);
  for (std::size_t i = 0; i < pred.data().size(); ++i) {
    const T p = std::clamp(pred.data()[i], lo, hi);
    const T t = target.data()[i];
    total -= t * std::log(p) + (T(1) - t) * std::log(T(1) - p);
  }
  const T scale = T(1) / static_cast<T>(pred.numel());
  ImplPtr<T> ip = pred.impl();
  ImplPtr<T> it = target.impl();
  return make_result<T>({}, {total * scale}, "bce_loss", {pred, target},
                        [ip, it, scale, lo, hi](const detail::TensorImpl<T>& o) {
                          const T g0 = o.grad[0] * scale;
                          for (std::size_t i = 0; i < ip->data.size(); ++i) {
                            const T raw = ip->data[i];
                            const T p = std::clamp(raw, lo, hi);
                            const T t = it->data[i];
                            if (ip->requires_grad && raw >= lo && raw <= hi) {
                              ip->ensure_grad()[i] += g0 * (p - t) / (p * (T(1) - p));
                            }
                            if (it->requires_grad) it->ensure_grad()[i] += g0 * (std::log(T(1) - p) - std::log(p));
                          }
                        });
}

template <typename T>
Tensor<T> bce_loss(const Tensor<T>& pred, T target) {
  return bce_loss(pred, Tensor<T>::full(pred.shape(), target));
}

template <typename T>
Tensor<T> instance_norm(const Tensor<T>& input, const Tensor<T>& gamma, const Tensor<T>& beta, T eps) {
  if (input.rank() != 4) throw ShapeError("instance_norm: expected [N,C,H,W], got " + to_string(input.shape()));
  const std::int64_t n = input.dim(0);
  const std::int64_t c = input.dim(1);
  const std::int64_t m = input.dim(2) * input.dim(3);
  if (m < 2) throw ShapeError("instance_norm: needs H*W >= 2, got " + to_string(input.shape()));
  if (gamma.shape() != Shape{c} || beta.shape() != Shape{c}) {
    throw ShapeError("instance_norm: affine parameters must be [" + std::to_string(c) + "], got " +
                     to_string(gamma.shape()) + " and " + to_string(beta.shape()));
  }
  std::vector<T> out(input.data().size());
  std::vector<T> normalized(out.size());
  std::vector<T> inv_std(static_cast<std::size_t>(n * c));
  const auto x = input.data();
  for (std::int64_t plane = 0; plane < n * c; ++plane) {
    const std::size_t base = static_cast<std::size_t>(plane * m);
    T mu = T(0);
    for (std::int64_t i = 0; i < m; ++i) mu += x[base + i];
    mu /= static_cast<T>(m);
    T var = T(0);
    for (std::int64_t i = 0; i < m; ++i) {
      const T d = x[base + i] - mu;
      var += d * d;
    }
    var /= static_cast<T>(m);
    const T is = T(1) / std::sqrt(var + eps);
    inv_std[plane] = is;
    const T g = gamma.data()[plane % c];
    const T b = beta.data()[plane % c];
    for (std::int64_t i = 0; i < m; ++i) {
      normalized[base + i] = (x[base + i] - mu) * is;
      out[base + i] = g * normalized[base + i] + b;
    }
  }
  ImplPtr<T> ix = input.impl();
  ImplPtr<T> ig = gamma.impl();
  ImplPtr<T> ib = beta.impl();
  return make_result<T>(
      input.shape(), std::move(out), "instance_norm", {input, gamma, beta},
      [ix, ig, ib, normalized = std::move(normalized), inv_std = std::move(inv_std), n, c,
       m](const detail::TensorImpl<T>& o) {
        for (std::int64_t plane = 0; plane < n * c; ++plane) {
          const std::size_t base = static_cast<std::size_t>(plane * m);
          const std::int64_t ch = plane % c;
          T sum_dy = T(0);
          T sum_dy_xhat = T(0);
          for (std::int64_t i = 0; i < m; ++i) {
            sum_dy += o.grad[base + i];
            sum_dy_xhat += o.grad[base + i] * normalized[base + i];
          }
          if (ig->requires_grad) ig->ensure_grad()[ch] += sum_dy_xhat;
          if (ib->requires_grad) ib->ensure_grad()[ch] += sum_dy;
          if (!ix->requires_grad) continue;
          auto& gx = ix->ensure_grad();
          const T g = ig->data[ch];
          const T k = g * inv_std[plane] / static_cast<T>(m);
          for (std::int64_t i = 0; i < m; ++i) {
            gx[base + i] += k * (static_cast<T>(m) * o.grad[base + i] - sum_dy - normalized[base + i] * sum_dy_xhat);
          }
        }
      });
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.rank() != 4 || b.rank() != 4 || a.dim(0) != b.dim(0) || a.dim(2) != b.dim(2) || a.dim(3) != b.dim(3)) {
    throw ShapeError("concat_channels: incompatible shapes " + to_string(a.shape()) + " and " + to_string(b.shape()));
  }
  const std::int64_t n = a.dim(0);
  const std::size_t plane_a = static_cast<std::size_t>(a.dim(1) * a.dim(2) * a.dim(3));
  const std::size_t plane_b = static_cast<std::size_t>(b.dim(1) * b.dim(2) * b.dim(3));
  std::vector<T> out;
  out.reserve(a.data().size() + b.data().size());
  for (std::int64_t s = 0; s < n; ++s) {
    out.insert(out.end(), a.data().begin() + s * plane_a, a.data().begin() + (s + 1) * plane_a);
    out.insert(out.end(), b.data().begin() + s * plane_b, b.data().begin() + (s + 1) * plane_b);
  }
  ImplPtr<T> ia = a.impl();
  ImplPtr<T> ib = b.impl();
  return make_result<T>({n, a.dim(1) + b.dim(1), a.dim(2), a.dim(3)}, std::move(out), "concat_channels", {a, b},
                        [ia, ib, n, plane_a, plane_b](const detail::TensorImpl<T>& o) {
                          for (std::int64_t s = 0; s < n; ++s) {
                            const std::size_t base = static_cast<std::size_t>(s) * (plane_a + plane_b);
                            if (ia->requires_grad) {
                              auto& g = ia->ensure_grad();
                              for (std::size_t i = 0; i < plane_a; ++i) g[s * plane_a + i] += o.grad[base + i];
                            }
                            if (ib->requires_grad) {
                              auto& g = ib->ensure_grad();
                              for (std::size_t i = 0; i < plane_b; ++i) g[s * plane_b + i] += o.grad[base + plane_a + i];
                            }
                          }
                        });
}

#define RINGGAN_INSTANTIATE(T)                                                                   \
  template Tensor<T> add(const Tensor<T>&, const Tensor<T>&);                                    \
  template Tensor<T> sub(const Tensor<T>&, const Tensor<T>&);                                    \
  template Tensor<T> mul(const Tensor<T>&, const Tensor<T>&);                                    \
  template Tensor<T> add_scalar(const Tensor<T>&, T);                                            \
  template Tensor<T> mul_scalar(const Tensor<T>&, T);                                            \
  template Tensor<T> sum(const Tensor<T>&);                                                      \
  template Tensor<T> mean(const Tensor<T>&);                                                     \
  template Tensor<T> relu(const Tensor<T>&);                                                     \
  template Tensor<T> leaky_relu(const Tensor<T>&, T);                                            \
  template Tensor<T> tanh(const Tensor<T>&);                                                     \
  template Tensor<T> sigmoid(const Tensor<T>&);                                                  \
  template Tensor<T> l1_loss(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> mse_loss(const Tensor<T>&, const Tensor<T>&);                               \
  template Tensor<T> mse_loss(const Tensor<T>&, T);                                              \
  template Tensor<T> bce_loss(const Tensor<T>&, const Tensor<T>&);                               \
  template Tensor<T> bce_loss(const Tensor<T>&, T);                                              \
  template Tensor<T> instance_norm(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, T);     \
  template Tensor<T> concat_channels(const Tensor<T>&, const Tensor<T>&);

RINGGAN_INSTANTIATE(float)
RINGGAN_INSTANTIATE(double)

#undef RINGGAN_INSTANTIATE

}  // namespace ringgan::tensor
