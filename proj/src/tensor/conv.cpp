#include <Eigen/Core>

#include "ringgan/error.hpp"
#include "ringgan/tensor/ops.hpp"

namespace ringgan::tensor {
namespace {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatrixMap = Eigen::Map<Matrix<T>>;
template <typename T>
using ConstMatrixMap = Eigen::Map<const Matrix<T>>;

/// Geometry of a strided, zero-padded window sweep over an image of size
/// (height, width) that produces (out_h, out_w) positions.
struct Window {
  std::int64_t channels;
  std::int64_t height;
  std::int64_t width;
  std::int64_t kernel_h;
  std::int64_t kernel_w;
  std::int64_t out_h;
  std::int64_t out_w;
  int stride;
  int padding;

  std::int64_t rows() const { return channels * kernel_h * kernel_w; }
  std::int64_t cols() const { return out_h * out_w; }
};

/// image [C, H, W] -> columns [C*kH*kW, outH*outW]
template <typename T>
void im2col(const T* image, const Window& w, T* cols) {
  for (std::int64_t c = 0; c < w.channels; ++c) {
    for (std::int64_t ky = 0; ky < w.kernel_h; ++ky) {
      for (std::int64_t kx = 0; kx < w.kernel_w; ++kx) {
        T* row = cols + ((c * w.kernel_h + ky) * w.kernel_w + kx) * w.cols();
        for (std::int64_t oy = 0; oy < w.out_h; ++oy) {
          const std::int64_t iy = oy * w.stride - w.padding + ky;
          for (std::int64_t ox = 0; ox < w.out_w; ++ox) {
            const std::int64_t ix = ox * w.stride - w.padding + kx;
            const bool inside = iy >= 0 && iy < w.height && ix >= 0 && ix < w.width;
            row[oy * w.out_w + ox] = inside ? image[(c * w.height + iy) * w.width + ix] : T(0);
          }
        }
      }
    }
  }
}

/// Scatter-add inverse of im2col: columns -> image (accumulating).
template <typename T>
void col2im(const T* cols, const Window& w, T* image) {
  for (std::int64_t c = 0; c < w.channels; ++c) {
    for (std::int64_t ky = 0; ky < w.kernel_h; ++ky) {
      for (std::int64_t kx = 0; kx < w.kernel_w; ++kx) {
        const T* row = cols + ((c * w.kernel_h + ky) * w.kernel_w + kx) * w.cols();
        for (std::int64_t oy = 0; oy < w.out_h; ++oy) {
          const std::int64_t iy = oy * w.stride - w.padding + ky;
          if (iy < 0 || iy >= w.height) continue;
          for (std::int64_t ox = 0; ox < w.out_w; ++ox) {
            const std::int64_t ix = ox * w.stride - w.padding + kx;
            if (ix < 0 || ix >= w.width) continue;
            image[(c * w.height + iy) * w.width + ix] += row[oy * w.out_w + ox];
          }
        }
      }
    }
  }
}

template <typename T>
void check_conv_args(const char* op, const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias,
                     std::int64_t weight_in_axis, std::int64_t out_channels, int stride, int padding) {
  if (input.rank() != 4 || weight.rank() != 4) {
    throw ShapeError(std::string(op) + ": expected 4-D input and weight, got " + to_string(input.shape()) + " and " +
                     to_string(weight.shape()));
  }
  if (input.dim(1) != weight.dim(static_cast<std::size_t>(weight_in_axis))) {
    throw ShapeError(std::string(op) + ": channel mismatch between input " + to_string(input.shape()) +
                     " and weight " + to_string(weight.shape()));
  }
  if (bias.defined() && bias.shape() != Shape{out_channels}) {
    throw ShapeError(std::string(op) + ": bias " + to_string(bias.shape()) + " does not match weight " +
                     to_string(weight.shape()));
  }
  if (stride < 1 || padding < 0) throw ShapeError(std::string(op) + ": stride must be >= 1 and padding >= 0");
}

}  // namespace

template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias, int stride, int padding) {
  check_conv_args("conv2d", input, weight, bias, 1, weight.rank() == 4 ? weight.dim(0) : 0, stride, padding);
  const std::int64_t n = input.dim(0);
  const std::int64_t f = weight.dim(0);
  Window w{input.dim(1), input.dim(2), input.dim(3), weight.dim(2), weight.dim(3), 0, 0, stride, padding};
  if (w.kernel_h > w.height + 2 * padding || w.kernel_w > w.width + 2 * padding) {
    throw ShapeError("conv2d: kernel " + to_string(weight.shape()) + " larger than padded input " +
                     to_string(input.shape()));
  }
  w.out_h = (w.height + 2 * padding - w.kernel_h) / stride + 1;
  w.out_w = (w.width + 2 * padding - w.kernel_w) / stride + 1;

  const std::int64_t in_plane = w.channels * w.height * w.width;
  const std::int64_t out_plane = f * w.cols();
  std::vector<T> out(static_cast<std::size_t>(n * out_plane));
  Matrix<T> cols(w.rows(), w.cols());
  ConstMatrixMap<T> wmat(weight.data().data(), f, w.rows());
  for (std::int64_t s = 0; s < n; ++s) {
    im2col(input.data().data() + s * in_plane, w, cols.data());
    MatrixMap<T> omat(out.data() + s * out_plane, f, w.cols());
    omat.noalias() = wmat * cols;
    if (bias.defined()) {
      for (std::int64_t k = 0; k < f; ++k) omat.row(k).array() += bias.data()[k];
    }
  }

  auto ix = input.impl();
  auto iw = weight.impl();
  auto ib = bias.defined() ? bias.impl() : nullptr;
  std::vector<Tensor<T>> inputs{input, weight};
  if (bias.defined()) inputs.push_back(bias);
  return make_result<T>({n, f, w.out_h, w.out_w}, std::move(out), "conv2d", std::move(inputs),
                        [ix, iw, ib, w, n, f, in_plane, out_plane](const detail::TensorImpl<T>& o) {
                          Matrix<T> cols(w.rows(), w.cols());
                          ConstMatrixMap<T> wmat(iw->data.data(), f, w.rows());
                          for (std::int64_t s = 0; s < n; ++s) {
                            ConstMatrixMap<T> gout(o.grad.data() + s * out_plane, f, w.cols());
                            if (iw->requires_grad) {
                              im2col(ix->data.data() + s * in_plane, w, cols.data());
                              MatrixMap<T> gw(iw->ensure_grad().data(), f, w.rows());
                              gw.noalias() += gout * cols.transpose();
                            }
                            if (ib && ib->requires_grad) {
                              auto& gb = ib->ensure_grad();
                              for (std::int64_t k = 0; k < f; ++k) gb[k] += gout.row(k).sum();
                            }
                            if (ix->requires_grad) {
                              cols.noalias() = wmat.transpose() * gout;
                              col2im(cols.data(), w, ix->ensure_grad().data() + s * in_plane);
                            }
                          }
                        });
}

template <typename T>
Tensor<T> conv_transpose2d(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias, int stride,
                           int padding) {
  check_conv_args("conv_transpose2d", input, weight, bias, 0, weight.rank() == 4 ? weight.dim(1) : 0, stride,
                  padding);
  const std::int64_t n = input.dim(0);
  const std::int64_t c = input.dim(1);
  const std::int64_t f = weight.dim(1);
  const std::int64_t h = input.dim(2);
  const std::int64_t wd = input.dim(3);
  const std::int64_t out_h = (h - 1) * stride - 2 * padding + weight.dim(2);
  const std::int64_t out_w = (wd - 1) * stride - 2 * padding + weight.dim(3);
  if (out_h < 1 || out_w < 1) {
    throw ShapeError("conv_transpose2d: empty output for input " + to_string(input.shape()) + " and weight " +
                     to_string(weight.shape()));
  }
  // The output plays the role of a conv2d input whose sweep lands on (h, wd).
  const Window w{f, out_h, out_w, weight.dim(2), weight.dim(3), h, wd, stride, padding};

  const std::int64_t in_plane = c * h * wd;
  const std::int64_t out_plane = f * out_h * out_w;
  std::vector<T> out(static_cast<std::size_t>(n * out_plane), T(0));
  Matrix<T> cols(w.rows(), w.cols());
  ConstMatrixMap<T> wmat(weight.data().data(), c, w.rows());
  for (std::int64_t s = 0; s < n; ++s) {
    ConstMatrixMap<T> xmat(input.data().data() + s * in_plane, c, h * wd);
    cols.noalias() = wmat.transpose() * xmat;
    T* dst = out.data() + s * out_plane;
    col2im(cols.data(), w, dst);
    if (bias.defined()) {
      for (std::int64_t k = 0; k < f; ++k) {
        for (std::int64_t i = 0; i < out_h * out_w; ++i) dst[k * out_h * out_w + i] += bias.data()[k];
      }
    }
  }

  auto ix = input.impl();
  auto iw = weight.impl();
  auto ib = bias.defined() ? bias.impl() : nullptr;
  std::vector<Tensor<T>> inputs{input, weight};
  if (bias.defined()) inputs.push_back(bias);
  return make_result<T>({n, f, out_h, out_w}, std::move(out), "conv_transpose2d", std::move(inputs),
                        [ix, iw, ib, w, n, c, in_plane, out_plane](const detail::TensorImpl<T>& o) {
                          Matrix<T> cols(w.rows(), w.cols());
                          ConstMatrixMap<T> wmat(iw->data.data(), c, w.rows());
                          const std::int64_t plane = w.height * w.width;
                          for (std::int64_t s = 0; s < n; ++s) {
                            im2col(o.grad.data() + s * out_plane, w, cols.data());
                            if (ix->requires_grad) {
                              MatrixMap<T> gx(ix->ensure_grad().data() + s * in_plane, c, w.cols());
                              gx.noalias() += wmat * cols;
                            }
                            if (iw->requires_grad) {
                              ConstMatrixMap<T> xmat(ix->data.data() + s * in_plane, c, w.cols());
                              MatrixMap<T> gw(iw->ensure_grad().data(), c, w.rows());
                              gw.noalias() += xmat * cols.transpose();
                            }
                            if (ib && ib->requires_grad) {
                              auto& gb = ib->ensure_grad();
                              const T* g = o.grad.data() + s * out_plane;
                              for (std::int64_t k = 0; k < w.channels; ++k) {
                                for (std::int64_t i = 0; i < plane; ++i) gb[k] += g[k * plane + i];
                              }
                            }
                          }
                        });
}

template Tensor<float> conv2d(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&, int, int);
template Tensor<double> conv2d(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&, int, int);
template Tensor<float> conv_transpose2d(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&, int, int);
template Tensor<double> conv_transpose2d(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&, int,
                                         int);

}  // namespace ringgan::tensor
