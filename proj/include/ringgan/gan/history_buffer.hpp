#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ringgan/rng.hpp"
#include "ringgan/tensor/tensor.hpp"

namespace ringgan::gan {

/// Pool of past generated images shown to a discriminator. Until full it
/// stores and returns each image; afterwards it returns, with equal
/// probability, either the new image or a random stored one that the new
/// image replaces. Capacity 0 passes images through.
class HistoryBuffer {
 public:
  HistoryBuffer(std::size_t capacity, std::uint64_t seed);

  /// Stores a detached copy; the returned tensor is detached too.
  tensor::Tensorf query(const tensor::Tensorf& image);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return images_.size(); }
  const std::vector<tensor::Tensorf>& images() const { return images_; }

  std::string rng_state() const { return rng_.state(); }
  /// Reinstates saved contents and sampler state.
  void restore(std::vector<tensor::Tensorf> images, const std::string& rng_state);

 private:
  std::size_t capacity_;
  Rng rng_;
  std::vector<tensor::Tensorf> images_;
};

}  // namespace ringgan::gan
