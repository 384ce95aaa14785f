#include "ringgan/gan/history_buffer.hpp"

#include "ringgan/error.hpp"

namespace ringgan::gan {

HistoryBuffer::HistoryBuffer(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), rng_(seed) {}

tensor::Tensorf HistoryBuffer::query(const tensor::Tensorf& image) {
  tensor::Tensorf fresh = image.detach();
  if (capacity_ == 0) return fresh;
  if (images_.size() < capacity_) {
    images_.push_back(fresh);
    return fresh;
  }
  if (rng_.uniform() < 0.5) {
    const auto slot = static_cast<std::size_t>(rng_.below(capacity_));
    tensor::Tensorf evicted = images_[slot];
    images_[slot] = fresh;
    return evicted;
  }
  return fresh;
}

void HistoryBuffer::restore(std::vector<tensor::Tensorf> images, const std::string& rng_state) {
  if (images.size() > capacity_) throw ValidationError("history buffer restore exceeds capacity");
  images_ = std::move(images);
  rng_.restore(rng_state);
}

}  // namespace ringgan::gan
