#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "ringgan/data/dataset.hpp"
#include "ringgan/tensor/tensor.hpp"

namespace ringgan::data {

/// Epoch-wise unpaired batches: each epoch shuffles each domain
/// independently, pairs them by position and truncates to the shorter one.
class UnpairedStream {
 public:
  UnpairedStream(DatasetManifest a, DatasetManifest b, std::filesystem::path root, std::uint64_t seed,
                 int image_size, int batch_size = 1);

  /// Loads both manifests from a dataset directory.
  static UnpairedStream open(const std::filesystem::path& root, std::uint64_t seed, int image_size,
                             int batch_size = 1);

  std::int64_t steps_per_epoch() const;

  /// Entry indices of `domain` in presentation order for `epoch`, already
  /// truncated to steps_per_epoch() * batch_size.
  std::vector<std::size_t> order(int epoch, Domain domain) const;

  /// ([N, 3, S, S], [N, 3, S, S]) for step `index` of `epoch`.
  std::pair<tensor::Tensorf, tensor::Tensorf> batch(int epoch, std::int64_t index) const;

  const DatasetManifest& manifest(Domain d) const { return d == Domain::kA ? a_ : b_; }

 private:
  tensor::Tensorf load(Domain domain, const std::vector<std::size_t>& indices) const;

  DatasetManifest a_;
  DatasetManifest b_;
  std::filesystem::path root_;
  std::uint64_t seed_;
  int image_size_;
  int batch_size_;
};

}  // namespace ringgan::data
