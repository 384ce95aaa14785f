#include "ringgan/data/stream.hpp"

#include <algorithm>
#include <numeric>

#include "ringgan/data/loader.hpp"
#include "ringgan/error.hpp"
#include "ringgan/rng.hpp"

namespace ringgan::data {

UnpairedStream::UnpairedStream(DatasetManifest a, DatasetManifest b, std::filesystem::path root, std::uint64_t seed,
                               int image_size, int batch_size)
    : a_(std::move(a)), b_(std::move(b)), root_(std::move(root)), seed_(seed), image_size_(image_size),
      batch_size_(batch_size) {
  if (a_.entries.empty() || b_.entries.empty()) throw ValidationError("unpaired stream needs two non-empty manifests");
  if (image_size_ < 1) throw ValidationError("image size must be >= 1");
  if (batch_size_ < 1) throw ValidationError("batch size must be >= 1");
  if (steps_per_epoch() < 1) throw ValidationError("batch size exceeds the smaller domain");
}

UnpairedStream UnpairedStream::open(const std::filesystem::path& root, std::uint64_t seed, int image_size,
                                    int batch_size) {
  return UnpairedStream(read_manifest(manifest_path(root, Domain::kA)), read_manifest(manifest_path(root, Domain::kB)),
                        root, seed, image_size, batch_size);
}

std::int64_t UnpairedStream::steps_per_epoch() const {
  return static_cast<std::int64_t>(std::min(a_.entries.size(), b_.entries.size())) / batch_size_;
}

std::vector<std::size_t> UnpairedStream::order(int epoch, Domain domain) const {
  std::vector<std::size_t> idx(manifest(domain).entries.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(derive_seed(derive_seed(seed_, static_cast<std::uint64_t>(epoch), stream_tag("EPOCH")),
                      domain == Domain::kA ? 0 : 1, stream_tag("SHUF")));
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  idx.resize(static_cast<std::size_t>(steps_per_epoch() * batch_size_));
  return idx;
}

tensor::Tensorf UnpairedStream::load(Domain domain, const std::vector<std::size_t>& indices) const {
  const auto& entries = manifest(domain).entries;
  std::vector<float> data;
  for (std::size_t i : indices) {
    const ImageSample s = load_sample(root_ / entries[i].file, image_size_, domain, i);
    data.insert(data.end(), s.pixels.data().begin(), s.pixels.data().end());
  }
  return tensor::Tensorf::from_data({static_cast<std::int64_t>(indices.size()), 3, image_size_, image_size_},
                                    std::move(data));
}

std::pair<tensor::Tensorf, tensor::Tensorf> UnpairedStream::batch(int epoch, std::int64_t index) const {
  if (index < 0 || index >= steps_per_epoch()) throw ValidationError("batch index outside epoch");
  const auto oa = order(epoch, Domain::kA);
  const auto ob = order(epoch, Domain::kB);
  const auto first = static_cast<std::size_t>(index * batch_size_);
  const auto last = first + static_cast<std::size_t>(batch_size_);
  return {load(Domain::kA, {oa.begin() + first, oa.begin() + last}),
          load(Domain::kB, {ob.begin() + first, ob.begin() + last})};
}

}  // namespace ringgan::data
