#pragma once

#include <filesystem>
#include <optional>

#include "ringgan/gan/networks.hpp"
#include "ringgan/image.hpp"
#include "ringgan/tensor/checkpoint.hpp"

namespace ringgan::gan {

/// The sketch-to-render generator of a training checkpoint, frozen.
/// infer() is const and safe to call from several threads at once.
class InferenceModel {
 public:
  /// Builds G_AB from the checkpoint's recorded config, or from `expected`
  /// when given (a mismatch then lists expected and found shapes).
  explicit InferenceModel(const tensor::Checkpoint& checkpoint,
                          const std::optional<GeneratorConfig>& expected = std::nullopt);
  static InferenceModel load(const std::filesystem::path& path);

  /// Sketch in [0, 1] RGB to render, same dimensions.
  Image infer(const Image& sketch) const;

  /// Training image size recorded in the checkpoint.
  int image_size() const { return image_size_; }
  const GeneratorConfig& config() const { return generator_.config(); }

 private:
  Generator generator_;
  int image_size_ = 0;
};

}  // namespace ringgan::gan
