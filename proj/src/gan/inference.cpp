#include "ringgan/gan/inference.hpp"

#include "ringgan/error.hpp"
#include "ringgan/gan/trainer.hpp"
#include "ringgan/tensor/image_tensor.hpp"

namespace ringgan::gan {

namespace {

const nlohmann::json& config_of(const tensor::Checkpoint& ck) {
  if (!ck.metadata.contains("config")) throw IoError("checkpoint carries no network configuration");
  return ck.metadata.at("config");
}

GeneratorConfig recorded_generator(const tensor::Checkpoint& ck) {
  try {
    return config_of(ck).at("generator").get<GeneratorConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint generator config: ") + e.what());
  }
}

}  // namespace

InferenceModel::InferenceModel(const tensor::Checkpoint& checkpoint, const std::optional<GeneratorConfig>& expected)
    : generator_(expected ? *expected : recorded_generator(checkpoint), 0) {
  load_parameters(generator_.named_parameters(), checkpoint, "g_ab/");
  image_size_ = config_of(checkpoint).value("image_size", 0);
}

InferenceModel InferenceModel::load(const std::filesystem::path& path) {
  return InferenceModel(tensor::load_checkpoint(path));
}

Image InferenceModel::infer(const Image& sketch) const {
  if (sketch.empty()) throw ValidationError("cannot infer from an empty image");
  tensor::NoGradGuard guard;
  return tensor::tensor_to_image(generator_.forward(tensor::image_to_tensor(sketch)));
}

}  // namespace ringgan::gan
