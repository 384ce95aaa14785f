#include "ringgan/tensor/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "ringgan/error.hpp"
#include "ringgan/image_io.hpp"

namespace ringgan::tensor {

static_assert(std::endian::native == std::endian::little, "checkpoint buffers are written in host order");

const Tensorf& Checkpoint::at(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return t.tensor;
  }
  throw IoError("checkpoint has no tensor '" + name + "'");
}

bool Checkpoint::contains(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return true;
  }
  return false;
}

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& checkpoint) {
  nlohmann::json manifest{{"format", "ringgan-checkpoint"}, {"version", 1}, {"metadata", checkpoint.metadata}};
  manifest["tensors"] = nlohmann::json::array();
  std::size_t payload = 0;
  for (const auto& t : checkpoint.tensors) {
    manifest["tensors"].push_back({{"name", t.name}, {"shape", t.tensor.shape()}, {"dtype", "float32"}});
    payload += t.tensor.data().size() * sizeof(float);
  }
  const std::string header = manifest.dump() + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + payload);
  for (const auto& t : checkpoint.tensors) {
    const auto* raw = reinterpret_cast<const std::uint8_t*>(t.tensor.data().data());
    out.insert(out.end(), raw, raw + t.tensor.data().size() * sizeof(float));
  }
  return out;
}

Checkpoint deserialize_checkpoint(std::span<const std::uint8_t> bytes) {
  const auto newline = std::find(bytes.begin(), bytes.end(), std::uint8_t{'\n'});
  if (newline == bytes.end()) throw IoError("checkpoint: missing manifest line");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(bytes.begin(), newline);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint: malformed manifest: ") + e.what());
  }
  if (manifest.value("format", "") != "ringgan-checkpoint") throw IoError("checkpoint: unknown format tag");
  Checkpoint ckpt;
  ckpt.metadata = manifest.value("metadata", nlohmann::json::object());
  std::size_t offset = static_cast<std::size_t>(newline - bytes.begin()) + 1;
  for (const auto& entry : manifest.at("tensors")) {
    if (entry.at("dtype") != "float32") throw IoError("checkpoint: unsupported dtype");
    Shape shape = entry.at("shape").get<Shape>();
    const auto count = static_cast<std::size_t>(numel(shape));
    const std::size_t nbytes = count * sizeof(float);
    if (offset + nbytes > bytes.size()) throw IoError("checkpoint: truncated tensor buffer");
    std::vector<float> data(count);
    std::memcpy(data.data(), bytes.data() + offset, nbytes);
    offset += nbytes;
    ckpt.tensors.push_back({entry.at("name").get<std::string>(), Tensorf::from_data(std::move(shape), std::move(data))});
  }
  if (offset != bytes.size()) throw IoError("checkpoint: trailing bytes after last tensor");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  const auto bytes = serialize_checkpoint(checkpoint);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  write_file(tmp, bytes);
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  try {
    return deserialize_checkpoint(read_file(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace ringgan::tensor
