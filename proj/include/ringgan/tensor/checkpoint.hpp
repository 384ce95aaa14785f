#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ringgan/tensor/tensor.hpp"

namespace ringgan::tensor {

// File layout: one line of compact JSON
//   {"format":"ringgan-checkpoint","version":1,"metadata":{...},
//    "tensors":[{"name":..,"shape":[..],"dtype":"float32"}, ...]}
// terminated by '\n', followed by each tensor's raw little-endian float32
// buffer in manifest order.

struct NamedTensor {
  std::string name;
  Tensorf tensor;
};

struct Checkpoint {
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<NamedTensor> tensors;

  const Tensorf& at(const std::string& name) const;
  bool contains(const std::string& name) const;
};

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint deserialize_checkpoint(std::span<const std::uint8_t> bytes);

/// Writes to a sibling temporary file and renames it into place.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ringgan::tensor
